#pragma once

#include <stdexcept>
#include <string>

namespace fibmap {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments (out-of-range integers, points outside a map's domain).
struct DomainError : Error {
    using Error::Error;
};

// An infinite Fibonacci sum outside the supported period-2 tails.
struct RepresentationError : Error {
    using Error::Error;
};

// A sign/value could not be certified at the working precision,
// or a two-precision certificate ran out of digits.
struct PrecisionError : Error {
    using Error::Error;
};

// A bisection could not bracket its target.
struct SearchError : Error {
    using Error::Error;
};

// A sequence or map does not have the shape an operation requires
// (non-renormalizable prefix, overlapping branch domains, ...).
struct ShapeError : Error {
    using Error::Error;
};

// A constructed object failed its own consistency validation.
struct StructuralError : Error {
    using Error::Error;
};

// A point could not be resolved to a cell at the configured depth.
struct DepthError : Error {
    using Error::Error;
};

} // namespace fibmap
