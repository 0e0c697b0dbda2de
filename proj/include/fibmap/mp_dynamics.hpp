#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fibmap/errors.hpp"
#include "fibmap/kneading.hpp"
#include "fibmap/mp.hpp"

namespace fibmap {

// Critical orbit x_1..x_N with a two-precision certificate: the same
// recursion is run at p and 2p bits and the agreeing leading decimal digits
// are recorded per point.  Points store the 2p run.
struct OrbitRecord {
    std::vector<mp::Real> x;          // x[i-1] is x_i
    std::vector<int> certified_digits;
    mpfr_prec_t prec = 0;             // the base precision p

    std::int64_t size() const { return static_cast<std::int64_t>(x.size()); }

    const mp::Real& at(std::int64_t i) const {
        if (i < 1 || i > size()) throw DomainError("OrbitRecord: index out of range");
        return x[static_cast<size_t>(i - 1)];
    }
    int digits(std::int64_t i) const {
        if (i < 1 || i > size()) throw DomainError("OrbitRecord: index out of range");
        return certified_digits[static_cast<size_t>(i - 1)];
    }
};

// x_{i+1} = x_i^2 + c from x_0 = 0 (Theorem 1.1's normalization).
inline OrbitRecord orbit_quadratic(const mp::Real& c, std::int64_t N, mpfr_prec_t p) {
    if (N < 1) throw DomainError("orbit_quadratic: need N >= 1");
    if (p < 64) throw DomainError("orbit_quadratic: need p >= 64");
    OrbitRecord orb;
    orb.prec = p;
    orb.x.reserve(static_cast<size_t>(N));
    orb.certified_digits.reserve(static_cast<size_t>(N));
    mp::Real xl = c.rounded_to(p), xh = c.rounded_to(2 * p);
    mp::Real cl = c.rounded_to(p), ch = c.rounded_to(2 * p);
    for (std::int64_t i = 1; i <= N; ++i) {
        if (i > 1) {
            xl = sqr(xl) + cl;
            xh = sqr(xh) + ch;
        }
        int d = mp::agreeing_digits(xl, xh);
        if (d <= 0)
            throw PrecisionError("orbit_quadratic: certificate exhausted at index " +
                                 std::to_string(i) + " (p=" + std::to_string(p) + ")");
        orb.x.push_back(xh);
        orb.certified_digits.push_back(d);
    }
    return orb;
}

// Certified signs over the orbit prefix.  A sign is accepted when both runs
// agree and the value clears the run difference by a safety factor.
inline std::vector<std::int8_t> itinerary(const OrbitRecord& orb) {
    std::vector<std::int8_t> s;
    s.reserve(static_cast<size_t>(orb.size()));
    for (std::int64_t i = 1; i <= orb.size(); ++i) {
        const mp::Real& x = orb.at(i);
        if (x.is_zero() || orb.digits(i) < 2)
            throw PrecisionError("itinerary: sign not certifiable at index " + std::to_string(i));
        s.push_back(static_cast<std::int8_t>(x.sign()));
    }
    return s;
}

// prod |2 x_i| over the window [from, from+count-1], accumulated exactly
// (the result precision grows), so chain-rule identities hold bit-for-bit.
// count = 0 gives the empty product.
inline mp::Real derivative_product(const OrbitRecord& orb, std::int64_t from, std::int64_t count) {
    if (from < 1 || count < 0 || from + count - 1 > orb.size())
        throw DomainError("derivative_product: window out of range");
    mp::Real prod = mp::Real::of_long(1, 64);
    for (std::int64_t i = from; i < from + count; ++i)
        prod = mul_exact(prod, abs(ldexp2(orb.at(i), 1)));
    return prod;
}

// log2 |(f^n)'(x_1)| for n = 1..N, accumulated as doubles (scale-free use:
// regressions, series tails).
inline std::vector<double> log2_derivative_prefix(const OrbitRecord& orb, std::int64_t N) {
    if (N > orb.size()) throw DomainError("log2_derivative_prefix: N beyond orbit");
    std::vector<double> out(static_cast<size_t>(N) + 1, 0.0);
    double acc = 0;
    for (std::int64_t i = 1; i <= N; ++i) {
        acc += 1.0 + orb.at(i).log2_abs();
        out[static_cast<size_t>(i)] = acc;
    }
    return out;
}

// Poincare length [H:L] = log ((d-b)(c-a) / ((d-c)(b-a))) for a<b<c<d (Appendix).
inline mp::Real poincare_length(const mp::Real& a, const mp::Real& b, const mp::Real& c,
                                const mp::Real& d) {
    if (!(a < b && b < c && c < d))
        throw DomainError("poincare_length: need a < b < c < d strictly");
    return log(((d - b) * (c - a)) / ((d - c) * (b - a)));
}

// ---- piecewise orbits over a two-branch map ----

// Where a point sits relative to a two-branch domain.
enum class BranchCell : char { J = 'J', TMinus = 'M', TPlus = 'P', Outside = 'E' };

struct PiecewiseOrbit {
    OrbitRecord orb;
    ClassASeq syms;
    std::int64_t escape_index = 0; // 0: completed; else the first index outside J u T
};

// MapT must provide eval(x) and classify(x) -> BranchCell, both pure.
// classify decisions are certified by agreement of the p and 2p runs.
template <class MapT>
PiecewiseOrbit orbit_piecewise(const MapT& map, const mp::Real& x0, std::int64_t N,
                               mpfr_prec_t p, int component) {
    PiecewiseOrbit out;
    out.orb.prec = p;
    out.syms.component = component;
    mp::Real xl = x0.rounded_to(p), xh = x0.rounded_to(2 * p);
    for (std::int64_t i = 1; i <= N; ++i) {
        xl = map.eval(xl);
        xh = map.eval(xh);
        int d = mp::agreeing_digits(xl, xh);
        BranchCell bl = map.classify(xl), bh = map.classify(xh);
        if (bl != bh)
            throw PrecisionError("orbit_piecewise: branch membership not certified at index " +
                                 std::to_string(i));
        out.orb.x.push_back(xh);
        out.orb.certified_digits.push_back(d);
        if (bh == BranchCell::Outside) {
            out.escape_index = i;
            return out;
        }
        if (d <= 0)
            throw PrecisionError("orbit_piecewise: certificate exhausted at index " +
                                 std::to_string(i));
        out.syms.syms.push_back(static_cast<ClassASym>(static_cast<char>(bh)));
    }
    return out;
}

} // namespace fibmap
