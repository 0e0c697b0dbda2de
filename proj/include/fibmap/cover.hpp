#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fibmap/errors.hpp"
#include "fibmap/fib_arith.hpp"

namespace fibmap {

// One interval of the level-n covering M^n (Lemma 3.7), identified by its
// endpoint orbit indices.  The recursion of the proof gives the indices
// directly: I^n_0 spans x_{u(n)} and x_{u(n+1)} (n odd) or x_{u(n+2)} (n even);
// the first image folds onto [x_1, x_{u(n)+1}]; later images shift both
// endpoints.  J^n_k is I^{n+1}_{k+u(n-1)} relabelled.
struct CoverEntry {
    char label;        // 'I' or 'J'
    int level;         // n of I^n_k / J^n_k
    std::int64_t k;    // iterate index
    std::int64_t p, q; // endpoint orbit indices (unordered)

    std::string str() const {
        return std::string(1, label) + "^" + std::to_string(level) + "_" + std::to_string(k) +
               "[x" + std::to_string(p) + ",x" + std::to_string(q) + "]";
    }
};

inline CoverEntry cover_I_entry(int n, std::int64_t k) {
    if (k == 0) {
        std::int64_t other = n % 2 == 1 ? fib_u64(n + 1) : fib_u64(n + 2);
        return {'I', n, 0, fib_u64(n), other};
    }
    return {'I', n, k, k, fib_u64(n) + k};
}

// M^n as u(n) entries: I^n_k for k < u(n-1) and J^n_k = I^{n+1}_{k+u(n-1)}
// for k < u(n-2).
inline std::vector<CoverEntry> cover_indices(int n) {
    if (n < 1) throw DomainError("cover_indices: level must be >= 1");
    if (n > 84) throw DomainError("cover_indices: level too large");
    std::vector<CoverEntry> out;
    out.reserve(static_cast<size_t>(fib_u64(n)));
    for (std::int64_t k = 0; k < fib_u64(n - 1); ++k) out.push_back(cover_I_entry(n, k));
    for (std::int64_t k = 0; k < fib_u64(n - 2); ++k) {
        CoverEntry e = cover_I_entry(n + 1, k + fib_u64(n - 1));
        e.label = 'J';
        e.level = n;
        e.k = k;
        out.push_back(e);
    }
    if (static_cast<std::int64_t>(out.size()) != fib_u64(n))
        throw StructuralError("cover_indices: count mismatch at level " + std::to_string(n));
    return out;
}

// Largest orbit index appearing among the endpoints of M^n.
inline std::int64_t cover_max_index(int n) {
    std::int64_t mx = 0;
    for (const auto& e : cover_indices(n)) mx = std::max({mx, e.p, e.q});
    return mx;
}

} // namespace fibmap
