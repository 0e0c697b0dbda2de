#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fibmap/cover.hpp"
#include "fibmap/errors.hpp"
#include "fibmap/fib_arith.hpp"
#include "fibmap/quadsurd.hpp"

namespace fibmap {

// Parameter of the piecewise-linear model of Lemma 3.2: 0 < t < 1 - t^2.
struct ModelParams {
    Rational t;

    explicit ModelParams(Rational t_ = Rational(1, 2)) : t(std::move(t_)) {
        if (!(t > 0 && t * t + t < 1))
            throw DomainError("ModelParams: need 0 < t and t^2 + t < 1");
    }
};

// Leading sign of y_m: -1 for n_1 = 0,1 (mod 4), +1 for n_1 = 2,3 (mod 4).
inline int model_leading_sign(int n1) { return n1 % 4 == 0 || n1 % 4 == 1 ? -1 : +1; }

inline Rational rational_pow(const Rational& t, int n) {
    Rational r(1);
    for (int i = 0; i < n; ++i) r *= t;
    return r;
}

// y_m = +-(t^{n_1} - t^{n_2} + - ...): alternating sum over the Fibonacci sum.
inline Rational y_value(const FibIndexSet& mu, const ModelParams& p) {
    if (!mu.valid()) throw DomainError("y_value: invalid index set");
    if (!mu.finite()) throw RepresentationError("y_value: infinite sums not supported");
    if (mu.indices.empty()) return Rational(0);
    Rational acc(0);
    int s = 1;
    for (int n : mu.indices) {
        acc += s * rational_pow(p.t, n);
        s = -s;
    }
    return model_leading_sign(mu.indices.front()) * acc;
}

inline Rational y_value(const BigInt& m, const ModelParams& p) {
    if (m == 0) return Rational(0);
    return y_value(zeckendorf(m), p);
}

// Symbolic order of Remark 3.1.  Negative leading blocks (n_1 = 0,1 mod 4)
// sit left of 0 and increase with n_1; positive blocks decrease with n_1.
// Within a common prefix of length k the magnitude grows with the next index
// for k odd and shrinks for k even ("no continuation" counts as +infinity).
inline int order_compare(const FibIndexSet& m1, const FibIndexSet& m2) {
    if (!m1.valid() || !m2.valid()) throw DomainError("order_compare: invalid index set");
    if (!m1.finite() || !m2.finite())
        throw RepresentationError("order_compare: infinite sums not supported");
    const auto& a = m1.indices;
    const auto& b = m2.indices;
    if (a == b) return 0;
    if (a.empty() || b.empty()) {
        // y_0 = 0 separates the two sign classes
        const auto& c = a.empty() ? b : a;
        int s = model_leading_sign(c.front());
        return a.empty() ? -s : s;
    }
    int sa = model_leading_sign(a.front());
    int sb = model_leading_sign(b.front());
    if (sa != sb) return sa < sb ? -1 : +1;
    if (a.front() != b.front()) {
        // same side of 0: larger leading index means closer to 0
        int closer = a.front() > b.front() ? -1 : +1; // -1: |y(a)| < |y(b)|
        return sa > 0 ? closer : -closer;
    }
    size_t k = 0;
    while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
    // next index after the common prefix, absent = +infinity
    long na = k < a.size() ? a[k] : -1;
    long nb = k < b.size() ? b[k] : -1;
    bool mag_a_bigger; // |y(a)| > |y(b)|
    if (k % 2 == 1)    // k odd: magnitude increases with the next index
        mag_a_bigger = na == -1 || (nb != -1 && na > nb);
    else
        mag_a_bigger = !(na == -1 || (nb != -1 && na > nb));
    int mag = mag_a_bigger ? +1 : -1;
    return sa > 0 ? mag : -mag;
}

// ---- the extended map F on [y_1, y_2] ----

namespace detail {
// Interval A_n with its endpoint orbit indices; lo/hi sorted by value.
struct ModelCell {
    int n;
    Rational lo, hi;
    BigInt lo_idx, hi_idx;
};

inline ModelCell model_cell(int n, const ModelParams& p) {
    if (n == 0) {
        return {0, y_value(BigInt(fib_u64(4)), p), Rational(0), BigInt(fib_u64(4)), BigInt(0)};
    }
    if (n == 1) {
        return {1, Rational(0), y_value(BigInt(3), p), BigInt(0), BigInt(3)};
    }
    BigInt m1 = fib(n) - 1;
    BigInt m2 = fib(n) + fib(n + 2) - 1;
    Rational v1 = y_value(m1, p), v2 = y_value(m2, p);
    if (v1 <= v2) return {n, v1, v2, m1, m2};
    return {n, v2, v1, m2, m1};
}
} // namespace detail

// F(y_m) for known m is just y_{m+1}; this evaluates F at an arbitrary point
// by locating its cell A_n (linear, slope (-1)^(n-1)) or the gap between
// A_n and A_{n+4} (linear between the cells' adjacent endpoint images).
inline Rational eval_F(const Rational& x, const ModelParams& p, int depth = 40) {
    Rational y1 = y_value(BigInt(1), p), y2 = y_value(BigInt(2), p);
    if (x < y1 || x > y2) throw DomainError("eval_F: point outside [y_1, y_2]");
    if (depth < 8) throw DomainError("eval_F: depth too small");

    auto f_at = [&p](const BigInt& idx) { return y_value(idx + 1, p); };

    std::vector<detail::ModelCell> cells;
    cells.reserve(static_cast<size_t>(depth) + 1);
    for (int n = 0; n <= depth; ++n) cells.push_back(detail::model_cell(n, p));

    for (const auto& c : cells) {
        if (x >= c.lo && x <= c.hi) {
            if (c.n == 0) return y_value(BigInt(1), p) - x;
            if (c.n == 1) return y_value(BigInt(1), p) + x;
            int slope = c.n % 2 == 0 ? -1 : +1; // (-1)^(n-1)
            // anchor at the endpoint y_{u(n)-1} -> y_{u(n)}
            BigInt anchor = fib(c.n) - 1;
            Rational ax = y_value(anchor, p);
            return y_value(anchor + 1, p) + slope * (x - ax);
        }
    }
    for (int n = 0; n + 4 <= depth; ++n) {
        const auto& c1 = cells[static_cast<size_t>(n)];
        const auto& c2 = cells[static_cast<size_t>(n) + 4];
        const auto& left = c1.lo < c2.lo ? c1 : c2;
        const auto& right = c1.lo < c2.lo ? c2 : c1;
        if (x > left.hi && x < right.lo) {
            Rational xa = left.hi, xb = right.lo;
            Rational fa = f_at(left.hi_idx), fb = f_at(right.lo_idx);
            return fa + (x - xa) * (fb - fa) / (xb - xa);
        }
    }
    throw DepthError("eval_F: point not resolved at depth " + std::to_string(depth));
}

// Gap slope between A_n and A_{n+4} (Lemma 3.2 proof display).
inline Rational model_gap_slope(int n, const ModelParams& p, int depth = 40) {
    if (n < 0 || n + 4 > depth) throw DomainError("model_gap_slope: bad n");
    auto c1 = detail::model_cell(n, p);
    auto c2 = detail::model_cell(n + 4, p);
    const auto& left = c1.lo < c2.lo ? c1 : c2;
    const auto& right = c1.lo < c2.lo ? c2 : c1;
    Rational fa = y_value(left.hi_idx + 1, p), fb = y_value(right.lo_idx + 1, p);
    return (fb - fa) / (right.lo - left.hi);
}

// phi(x_mu) = gamma (gamma^{n_1} + gamma^{n_2} + ...) mod 1 (Lemma 3.9).
// A period-2 tail from t0 sums to -gamma^{t0-1} since 1 - gamma^2 = -gamma.
inline QuadSurd phi(const FibIndexSet& mu) {
    if (!mu.valid()) throw DomainError("phi: invalid index set");
    QuadSurd g = QuadSurd::golden_gamma();
    QuadSurd acc{Rational(0), Rational(0)};
    for (int n : mu.indices) acc = acc + gamma_pow(n);
    if (mu.tail_start) acc = acc - gamma_pow(mu.tail_start - 1);
    return (g * acc).mod1();
}

inline QuadSurd phi(const BigInt& m) {
    if (m == 0) return QuadSurd{Rational(0), Rational(0)};
    return phi(zeckendorf(m));
}

// The orientation-reversing involution of the model: for y >= 0 the unique
// point y' <= 0 with F(y') = F(y), found by inverting F on the negative side
// cell by cell.  Needed for the closest-return chain y_1 < y_2' < y_3' < ...
inline Rational model_involution(const Rational& y, const ModelParams& p, int depth = 40) {
    if (y < 0) throw DomainError("model_involution: argument must be >= 0");
    Rational target = eval_F(y, p, depth);
    // Invert F piece by piece on the negative side [y_1, 0]: each cell and
    // gap is linear, so the preimage is one exact division.
    std::vector<detail::ModelCell> cells;
    for (int n = 0; n <= depth; ++n) cells.push_back(detail::model_cell(n, p));
    auto f_at = [&p](const BigInt& idx) { return y_value(idx + 1, p); };
    for (const auto& c : cells) {
        if (!(c.hi <= 0)) continue; // keep the negative side only
        Rational fa = f_at(c.lo_idx), fb = f_at(c.hi_idx);
        Rational lo = fa < fb ? fa : fb, hi = fa < fb ? fb : fa;
        if (target < lo || target > hi || fa == fb) continue;
        Rational cand = c.lo + (target - fa) * (c.hi - c.lo) / (fb - fa);
        if (cand >= c.lo && cand <= c.hi && eval_F(cand, p, depth) == target) return cand;
    }
    for (int n = 0; n + 4 <= depth; ++n) {
        const auto& c1 = cells[static_cast<size_t>(n)];
        const auto& c2 = cells[static_cast<size_t>(n) + 4];
        const auto& left = c1.lo < c2.lo ? c1 : c2;
        const auto& right = c1.lo < c2.lo ? c2 : c1;
        if (!(right.lo <= 0)) continue;
        Rational fa = f_at(left.hi_idx), fb = f_at(right.lo_idx);
        Rational lo = fa < fb ? fa : fb, hi = fa < fb ? fb : fa;
        if (target < lo || target > hi || fa == fb) continue;
        Rational cand = left.hi + (target - fa) * (right.lo - left.hi) / (fb - fa);
        if (cand > left.hi && cand < right.lo && eval_F(cand, p, depth) == target) return cand;
    }
    throw DepthError("model_involution: preimage not found at depth " + std::to_string(depth));
}

// Endpoints of M^n rendered in the model: exact rationals.
struct ModelCoverInterval {
    CoverEntry sym;
    Rational lo, hi;
};

inline std::vector<ModelCoverInterval> model_cover(int n, const ModelParams& p) {
    std::vector<ModelCoverInterval> out;
    for (const auto& e : cover_indices(n)) {
        Rational a = y_value(BigInt(e.p), p), b = y_value(BigInt(e.q), p);
        if (a > b) std::swap(a, b);
        out.push_back({e, a, b});
    }
    return out;
}

} // namespace fibmap
