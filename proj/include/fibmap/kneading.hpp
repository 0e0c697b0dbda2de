#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fibmap/errors.hpp"
#include "fibmap/fib_arith.hpp"

namespace fibmap {

// sgn(x_i) of the Fibonacci kneading data, Lemma 2.1.  At i = u(n) the sign
// is (-1)^((n+1)(n+2)/2), i.e. negative for n = 0,1 (mod 4); elsewhere the
// recursion (2-2) reduces i by the largest Fibonacci number below it, so the
// sign is decided by the smallest Zeckendorf index.
inline int fib_sign(std::int64_t i) {
    if (i < 1) throw DomainError("fib_sign: index must be >= 1");
    int n1 = zeck_indices(i).front();
    return n1 % 4 == 0 || n1 % 4 == 1 ? -1 : +1;
}

// Signs of x_1..x_N in one pass: fill u(n) slots by (2-3), copy ranges by (2-2).
inline std::vector<std::int8_t> fib_sign_table(std::int64_t N) {
    std::vector<std::int8_t> s(static_cast<size_t>(N) + 1, 0);
    for (int n = 1; n <= 86 && fib_u64(n) <= N; ++n)
        s[fib_u64(n)] = (n % 4 == 0 || n % 4 == 1) ? -1 : +1;
    for (int n = 1; n <= 86 && fib_u64(n) < N; ++n) {
        std::int64_t lo = fib_u64(n), hi = std::min<std::int64_t>(N, fib_u64(n + 1) - 1);
        for (std::int64_t j = lo + 1; j <= hi; ++j) s[j] = s[j - lo];
    }
    return s;
}

// Kneading series coefficients eps_0 = 1, eps_n = sgn(x_1 ... x_n), Eq. (2-5).
struct KneadingSeries {
    std::vector<std::int8_t> eps; // eps[n] for n = 0..N

    std::int64_t horizon() const { return static_cast<std::int64_t>(eps.size()) - 1; }
};

inline KneadingSeries fib_kneading_series(std::int64_t N) {
    auto s = fib_sign_table(N);
    KneadingSeries k;
    k.eps.resize(static_cast<size_t>(N) + 1);
    k.eps[0] = 1;
    int prod = 1;
    for (std::int64_t n = 1; n <= N; ++n) {
        prod *= s[n];
        k.eps[n] = static_cast<std::int8_t>(prod);
    }
    return k;
}

inline KneadingSeries constant_kneading_series(std::int64_t N, int value) {
    KneadingSeries k;
    k.eps.assign(static_cast<size_t>(N) + 1, static_cast<std::int8_t>(value));
    k.eps[0] = 1;
    return k;
}

struct AdmissibilityVerdict {
    bool admissible = true;
    std::int64_t horizon = 0;     // the verdict is "true up to this horizon"
    std::int64_t fail_m = 0, fail_i = 0;
};

// Condition (2-6), checked for every m up to the truncation: the smallest i
// with eps_{m+i} != eps_m eps_i must have eps_i = -1.
inline AdmissibilityVerdict admissible(const KneadingSeries& k) {
    std::int64_t N = k.horizon();
    if (N < 2) throw DomainError("admissible: need horizon >= 2");
    AdmissibilityVerdict v;
    v.horizon = N;
    for (std::int64_t m = 1; m < N; ++m) {
        for (std::int64_t i = 1; i + m <= N; ++i) {
            if (k.eps[m + i] != k.eps[m] * k.eps[i]) {
                if (k.eps[i] != -1) return {false, N, m, i};
                break;
            }
        }
    }
    return v;
}

struct EntropyResult {
    double root = 0;       // smallest root of the truncated D in (0,1)
    double root_check = 0; // same from the doubled truncation
    double growth = 0;     // s = 1/root, 0 if no root
    double entropy = 0;    // log s
    std::int64_t horizon = 0;
};

namespace detail {
inline double eval_kneading_poly(const KneadingSeries& k, std::int64_t N, double t) {
    double acc = 0;
    for (std::int64_t n = N; n >= 1; --n) acc = (acc + k.eps[n]) * t;
    return 1.0 + acc;
}

inline std::optional<double> smallest_root01(const KneadingSeries& k, std::int64_t N) {
    const int grid = 1 << 14;
    double pv = 1.0; // D(0) = 1
    for (int g = 1; g <= grid; ++g) {
        double t = static_cast<double>(g) / grid;
        double v = detail::eval_kneading_poly(k, N, t);
        if (v == 0.0) return t;
        if ((pv > 0) != (v > 0)) {
            double lo = static_cast<double>(g - 1) / grid, hi = t;
            for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
                double mid = 0.5 * (lo + hi);
                double vm = detail::eval_kneading_poly(k, N, mid);
                if ((vm > 0) == (pv > 0))
                    lo = mid;
                else
                    hi = mid;
            }
            return 0.5 * (lo + hi);
        }
        pv = v;
    }
    return std::nullopt;
}
} // namespace detail

// Growth rate and entropy from the kneading determinant D(t) = 1 + sum eps_n t^n:
// s = 1/r for the smallest root r in (0,1), h = log s.  The series must extend
// to 2N so the truncation can be cross-checked.
inline EntropyResult entropy_from_kneading(const KneadingSeries& k, std::int64_t N, double tol) {
    if (N < 2 || k.horizon() < 2 * N)
        throw DomainError("entropy_from_kneading: series must cover 2N coefficients");
    auto vr = admissible(k);
    if (!vr.admissible)
        throw DomainError("entropy_from_kneading: series not admissible at m=" +
                          std::to_string(vr.fail_m));
    auto r1 = detail::smallest_root01(k, N);
    auto r2 = detail::smallest_root01(k, 2 * N);
    EntropyResult res;
    res.horizon = N;
    if (!r1 && !r2) return res; // no root: zero entropy
    if (!r1 || !r2)
        throw PrecisionError("entropy_from_kneading: root exists at one truncation only");
    res.root = *r1;
    res.root_check = *r2;
    res.growth = 1.0 / *r1;
    res.entropy = std::log(res.growth);
    if (std::fabs(1.0 / *r1 - 1.0 / *r2) > tol)
        throw PrecisionError("entropy_from_kneading: root not stabilized: s_N=" +
                             std::to_string(1.0 / *r1) + " s_2N=" + std::to_string(1.0 / *r2));
    return res;
}

// ---- class A kneading sequences (section 6) ----

enum class ClassASym : char { J = 'J', TPlus = 'P', TMinus = 'M' };

struct ClassASeq {
    std::vector<ClassASym> syms; // syms[i-1] is the symbol containing x_i
    int component = +1;          // +1 for A^+, -1 for A^-

    std::string str() const {
        std::string s;
        s.reserve(syms.size());
        for (auto c : syms) s += static_cast<char>(c);
        return s;
    }

    static ClassASeq parse(const std::string& s, int component) {
        ClassASeq q;
        q.component = component;
        for (char c : s) {
            if (c == 'J' || c == 'P' || c == 'M')
                q.syms.push_back(static_cast<ClassASym>(c));
            else if (c != ' ' && c != '|')
                throw DomainError(std::string("ClassASeq: bad symbol '") + c + "'");
        }
        return q;
    }

    bool operator==(const ClassASeq&) const = default;
};

// fib^+ / fib^- prefixes.  Seed J T_- T_+ (resp. J T_+ T_+); the block from
// u(n)+1 to u(n+1) repeats the prefix up to u(n-1) with its final T_s flipped.
inline ClassASeq fib_classA(int component, std::int64_t L) {
    if (L < 1) throw DomainError("fib_classA: length must be >= 1");
    if (component != 1 && component != -1) throw DomainError("fib_classA: component is +1/-1");
    ClassASeq out;
    out.component = component;
    using S = ClassASym;
    out.syms = component > 0 ? std::vector<S>{S::J, S::TMinus, S::TPlus}
                             : std::vector<S>{S::J, S::TPlus, S::TPlus};
    int n = 3;
    while (static_cast<std::int64_t>(out.syms.size()) < L) {
        std::int64_t blk = fib_u64(n - 1);
        for (std::int64_t i = 0; i < blk; ++i) out.syms.push_back(out.syms[i]);
        S& last = out.syms.back();
        last = last == S::TMinus ? S::TPlus : S::TMinus;
        ++n;
    }
    out.syms.resize(static_cast<size_t>(L));
    return out;
}

// Symbolic renormalization, rules (i)-(iii) of section 6 in one left-to-right
// pass with one-symbol lookahead: J is crossed out; T_s followed by J becomes
// T_{ks} (k the component); T_s followed by T_r becomes J.  The final symbol's
// missing lookahead is resolved by the J-position law of Fibonacci sequences
// (position L+1 holds a J exactly when the smallest Zeckendorf index of L
// is >= 3), which is what makes u(n)-prefixes map onto u(n-1)-prefixes.
inline ClassASeq renormalize_kneading(const ClassASeq& seq) {
    using S = ClassASym;
    const auto& in = seq.syms;
    if (in.size() < 2 || in[0] != S::J || in[1] == S::J)
        throw ShapeError("renormalize_kneading: sequence must start with J T_s");
    ClassASeq out;
    out.component = -seq.component;
    for (size_t j = 0; j < in.size(); ++j) {
        if (in[j] == S::J) continue;
        bool next_is_j;
        if (j + 1 < in.size()) {
            next_is_j = in[j + 1] == S::J;
        } else {
            std::int64_t L = static_cast<std::int64_t>(in.size());
            next_is_j = zeck_indices(L).front() >= 3;
        }
        if (next_is_j) {
            bool minus = in[j] == S::TMinus;
            if (seq.component < 0) minus = !minus;
            out.syms.push_back(minus ? S::TMinus : S::TPlus);
        } else {
            out.syms.push_back(S::J);
        }
    }
    return out;
}

} // namespace fibmap
