#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fibmap/errors.hpp"

namespace fibmap {

using BigInt = boost::multiprecision::cpp_int;

// Fibonacci numbers with the paper's indexing: u(1)=1, u(2)=2, u(n+1)=u(n)+u(n-1).
// (So u(0)=1 and u(-1)=0 when the recurrence is run backwards; interval counts
// in the covering construction use those two.)
inline BigInt fib(int n) {
    if (n < 1) throw DomainError("fib: index must be >= 1, got " + std::to_string(n));
    BigInt a = 1, b = 2; // u(1), u(2)
    if (n == 1) return a;
    for (int i = 2; i < n; ++i) {
        BigInt c = a + b;
        a = b;
        b = c;
    }
    return b;
}

// u(n) as int64 for hot loops; valid for n <= 86. Allows n in {-1, 0}.
inline std::int64_t fib_u64(int n) {
    static const auto table = [] {
        std::array<std::int64_t, 88> t{};
        t[0] = 0; // u(-1)
        t[1] = 1; // u(0)
        for (int i = 2; i < 88; ++i) t[i] = t[i - 1] + t[i - 2];
        return t;
    }();
    if (n < -1 || n > 86) throw DomainError("fib_u64: index out of range");
    return table[n + 1];
}

// Largest n with u(n) <= m (m >= 1).
inline int fib_floor_index(const BigInt& m) {
    int n = 1;
    BigInt a = 1, b = 2;
    while (b <= m) {
        BigInt c = a + b;
        a = b;
        b = c;
        ++n;
    }
    return n;
}

// A finite or eventually-period-2 set of Fibonacci indices {n_1 < n_2 < ...},
// gaps >= 2.  tail_start > 0 marks the continuation {tail_start, tail_start+2, ...};
// the two maximal sequences of Remark 3.5 are the pure tails from 1 and from 2.
struct FibIndexSet {
    std::vector<int> indices;
    int tail_start = 0;

    bool finite() const { return tail_start == 0; }

    bool valid() const {
        int prev = -1;
        for (int n : indices) {
            if (n < 1 || (prev >= 0 && n < prev + 2)) return false;
            prev = n;
        }
        if (tail_start != 0 && (tail_start < 1 || (prev >= 0 && tail_start < prev + 2)))
            return false;
        return true;
    }

    bool operator==(const FibIndexSet&) const = default;

    std::string str() const {
        std::string s = "{";
        for (size_t i = 0; i < indices.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(indices[i]);
        }
        if (tail_start) {
            if (!indices.empty()) s += ",";
            s += std::to_string(tail_start) + "," + std::to_string(tail_start + 2) + ",...";
        }
        return s + "}";
    }
};

inline BigInt fib_decode(const FibIndexSet& s) {
    if (!s.finite()) throw RepresentationError("fib_decode: infinite Fibonacci sum");
    BigInt m = 0;
    for (int n : s.indices) m += fib(n);
    return m;
}

// Greedy Zeckendorf encoding; unique by Definition 2.3.
inline FibIndexSet zeckendorf(BigInt m) {
    if (m < 1) throw DomainError("zeckendorf: argument must be >= 1");
    FibIndexSet out;
    int n = fib_floor_index(m);
    while (m > 0) {
        while (fib(n) > m) --n;
        out.indices.push_back(n);
        m -= fib(n);
        n -= 2;
    }
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

// Zeckendorf indices of a machine integer (ascending), avoiding BigInt.
inline std::vector<int> zeck_indices(std::int64_t m) {
    if (m < 1) throw DomainError("zeck_indices: argument must be >= 1");
    std::vector<int> idx;
    int n = 1;
    while (n < 86 && fib_u64(n + 1) <= m) ++n;
    while (m > 0) {
        while (fib_u64(n) > m) --n;
        idx.push_back(n);
        m -= fib_u64(n);
        n -= 2;
    }
    std::sort(idx.begin(), idx.end());
    return idx;
}

// The adic successor of Remark 3.5: add-one on finite sums; the two maximal
// period-2 sequences map to the empty set.
inline FibIndexSet successor(const FibIndexSet& s) {
    if (!s.valid()) throw DomainError("successor: invalid index set");
    if (s.finite()) {
        BigInt m = fib_decode(s);
        return zeckendorf(m + 1);
    }
    if (s.indices.empty() && (s.tail_start == 1 || s.tail_start == 2))
        return FibIndexSet{};
    throw RepresentationError("successor: unsupported infinite tail " + s.str());
}

// sigma of Lemma 3.4 / section 6: every index incremented by one.
inline FibIndexSet sigma_shift(const FibIndexSet& s) {
    if (!s.valid()) throw DomainError("sigma_shift: invalid index set");
    FibIndexSet out;
    out.indices.reserve(s.indices.size());
    for (int n : s.indices) out.indices.push_back(n + 1);
    out.tail_start = s.tail_start ? s.tail_start + 1 : 0;
    return out;
}

inline std::int64_t sigma_shift_u64(std::int64_t m, int times = 1) {
    std::int64_t out = 0;
    for (int n : zeck_indices(m)) out += fib_u64(n + times);
    return out;
}

// epsilon_m = (-1)^k with k the number of Zeckendorf summands (section 2).
inline int epsilon(const BigInt& m) {
    if (m < 1) throw DomainError("epsilon: argument must be >= 1");
    return zeckendorf(m).indices.size() % 2 == 1 ? -1 : +1;
}

// All 0/1 words of length k with no two consecutive ones; count is u(k+1).
inline std::vector<std::string> enumerate_cylinders(int k) {
    if (k < 1) throw DomainError("enumerate_cylinders: depth must be >= 1");
    std::vector<std::string> words{""};
    for (int i = 0; i < k; ++i) {
        std::vector<std::string> next;
        next.reserve(2 * words.size());
        for (const auto& w : words) {
            next.push_back(w + '0');
            if (w.empty() || w.back() == '0') next.push_back(w + '1');
        }
        words.swap(next);
    }
    std::sort(words.begin(), words.end());
    return words;
}

// 0/1 word of the Zeckendorf digits a_1 a_2 ... a_k (Lemma 3.4 coordinates).
inline std::string zeck_word(const BigInt& m, int k) {
    std::string w(k, '0');
    if (m > 0)
        for (int n : zeckendorf(m).indices)
            if (n <= k) w[n - 1] = '1';
    return w;
}

} // namespace fibmap
