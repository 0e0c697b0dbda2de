#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "fibmap/fib_arith.hpp"
#include "fibmap/kneading.hpp"

using namespace fibmap;

namespace {

// Oracle: all subsets of {u(1)..u(K)} with non-consecutive indices, by sum.
std::map<long, std::vector<int>> brute_force_fib_sums(int K) {
    std::map<long, std::vector<int>> out;
    for (unsigned mask = 1; mask < (1u << K); ++mask) {
        bool ok = true;
        long sum = 0;
        std::vector<int> idx;
        for (int i = 1; i <= K; ++i) {
            if (!(mask & (1u << (i - 1)))) continue;
            if (!idx.empty() && i < idx.back() + 2) {
                ok = false;
                break;
            }
            idx.push_back(i);
            sum += static_cast<long>(fib_u64(i));
        }
        if (!ok) continue;
        REQUIRE(out.find(sum) == out.end()); // uniqueness of Fibonacci sums
        out[sum] = idx;
    }
    return out;
}

} // namespace

TEST_CASE("fib values and domain") {
    CHECK(fib(1) == 1);
    CHECK(fib(2) == 2);
    CHECK(fib(4) == 5);
    CHECK(fib(5) == 8);
    CHECK(fib(10) == 89);
    CHECK(fib(30) == BigInt(1346269));
    CHECK_THROWS_AS(fib(0), DomainError);
    CHECK_THROWS_AS(fib(-3), DomainError);
    for (int n = 3; n < 60; ++n) CHECK(fib(n) == fib(n - 1) + fib(n - 2));
}

TEST_CASE("zeckendorf against subset enumeration oracle") {
    auto oracle = brute_force_fib_sums(12);
    for (long m = 1; m <= 200; ++m) {
        auto z = zeckendorf(BigInt(m));
        REQUIRE(z.valid());
        CHECK(z.indices == oracle.at(m));
        CHECK(fib_decode(z) == m);
    }
    CHECK(zeckendorf(BigInt(12)).indices == std::vector<int>{1, 3, 5});
    CHECK(zeckendorf(BigInt(7)).indices == std::vector<int>{2, 4});
    // identity (2-4): u(6)-1 = 12 hits the odd-index branch
    CHECK(fib(6) - 1 == 12);
    CHECK_THROWS_AS(zeckendorf(BigInt(0)), DomainError);
    CHECK_THROWS_AS(zeckendorf(BigInt(-5)), DomainError);
}

TEST_CASE("round trip and successor for m up to 1e5") {
    FibIndexSet prev = zeckendorf(BigInt(1));
    for (long m = 1; m <= 100000; ++m) {
        auto z = zeckendorf(BigInt(m));
        if (m > 1) CHECK(z == successor(prev));
        CHECK(fib_decode(z) == m);
        prev = z;
    }
}

TEST_CASE("successor edge cases") {
    CHECK(successor(FibIndexSet{}) == zeckendorf(BigInt(1)));
    CHECK(successor(zeckendorf(BigInt(4))).indices == std::vector<int>{4}); // {1,3} -> {4}
    // the two maximal sequences map to zero (Remark 3.5)
    CHECK(successor(FibIndexSet{{}, 1}) == FibIndexSet{});
    CHECK(successor(FibIndexSet{{}, 2}) == FibIndexSet{});
    CHECK_THROWS_AS(successor(FibIndexSet{{1}, 4}), RepresentationError);
}

TEST_CASE("sigma shift") {
    CHECK(sigma_shift(zeckendorf(BigInt(1))).indices == std::vector<int>{2});
    CHECK(fib_decode(sigma_shift(zeckendorf(BigInt(4)))) == 7);
    for (int n = 1; n <= 20; ++n)
        CHECK(fib_decode(sigma_shift(zeckendorf(fib(n)))) == fib(n + 1));
    // injective and order preserving
    BigInt last = 0;
    for (long m = 1; m <= 10000; ++m) {
        BigInt s = fib_decode(sigma_shift(zeckendorf(BigInt(m))));
        CHECK(s > last);
        last = s;
    }
    // period-2 tails stay period-2
    auto t = sigma_shift(FibIndexSet{{}, 1});
    CHECK(t.tail_start == 2);
}

TEST_CASE("epsilon equals (-1)^k and matches the sign product") {
    CHECK(epsilon(BigInt(4)) == +1);  // 4 = u(1)+u(3)
    CHECK(epsilon(BigInt(12)) == -1); // 12 = u(1)+u(3)+u(5)
    for (int n = 1; n <= 25; ++n) CHECK(epsilon(fib(n)) == -1);
    CHECK_THROWS_AS(epsilon(BigInt(0)), DomainError);
    // Eq. (2-5): cumulative product of the sign sequence
    auto signs = fib_sign_table(10000);
    int prod = 1;
    for (long m = 1; m <= 10000; ++m) {
        prod *= signs[static_cast<size_t>(m)];
        CHECK(epsilon(BigInt(m)) == prod);
    }
}

TEST_CASE("cylinder enumeration counts u(k+1)") {
    CHECK(enumerate_cylinders(1) == std::vector<std::string>{"0", "1"});
    CHECK(enumerate_cylinders(2) == std::vector<std::string>{"00", "01", "10"});
    for (int k = 1; k <= 12; ++k) {
        auto words = enumerate_cylinders(k);
        CHECK(static_cast<std::int64_t>(words.size()) == fib_u64(k + 1));
        for (const auto& w : words) CHECK(w.find("11") == std::string::npos);
    }
}

TEST_CASE("adic minimality proxy: prefixes of 0..u(k+1)-1 hit every cylinder once") {
    for (int k = 1; k <= 10; ++k) {
        std::set<std::string> seen;
        for (long m = 0; m < fib_u64(k + 1); ++m) seen.insert(zeck_word(BigInt(m), k));
        CHECK(static_cast<std::int64_t>(seen.size()) == fib_u64(k + 1));
        auto all = enumerate_cylinders(k);
        CHECK(std::set<std::string>(all.begin(), all.end()) == seen);
    }
}
