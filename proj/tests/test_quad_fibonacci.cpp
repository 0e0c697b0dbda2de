#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "fibmap/quad_fibonacci.hpp"

using namespace fibmap;

namespace {
const char* kPaperC = "-1.8705286321646448888906";

const CBracket& shared_bracket() {
    static CBracket br = find_c(10, 96);
    return br;
}
} // namespace

TEST_CASE("itinerary comparison directions at the bracket ends") {
    auto target = fib_sign_table(64);
    auto r2 = detail::compare_itinerary(mp::Real::of_long(-2, 128), target, 64, 192);
    CHECK(r2.depth == 4); // signs -,+,+ agree; x_4 = 2 > 0 vs fib_sign(4) = -1
    CHECK(r2.dir > 0);    // c must increase
    auto r1 = detail::compare_itinerary(mp::Real::of_long(-1, 128), target, 64, 192);
    CHECK(r1.depth == 2); // x_2 = 0 exactly
    CHECK(r1.dir < 0);
}

TEST_CASE("find_c at small depth brackets the paper value") {
    auto br = find_c(5, 64);
    mp::Real cp = mp::Real::of_string(kPaperC, 256);
    CHECK(br.lo <= cp);
    CHECK(cp <= br.hi);
    CHECK(br.match_depth >= fib_u64(5));
}

TEST_CASE("find_c at depth 10 pins many digits") {
    const auto& br = shared_bracket();
    mp::Real cp = mp::Real::of_string(kPaperC, 512);
    mp::Real err = abs(br.mid() - cp);
    CHECK(err.log2_abs() < -60); // the paper value itself has ~73 bits
    CHECK(br.width_log2() < -96);
    CHECK(br.match_depth >= fib_u64(10));
}

TEST_CASE("closest returns at the located parameter") {
    const auto& br = shared_bracket();
    auto orb = orbit_quadratic(br.mid(), fib_u64(14) + fib_u64(13), 512);
    auto rep = verify_closest_returns(orb, 14);
    CHECK(rep.ok);
    CHECK(rep.x4_negative);
    CHECK(rep.first_fail_n == 0);
    CHECK(rep.injectivity_checked_n == 8);

    // c = -2 fails at n = 2 (|x_2| equals |x_1|)
    auto orb2 = orbit_quadratic(mp::Real::of_long(-2, 256), 64, 256);
    auto rep2 = verify_closest_returns(orb2, 8);
    CHECK_FALSE(rep2.ok);
    CHECK(rep2.first_fail_n == 2);

    // a mutated parameter fails at some small level, reported
    auto orb3 = orbit_quadratic(br.mid() + mp::Real::of_double(1e-3, 256), 200, 512);
    auto rep3 = verify_closest_returns(orb3, 10);
    CHECK_FALSE(rep3.ok);
    CHECK(rep3.first_fail_n > 0);
}

TEST_CASE("itinerary at the located c matches fib_sign") {
    const auto& br = shared_bracket();
    auto orb = orbit_quadratic(br.mid(), 500, 512);
    auto s = itinerary(orb);
    auto t = fib_sign_table(500);
    for (long i = 1; i <= 300; ++i) CHECK(s[static_cast<size_t>(i - 1)] == t[static_cast<size_t>(i)]);
}

TEST_CASE("covering structure M^2..M^5 matches the section-3 displays") {
    auto pairs = [](int n) {
        std::set<std::pair<std::int64_t, std::int64_t>> ps;
        for (const auto& e : cover_indices(n))
            ps.insert({std::min(e.p, e.q), std::max(e.p, e.q)});
        return ps;
    };
    using PS = std::set<std::pair<std::int64_t, std::int64_t>>;
    CHECK(pairs(1) == PS{{1, 2}});
    CHECK(pairs(2) == PS{{1, 4}, {2, 5}});
    CHECK(pairs(3) == PS{{1, 4}, {3, 5}, {2, 7}});
    CHECK(pairs(4) == PS{{1, 6}, {4, 12}, {5, 13}, {3, 11}, {2, 7}});
    CHECK(pairs(5) == PS{{1, 9}, {6, 19}, {4, 12}, {5, 18}, {8, 13}, {3, 11}, {7, 20}, {2, 10}});
}

TEST_CASE("rendered covers validate and order as in Lemma 3.8") {
    const auto& br = shared_bracket();
    auto orb = orbit_quadratic(br.mid(), cover_max_index(8), 512);
    auto cov = build_cover(orb, 5);
    REQUIRE(cov.intervals.size() == 8);
    // left-to-right endpoint indices of M^5 from the paper's display
    std::vector<std::pair<std::int64_t, std::int64_t>> expect{
        {1, 9}, {19, 6}, {12, 4}, {5, 18}, {8, 13}, {11, 3}, {7, 20}, {10, 2}};
    for (size_t i = 0; i < 8; ++i) {
        CHECK(cov.intervals[i].lo_idx == expect[i].first);
        CHECK(cov.intervals[i].hi_idx == expect[i].second);
    }
    for (int n = 1; n <= 8; ++n) {
        auto c = build_cover(orb, n);
        CHECK(static_cast<std::int64_t>(c.intervals.size()) == fib_u64(n));
    }
}

TEST_CASE("gap partners reproduce the Lemma 3.8 list") {
    CHECK(gap_partner(BigInt(9)) == 19);
    CHECK(gap_partner(BigInt(19)) == 9);
    CHECK(gap_partner(BigInt(4)) == 5);
    CHECK(gap_partner(BigInt(5)) == 4);
    CHECK(gap_partner(BigInt(3)) == 7);
    CHECK(gap_partner(BigInt(7)) == 3);
    CHECK(gap_partner(BigInt(6)) == 12);
    CHECK(gap_partner(BigInt(18)) == 8);
    CHECK(gap_partner(BigInt(13)) == 11);
    CHECK(gap_partner(BigInt(20)) == 10);
    CHECK_THROWS_AS(gap_partner(BigInt(1)), DomainError);
    CHECK_THROWS_AS(gap_partner(BigInt(2)), DomainError);
    // involution on all gap endpoints visible in M^10
    for (const auto& e : cover_indices(10)) {
        for (std::int64_t m : {e.p, e.q}) {
            if (m <= 2) continue;
            BigInt q = gap_partner(BigInt(m));
            CHECK(gap_partner(q) == m);
        }
    }
}

TEST_CASE("adjacent cover intervals are gap-partner pairs") {
    const auto& br = shared_bracket();
    auto orb = orbit_quadratic(br.mid(), cover_max_index(9), 512);
    auto cov = build_cover(orb, 9);
    for (size_t i = 0; i + 1 < cov.intervals.size(); ++i) {
        std::int64_t a = cov.intervals[i].hi_idx, b = cov.intervals[i + 1].lo_idx;
        CHECK(gap_partner(BigInt(a)) == b);
    }
}

TEST_CASE("scaling smoke test at modest depth") {
    const auto& br = shared_bracket();
    auto orb = orbit_quadratic(br.mid(), fib_u64(10), 512);
    auto rep = scaling_report(orb, 9);
    for (int n = 2; n <= 9; ++n) {
        CHECK(rep.lambda[static_cast<size_t>(n)] > 0);
        CHECK(rep.lambda[static_cast<size_t>(n)] < 1);
    }
    CHECK(rep.sup_lambda < 1);
    CHECK(rep.sup_lambda_pair < 1);
    CHECK(rep.slope_log2_lambda < 0);
}

TEST_CASE("lemma 5.1 ratios and exact chain rule at modest depth") {
    const auto& br = shared_bracket();
    auto orb = orbit_quadratic(br.mid(), fib_u64(10), 512);
    auto rep = lemma51_check(orb, 2, 8);
    CHECK(rep.chain_rule_exact);
    for (const auto& row : rep.rows) {
        CHECK(row.r_n > 0.5);
        CHECK(row.r_n < 2.0);
    }
}

TEST_CASE("nvs partial sums are monotone and alpha-dominated") {
    const auto& br = shared_bracket();
    auto orb = orbit_quadratic(br.mid(), 600, 512);
    auto r1 = nvs_series(orb, 0.5, 600);
    auto r2 = nvs_series(orb, 1.0, 600);
    double prev = 0;
    for (auto& [n, s] : r1.checkpoints) {
        CHECK(s > prev);
        prev = s;
    }
    CHECK(r2.sum < r1.sum); // termwise domination holds in the tail
    CHECK_THROWS_AS(nvs_series(orb, 0.0, 100), DomainError);
}
