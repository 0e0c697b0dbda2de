#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fibmap/class_a.hpp"
#include "fibmap/mp_dynamics.hpp"

using namespace fibmap;

TEST_CASE("orbit of c = -2 reaches the fixed point") {
    auto orb = orbit_quadratic(mp::Real::of_long(-2, 128), 20, 128);
    CHECK(orb.at(1).to_double() == -2.0);
    CHECK(orb.at(2).to_double() == 2.0);
    for (int i = 2; i <= 20; ++i) CHECK(orb.at(i).to_double() == 2.0);
    auto signs = itinerary(orb);
    CHECK(signs[0] == -1);
    CHECK(signs[1] == +1);
    CHECK(signs[2] == +1);
}

TEST_CASE("orbit of c = -1 is the superstable 2-cycle") {
    auto orb = orbit_quadratic(mp::Real::of_long(-1, 128), 10, 128);
    CHECK(orb.at(1).to_double() == -1.0);
    CHECK(orb.at(2).is_zero());
    CHECK(orb.at(3).to_double() == -1.0);
    CHECK_THROWS_AS(itinerary(orb), PrecisionError); // exact zero has no sign
}

TEST_CASE("itinerary at c = -1.5") {
    auto orb = orbit_quadratic(mp::Real::of_double(-1.5, 192), 30, 192);
    auto s = itinerary(orb);
    CHECK(s[0] == -1);
    CHECK(s[1] == +1);
    CHECK(s[2] == -1);
}

TEST_CASE("derivative products: worked values and exact telescoping") {
    auto orb = orbit_quadratic(mp::Real::of_long(-2, 128), 40, 128);
    CHECK(derivative_product(orb, 1, 1).to_double() == 4.0);
    CHECK(derivative_product(orb, 1, 3).to_double() == 64.0);
    CHECK(derivative_product(orb, 2, 0).to_double() == 1.0);

    auto orb2 = orbit_quadratic(mp::Real::of_string("-1.87", 256), 60, 256);
    for (std::int64_t k : {1, 7, 23, 59}) {
        mp::Real whole = derivative_product(orb2, 1, 60);
        mp::Real left = derivative_product(orb2, 1, k);
        mp::Real right = derivative_product(orb2, k + 1, 60 - k);
        CHECK(whole == mul_exact(left, right));
    }
}

TEST_CASE("two-precision certificates are monotone under p") {
    mp::Real c = mp::Real::of_string("-1.8705286321646448888906", 512);
    auto lo = orbit_quadratic(c, 120, 256);
    auto hi = orbit_quadratic(c, 120, 512);
    for (int i = 1; i <= 120; ++i) CHECK(hi.digits(i) >= lo.digits(i));
    // certificate exhaustion names the failing index
    try {
        auto bad = orbit_quadratic(mp::Real::of_string("-1.99", 64), 4000, 64);
        (void)bad;
    } catch (const PrecisionError& e) {
        CHECK(std::string(e.what()).find("index") != std::string::npos);
    }
}

TEST_CASE("poincare length") {
    auto R = [](double v) { return mp::Real::of_double(v, 256); };
    CHECK(std::fabs(poincare_length(R(0), R(1), R(2), R(3)).to_double() - std::log(4.0)) < 1e-15);
    CHECK(std::fabs(poincare_length(R(0), R(0.5), R(1.5), R(2)).to_double() - std::log(9.0)) <
          1e-15);
    CHECK_THROWS_AS(poincare_length(R(0), R(2), R(1), R(3)), DomainError);
    // shrinking middle interval: length to 0
    double prev = 1e9;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        double v = poincare_length(R(0), R(1 - eps), R(1 + eps), R(2)).to_double();
        CHECK(v < prev);
        prev = v;
    }
    // affine invariance under x -> 2x + 7, to certified digits
    auto len1 = poincare_length(R(0.1), R(0.7), R(1.9), R(2.8));
    auto aff = [&](double v) { return mp::Real::of_long(2, 256) * R(v) + mp::Real::of_long(7, 256); };
    auto len2 = poincare_length(aff(0.1), aff(0.7), aff(1.9), aff(2.8));
    CHECK(mp::agreeing_digits(len1, len2) > 60);
}

TEST_CASE("piecewise orbit of the section-7 example map") {
    mpfr_prec_t p = 256;
    mp::Real c = mp::Real::of_long(10, 2 * p);
    mp::Real lam = mp::Real::of_double(0.05, 2 * p);
    mp::Real v = mp::Real::of_double(0.02, 2 * p);
    ClassAMap m = example21(c, lam, v, 2 * p);
    // only the 5-step head is forced; an untuned v escapes soon after
    auto po = orbit_piecewise(m, mp::Real::of_long(0, p), 5, p, +1);
    REQUIRE(po.escape_index == 0);
    // forced head: -c, -1, lam, -c + q lam^2, v
    CHECK(mp::agreeing_digits(po.orb.at(1), -c) > 50);
    CHECK(mp::agreeing_digits(po.orb.at(2), mp::Real::of_long(-1, p)) > 50);
    CHECK(mp::agreeing_digits(po.orb.at(3), lam) > 50);
    CHECK(mp::agreeing_digits(po.orb.at(5), v) > 50);
    CHECK(po.syms.syms[0] == ClassASym::J);       // x_1 in J by construction
    CHECK(po.syms.syms[1] == ClassASym::TMinus);  // x_2 = -1
    CHECK(po.syms.syms[2] == ClassASym::TPlus);   // x_3 = lam

    // v > lam escapes at step 5
    mp::Real v2 = mp::Real::of_double(0.06, 2 * p);
    CHECK_THROWS_AS(example21(c, lam, v2, 2 * p), ShapeError);
    // bypass the constructor guard to watch the escape itself
    mp::Real q = c + lam;
    mp::Real a = (mp::Real::of_long(1, 2 * p) + v2) / (q * lam * lam);
    mp::Real b = a * c - mp::Real::of_long(1, 2 * p);
    ClassAMap m2({-c, -c + q * lam * lam}, {mp::Real::of_long(-1, 2 * p), lam}, q, c,
                 mp::Real::of_long(0, 2 * p), a, b, +1);
    auto po2 = orbit_piecewise(m2, mp::Real::of_long(0, p), 12, p, +1);
    CHECK(po2.escape_index == 5);
}
