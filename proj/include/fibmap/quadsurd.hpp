#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "fibmap/errors.hpp"

namespace fibmap {

using Rational = boost::multiprecision::cpp_rational;

// Exact element of Q(sqrt 5): a + b*sqrt(5).  Sign and comparison are decided
// without approximation by squaring, so equality and floor are exact.
struct QuadSurd {
    Rational a{0}, b{0};

    QuadSurd() = default;
    QuadSurd(Rational a_, Rational b_) : a(std::move(a_)), b(std::move(b_)) {}
    explicit QuadSurd(long v) : a(v) {}

    static QuadSurd golden_gamma() { return {Rational(1, 2), Rational(-1, 2)}; } // (1-sqrt5)/2

    bool operator==(const QuadSurd&) const = default;

    friend QuadSurd operator+(const QuadSurd& x, const QuadSurd& y) {
        return {x.a + y.a, x.b + y.b};
    }
    friend QuadSurd operator-(const QuadSurd& x, const QuadSurd& y) {
        return {x.a - y.a, x.b - y.b};
    }
    QuadSurd operator-() const { return {-a, -b}; }
    friend QuadSurd operator*(const QuadSurd& x, const QuadSurd& y) {
        return {x.a * y.a + 5 * x.b * y.b, x.a * y.b + x.b * y.a};
    }
    friend QuadSurd operator/(const QuadSurd& x, const QuadSurd& y) {
        Rational n = y.a * y.a - 5 * y.b * y.b; // field norm of the conjugate pair
        if (n == 0) throw DomainError("QuadSurd: division by zero");
        QuadSurd num = x * QuadSurd{y.a, -y.b};
        return {num.a / n, num.b / n};
    }

    int sign() const {
        int sa = a.sign(), sb = b.sign();
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // opposite parts: the rational part wins iff a^2 > 5 b^2
        Rational d = a * a - 5 * b * b;
        return d.sign() > 0 ? sa : sb;
    }

    friend bool operator<(const QuadSurd& x, const QuadSurd& y) { return (x - y).sign() < 0; }
    friend bool operator<=(const QuadSurd& x, const QuadSurd& y) { return (x - y).sign() <= 0; }
    friend bool operator>(const QuadSurd& x, const QuadSurd& y) { return (x - y).sign() > 0; }
    friend bool operator>=(const QuadSurd& x, const QuadSurd& y) { return (x - y).sign() >= 0; }

    bool is_integer() const { return b == 0 && boost::multiprecision::denominator(a) == 1; }

    double to_double() const {
        return a.convert_to<double>() + b.convert_to<double>() * 2.2360679774997896964;
    }

    // Exact floor: double guess corrected by exact comparisons.
    boost::multiprecision::cpp_int floor() const {
        using boost::multiprecision::cpp_int;
        cpp_int k(static_cast<long long>(std::floor(to_double())));
        while (*this < QuadSurd{Rational(k), 0}) --k;
        while (*this >= QuadSurd{Rational(k + 1), 0}) ++k;
        return k;
    }

    QuadSurd mod1() const { return *this - QuadSurd{Rational(floor()), 0}; }

    std::string str() const { return "(" + a.str() + ") + (" + b.str() + ")*sqrt5"; }
};

inline QuadSurd gamma_pow(int n) {
    QuadSurd g = QuadSurd::golden_gamma();
    QuadSurd r{Rational(1), Rational(0)};
    for (int i = 0; i < n; ++i) r = r * g;
    return r;
}

} // namespace fibmap
