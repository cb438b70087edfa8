#ifndef GTAU_RATIONAL_HPP
#define GTAU_RATIONAL_HPP

#include <numeric>
#include <stdexcept>

#include "gtau/common.hpp"

namespace gtau {

// Small exact rational. Error terms here are differences of an integer and
// an integer/p, so numerators stay far below 2^63 at every scale this
// project touches; construction still checks.
struct Rat {
    i64 num = 0;
    i64 den = 1;

    Rat() = default;
    Rat(i64 n, i64 d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rat: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        i64 g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    explicit Rat(i64 n) : num(n), den(1) {}

    friend Rat operator+(Rat a, Rat b) {
        return Rat(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rat operator-(Rat a, Rat b) {
        return Rat(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend bool operator==(Rat a, Rat b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(Rat a, Rat b) { return !(a == b); }

    Rat abs() const { return Rat(num < 0 ? -num : num, den); }
    double to_double() const { return double(num) / double(den); }
    bool is_zero() const { return num == 0; }
};

}  // namespace gtau

#endif
