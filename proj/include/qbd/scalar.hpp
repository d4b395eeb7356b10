#ifndef QBD_SCALAR_HPP
#define QBD_SCALAR_HPP

#include <cmath>
#include <concepts>
#include <cstdio>
#include <string>
#include <type_traits>

#include "qbd/rational.hpp"

namespace qbd {

// The two scalar realizations: exact rationals and binary64. Every matrix,
// model and pipeline is instantiated over exactly one of them.
template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static constexpr bool is_exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(long n) { return static_cast<double>(n); }
    static double from_ratio(long p, long q) {
        return static_cast<double>(p) / static_cast<double>(q);
    }
    static double from_rational(const Rational& r) { return r.to_double(); }
    static double to_double(double x) { return x; }
    static double abs(double x) { return std::fabs(x); }
    static std::string str(double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }
};

template <>
struct ScalarTraits<Rational> {
    static constexpr bool is_exact = true;
    static Rational zero() { return Rational(0L); }
    static Rational one() { return Rational(1L); }
    static Rational from_int(long n) { return Rational(n); }
    static Rational from_ratio(long p, long q) { return Rational(p, q); }
    static Rational from_rational(const Rational& r) { return r; }
    static double to_double(const Rational& x) { return x.to_double(); }
    static Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }
    static std::string str(const Rational& x) { return x.str(); }
};

template <typename T>
concept ScalarField = std::same_as<T, double> || std::same_as<T, Rational>;

// Rising factorial (z)_n = z(z+1)...(z+n-1), (z)_0 = 1.
template <ScalarField T>
T pochhammer(const T& z, std::size_t n) {
    T acc = ScalarTraits<T>::one();
    for (std::size_t i = 0; i < n; ++i) acc *= z + ScalarTraits<T>::from_int(static_cast<long>(i));
    return acc;
}

}  // namespace qbd

#endif  // QBD_SCALAR_HPP
