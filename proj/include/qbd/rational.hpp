#ifndef QBD_RATIONAL_HPP
#define QBD_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qbd {

// Arbitrary-precision rational number, kept in lowest terms with a positive
// denominator. Arithmetic is exact and equality is decidable.
class Rational {
  public:
    Rational() : v_(0) {}
    Rational(long n) : v_(static_cast<long>(n)) {}   // NOLINT(google-explicit-constructor)
    Rational(int n) : v_(n) {}                       // NOLINT
    Rational(long num, long den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
    explicit Rational(const mpz_class& num, const mpz_class& den = 1) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }

    // Parses "p" or "p/q" with an optional leading sign on p; p, q decimal.
    static Rational from_string(std::string_view s);

    // Parses a finite decimal literal ("0.5", "-3", "2.") into an exact value.
    // Also accepts the "p/q" form so callers can take either notation.
    static Rational from_decimal(std::string_view s);

    std::string str() const {
        return v_.get_num().get_str() +
               (v_.get_den() == 1 ? std::string() : "/" + v_.get_den().get_str());
    }
    std::string numerator_str() const { return v_.get_num().get_str(); }
    std::string denominator_str() const { return v_.get_den().get_str(); }
    const mpz_class& numerator() const { return v_.get_num(); }
    const mpz_class& denominator() const { return v_.get_den(); }

    double to_double() const { return v_.get_d(); }
    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }
    bool is_integer() const { return v_.get_den() == 1; }
    long to_long() const {
        if (!is_integer() || !v_.get_num().fits_slong_p())
            throw std::domain_error("Rational: not representable as long: " + str());
        return v_.get_num().get_si();
    }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend Rational abs(const Rational& a) { return Rational(mpq_class(::abs(a.v_))); }

  private:
    mpq_class v_;
};

inline Rational Rational::from_string(std::string_view s) {
    auto fail = [&] {
        throw std::invalid_argument("Rational: cannot parse \"" + std::string(s) + "\"");
    };
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    std::size_t num_begin = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == num_begin) fail();
    mpz_class num(std::string(s.substr(num_begin, i - num_begin)), 10);
    if (neg) num = -num;
    mpz_class den(1);
    if (i < s.size()) {
        if (s[i] != '/') fail();
        ++i;
        std::size_t den_begin = i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
        if (i == den_begin || i != s.size()) fail();
        den = mpz_class(std::string(s.substr(den_begin)), 10);
        if (den == 0) fail();
    }
    return Rational(num, den);
}

inline Rational Rational::from_decimal(std::string_view s) {
    if (s.find('/') != std::string_view::npos) return from_string(s);
    auto fail = [&] {
        throw std::invalid_argument("Rational: cannot parse decimal \"" + std::string(s) + "\"");
    };
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    std::string digits;
    std::size_t frac_len = 0;
    bool any = false, seen_dot = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '.') {
            if (seen_dot) fail();
            seen_dot = true;
        } else if (s[i] >= '0' && s[i] <= '9') {
            digits.push_back(s[i]);
            if (seen_dot) ++frac_len;
            any = true;
        } else {
            fail();
        }
    }
    if (!any) fail();
    mpz_class num(digits.empty() ? "0" : digits, 10);
    mpz_class den(1);
    for (std::size_t k = 0; k < frac_len; ++k) den *= 10;
    if (neg) num = -num;
    return Rational(num, den);
}

}  // namespace qbd

#endif  // QBD_RATIONAL_HPP
