#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <ostream>
#include <stdexcept>
#include <string>

namespace kissing {

using Integer = mpz_class;

/// Exact arbitrary-precision fraction. Always canonical: gcd(|num|,den) = 1,
/// den >= 1, sign carried by the numerator.
class Rational {
  public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {} // NOLINT: implicit by design
    Rational(int n) : v_(static_cast<long>(n)) {}
    Rational(const Integer& n) : v_(n) {}
    Rational(long num, long den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    Rational(const Integer& num, const Integer& den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    /// Parses "p/q" or "p" (decimal digits, optional leading '-').
    static Rational from_string(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        if (q.get_den() == 0)
            throw std::domain_error("Rational: zero denominator in '" + s + "'");
        q.canonicalize();
        Rational r;
        r.v_ = q;
        return r;
    }

    Integer num() const { return Integer(v_.get_num()); }
    Integer den() const { return Integer(v_.get_den()); }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    /// Largest integer <= value.
    Integer floor() const {
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), mpq_numref(v_.get_mpq_t()), mpq_denref(v_.get_mpq_t()));
        return f;
    }

    double to_double() const { return v_.get_d(); }

    /// Canonical "p/q" string, "p" when the denominator is 1.
    std::string to_string() const { return v_.get_str(); }

    const mpq_class& raw() const { return v_; }
    mpq_class& raw() { return v_; }

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
    friend Rational operator-(const Rational& a) {
        Rational r;
        r.v_ = -a.v_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) >= 0; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

  private:
    mpq_class v_;
};

/// Strict total order, the same order as cross-multiplication.
inline int rational_cmp(const Rational& a, const Rational& b) {
    return cmp(a.raw(), b.raw());
}

} // namespace kissing
