#pragma once

// Exact rational arithmetic over int64 with 128-bit intermediates.
// Coefficient conversions between binomial and monomial bases are exact
// statements about denominators, so they run on these, never on doubles.
// Magnitudes stay tiny (degree <= ~12, denominators dividing 12!).

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nilcorr {

class Rational {
public:
    constexpr Rational() = default;
    Rational(int64_t n) : num_(n), den_(1) {}
    Rational(int64_t n, int64_t d) : num_(n), den_(d) { normalize(); }

    int64_t num() const { return num_; }
    int64_t den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                         i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                         i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    bool is_integer() const { return den_ == 1; }

    int64_t floor() const {
        if (num_ >= 0) return num_ / den_;
        return -((-num_ + den_ - 1) / den_);
    }

    // fractional part, in [0,1)
    Rational frac() const { return *this - Rational(floor()); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    using i128 = __int128;

    static Rational from_i128(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("Rational: overflow");
        Rational r;
        r.num_ = static_cast<int64_t>(n);
        r.den_ = static_cast<int64_t>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    int64_t num_ = 0;
    int64_t den_ = 1;
};

inline int64_t lcm_i64(int64_t a, int64_t b) { return a / std::gcd(a, b) * b; }

}  // namespace nilcorr
