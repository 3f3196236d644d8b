#pragma once

// Compensated (double-double) arithmetic and exact mod-1 reduction.
//
// Values of the form n^2*alpha*beta reach ~1e12 before reduction mod 1, at
// which point plain double has already lost the fractional part to ~5e-4.
// A dd value carries ~106 mantissa bits, enough to reduce such products and
// keep ~1e-20 of the fraction.  Products double*int64 are exact (fma).
//
// frac_mul_pow2 treats a double in [0,1) as the exact dyadic rational it is
// and reduces alpha*K mod 1 for huge integers K with integer arithmetic.

#include <cmath>
#include <cstdint>

namespace nilcorr {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

namespace detail {

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// requires |a| >= |b|
inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace detail

inline dd dd_add(dd x, dd y) {
    dd s = detail::two_sum(x.hi, y.hi);
    dd t = detail::two_sum(x.lo, y.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline dd dd_add(dd x, double y) { return dd_add(x, dd(y)); }

inline dd dd_neg(dd x) { return {-x.hi, -x.lo}; }

inline dd dd_sub(dd x, dd y) { return dd_add(x, dd_neg(y)); }

inline dd dd_mul(dd x, dd y) {
    dd p = detail::two_prod(x.hi, y.hi);
    p.lo += x.hi * y.lo + x.lo * y.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline dd dd_mul(dd x, double y) {
    dd p = detail::two_prod(x.hi, y);
    p.lo += x.lo * y;
    return detail::quick_two_sum(p.hi, p.lo);
}

// exact product of two doubles
inline dd dd_prod(double a, double b) { return detail::two_prod(a, b); }

inline dd dd_div(dd x, double y) {
    double q1 = x.hi / y;
    dd p = detail::two_prod(q1, y);
    double q2 = ((x.hi - p.hi) - p.lo + x.lo) / y;
    return detail::quick_two_sum(q1, q2);
}

// floor of the represented value, exact as long as it fits a double
inline double dd_floor(dd x) {
    double f = std::floor(x.hi);
    double d = (x.hi - f) + x.lo;
    if (d < 0.0) f -= 1.0;
    else if (d >= 1.0) f += 1.0;
    return f;
}

// x - floor(x); the subtraction is exact, so the value is in [0,1) even
// when the hi component alone reads 1.0 (lo then being negative)
inline dd dd_frac(dd x) { return dd_sub(x, dd(dd_floor(x))); }

// frac as a plain double in [0,1); rounding at the top end maps to the
// largest double below 1 instead of 1.0
inline double dd_frac_double(dd x) {
    double v = dd_frac(x).to_double();
    if (v >= 1.0) v = std::nextafter(1.0, 0.0);
    if (v < 0.0) v = 0.0;
    return v;
}

// ---------------------------------------------------------------------------
// plain-double helpers on R/Z
// ---------------------------------------------------------------------------

inline double frac(double x) {
    double u = x - std::floor(x);
    if (u >= 1.0) u -= 1.0;
    if (u < 0.0) u += 1.0;
    return u;
}

// distance to the nearest integer
inline double circle_dist(double x) {
    double u = frac(x);
    return u <= 0.5 ? u : 1.0 - u;
}

// ---------------------------------------------------------------------------
// {alpha * K} for a double alpha in [0,1) and a (signed) big integer K.
//
// alpha == m / 2^f exactly with m < 2^53; then {alpha*K} = (m*K mod 2^f)/2^f.
// m*K needs up to 53+127 bits, computed in three 64-bit limbs.
// ---------------------------------------------------------------------------

namespace detail {

struct limbs192 {
    uint64_t w0 = 0, w1 = 0, w2 = 0;  // value = w0 + w1*2^64 + w2*2^128
};

inline limbs192 mul_u64_u128(uint64_t a, unsigned __int128 b) {
    uint64_t b0 = static_cast<uint64_t>(b);
    uint64_t b1 = static_cast<uint64_t>(b >> 64);
    unsigned __int128 p0 = static_cast<unsigned __int128>(a) * b0;
    unsigned __int128 p1 = static_cast<unsigned __int128>(a) * b1;
    limbs192 r;
    r.w0 = static_cast<uint64_t>(p0);
    unsigned __int128 mid = (p0 >> 64) + static_cast<uint64_t>(p1);
    r.w1 = static_cast<uint64_t>(mid);
    r.w2 = static_cast<uint64_t>(p1 >> 64) + static_cast<uint64_t>(mid >> 64);
    return r;
}

inline void mask_bits(limbs192& x, int f) {
    auto maskw = [](uint64_t w, int bits) -> uint64_t {
        if (bits <= 0) return 0;
        if (bits >= 64) return w;
        return w & ((uint64_t(1) << bits) - 1);
    };
    x.w0 = maskw(x.w0, f);
    x.w1 = maskw(x.w1, f - 64);
    x.w2 = maskw(x.w2, f - 128);
}

inline double limbs_to_double_scaled(const limbs192& x, int f) {
    // (w0 + w1*2^64 + w2*2^128) / 2^f, top-down so rounding happens once
    double v = std::ldexp(static_cast<double>(x.w2), 128 - f);
    v += std::ldexp(static_cast<double>(x.w1), 64 - f);
    v += std::ldexp(static_cast<double>(x.w0), -f);
    return v;
}

}  // namespace detail

// {alpha * K}, exact up to the final double rounding.  alpha in [0,1).
inline double frac_mul_u128(double alpha, unsigned __int128 K) {
    if (alpha == 0.0 || K == 0) return 0.0;
    int e;
    double mant = std::frexp(alpha, &e);            // alpha = mant * 2^e
    int f = 53 - e;                                 // alpha = m / 2^f
    auto m = static_cast<uint64_t>(std::ldexp(mant, 53));
    if (f > 191) {
        // alpha < 2^-138: alpha*K < 2^-11, no reduction possible or needed
        double v = alpha * std::ldexp(static_cast<double>(K >> 64), 64);
        v += alpha * static_cast<double>(static_cast<uint64_t>(K));
        return frac(v);
    }
    detail::limbs192 p = detail::mul_u64_u128(m, K);
    detail::mask_bits(p, f);
    double v = detail::limbs_to_double_scaled(p, f);
    if (v >= 1.0) v = std::nextafter(1.0, 0.0);
    return v;
}

// signed variant: {alpha * K} with K possibly negative
inline double frac_mul_i128(double alpha, __int128 K) {
    if (K >= 0) return frac_mul_u128(alpha, static_cast<unsigned __int128>(K));
    double v = frac_mul_u128(alpha, static_cast<unsigned __int128>(-K));
    return v == 0.0 ? 0.0 : 1.0 - v;
}

}  // namespace nilcorr
