#pragma once

// The 3-dimensional Heisenberg group: upper-triangular unipotent matrices
//   [[1, x, z], [0, 1, y], [0, 0, 1]],
// its integer lattice, fundamental-domain reduction, the polynomial orbit
// g(n) = (n*a, n*b, n^2*a*b), and bracket-polynomial values {n*b*floor(n*a)}.
//
// Coordinates are carried in compensated (double-double) arithmetic: the z
// entry reaches n^2*a*b ~ 1e12 before reduction, where plain double has
// already lost the fractional part.  Group operations are also available
// over exact rationals for the algebraic tests.

#include <array>
#include <cstdint>

#include "nilcorr/dd.hpp"
#include "nilcorr/rational.hpp"

namespace nilcorr {

template <class T>
struct HeisPoint {
    T x{}, y{}, z{};
};

// (x1,y1,z1)*(x2,y2,z2) = (x1+x2, y1+y2, z1+z2+x1*y2), from the matrix product
inline HeisPoint<dd> heis_mul(const HeisPoint<dd>& a, const HeisPoint<dd>& b) {
    return {dd_add(a.x, b.x), dd_add(a.y, b.y), dd_add(dd_add(a.z, b.z), dd_mul(a.x, b.y))};
}
inline HeisPoint<Rational> heis_mul(const HeisPoint<Rational>& a, const HeisPoint<Rational>& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z + a.x * b.y};
}

inline HeisPoint<dd> heis_inverse(const HeisPoint<dd>& a) {
    return {dd_neg(a.x), dd_neg(a.y), dd_sub(dd_mul(a.x, a.y), a.z)};
}
inline HeisPoint<Rational> heis_inverse(const HeisPoint<Rational>& a) {
    return {-a.x, -a.y, a.x * a.y - a.z};
}

template <class T>
HeisPoint<T> heis_identity() {
    return {};
}

using HeisenbergPoint = HeisPoint<dd>;

struct ReducedPoint {
    std::array<double, 3> coords{};  // Mal'cev coordinates, each in [0,1)
    double tau1() const { return coords[0]; }
    double tau2() const { return coords[1]; }
    double tau3() const { return coords[2]; }
};

// Fundamental-domain representative of g*Gamma: ({x}, {y}, {z - xy + floor(x)*y}).
// Invariant under right multiplication by any lattice element.
ReducedPoint reduce(const HeisenbergPoint& g);

// g(n) = (n*a, n*b, n^2*a*b) in closed form; no iterated products
HeisenbergPoint orbit_point(dd alpha, dd beta, int64_t n);
inline HeisenbergPoint orbit_point(double alpha, double beta, int64_t n) {
    return orbit_point(dd(alpha), dd(beta), n);
}

// {n*b*floor(n*a)} straight from the bracket formula; agrees with
// reduce(orbit_point(a,b,n)).tau3() to ~1e-9 for n up to 1e6
double bracket_value(dd alpha, dd beta, int64_t n);
inline double bracket_value(double alpha, double beta, int64_t n) {
    return bracket_value(dd(alpha), dd(beta), n);
}

struct Case2Point {
    ReducedPoint point;
    int segment = 0;     // 1: tau3 = {-tau1^2/2} branch, 2: tau3 = {(1-tau1^2)/2}
    double residual = 0;  // circle distance to the claimed branch
};

// Reduced representative of the alpha = beta orbit, classified onto one of
// the two one-dimensional segments the orbit closure consists of.  A point
// off both segments beyond tol signals an internal inconsistency.
Case2Point case2_suborbit(dd alpha, int64_t n, double tol = 1e-9);
inline Case2Point case2_suborbit(double alpha, int64_t n, double tol = 1e-9) {
    return case2_suborbit(dd(alpha), n, tol);
}

// high-precision constants for the standard experiments
dd dd_sqrt(double v);   // sqrt(v) to ~2^-104
dd dd_cbrt(double v);
dd dd_golden();

}  // namespace nilcorr
