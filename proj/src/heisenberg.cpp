#include "nilcorr/heisenberg.hpp"

#include <cmath>

#include "nilcorr/errors.hpp"

namespace nilcorr {

ReducedPoint reduce(const HeisenbergPoint& g) {
    ReducedPoint r;
    r.coords[0] = dd_frac_double(g.x);
    r.coords[1] = dd_frac_double(g.y);
    // tau3 = {z - x*y + floor(x)*y}; this, not the naive {z - x*y}, is the
    // right-coset invariant combination
    double fx = dd_floor(g.x);
    dd t = dd_sub(g.z, dd_mul(g.x, g.y));
    t = dd_add(t, dd_mul(g.y, fx));
    r.coords[2] = dd_frac_double(t);
    return r;
}

HeisenbergPoint orbit_point(dd alpha, dd beta, int64_t n) {
    auto nd = static_cast<double>(n);
    dd x = dd_mul(alpha, nd);
    dd y = dd_mul(beta, nd);
    dd z = dd_mul(dd_mul(alpha, beta), nd * nd);
    return {x, y, z};
}

double bracket_value(dd alpha, dd beta, int64_t n) {
    auto nd = static_cast<double>(n);
    double m = dd_floor(dd_mul(alpha, nd));  // floor(n*alpha)
    dd t = dd_mul(dd_mul(beta, nd), m);
    return dd_frac_double(t);
}

Case2Point case2_suborbit(dd alpha, int64_t n, double tol) {
    Case2Point out;
    out.point = reduce(orbit_point(alpha, alpha, n));
    double u = out.point.tau1();
    double v = out.point.tau3();
    double b1 = frac(-u * u / 2.0);
    double b2 = frac((1.0 - u * u) / 2.0);
    double d1 = circle_dist(v - b1);
    double d2 = circle_dist(v - b2);
    if (d1 <= d2) {
        out.segment = 1;
        out.residual = d1;
    } else {
        out.segment = 2;
        out.residual = d2;
    }
    if (out.residual > tol)
        throw consistency_error("case2-two-segment",
                                "case2_suborbit: point at n = " + std::to_string(n) +
                                    " lies " + std::to_string(out.residual) +
                                    " off both segments");
    return out;
}

dd dd_sqrt(double v) {
    double h = std::sqrt(v);
    // one Newton step in residual form: sqrt(v) ~ h - (h^2 - v)/(2h)
    double err = std::fma(h, h, -v);
    return detail::quick_two_sum(h, -err / (2.0 * h));
}

dd dd_cbrt(double v) {
    double h = std::cbrt(v);
    dd h3 = dd_mul(dd_mul(dd(h), h), h);
    double err = dd_sub(h3, dd(v)).to_double();
    return detail::quick_two_sum(h, -err / (3.0 * h * h));
}

dd dd_golden() {
    // (1 + sqrt(5)) / 2
    dd s = dd_sqrt(5.0);
    return dd_div(dd_add(s, 1.0), 2.0);
}

}  // namespace nilcorr
