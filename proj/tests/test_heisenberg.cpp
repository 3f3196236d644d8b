#include <doctest.h>

#include <cmath>
#include <random>

#include "nilcorr/heisenberg.hpp"

using namespace nilcorr;

namespace {

HeisenbergPoint rand_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    return {dd(u(rng)), dd(u(rng)), dd(u(rng))};
}

}  // namespace

TEST_CASE("group law identities") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        auto a = rand_point(rng), b = rand_point(rng), c = rand_point(rng);
        auto left = heis_mul(heis_mul(a, b), c);
        auto right = heis_mul(a, heis_mul(b, c));
        CHECK(std::abs(dd_sub(left.x, right.x).to_double()) < 1e-12);
        CHECK(std::abs(dd_sub(left.y, right.y).to_double()) < 1e-12);
        CHECK(std::abs(dd_sub(left.z, right.z).to_double()) < 1e-12);
    }
}

TEST_CASE("exact group axioms over rationals") {
    std::mt19937_64 rng(37);
    auto rnd = [&] {
        return Rational(static_cast<int64_t>(rng() % 41) - 20,
                        static_cast<int64_t>(1 + rng() % 12));
    };
    for (int trial = 0; trial < 200; ++trial) {
        HeisPoint<Rational> a{rnd(), rnd(), rnd()}, b{rnd(), rnd(), rnd()}, c{rnd(), rnd(), rnd()};
        auto l = heis_mul(heis_mul(a, b), c);
        auto r = heis_mul(a, heis_mul(b, c));
        REQUIRE(l.x == r.x);
        REQUIRE(l.y == r.y);
        REQUIRE(l.z == r.z);
        auto e = heis_mul(a, heis_inverse(a));
        REQUIRE(e.x == Rational(0));
        REQUIRE(e.y == Rational(0));
        REQUIRE(e.z == Rational(0));
    }
}

TEST_CASE("reduction basics") {
    auto r0 = reduce({dd(0.0), dd(0.0), dd(0.0)});
    CHECK(r0.tau1() == 0.0);
    CHECK(r0.tau2() == 0.0);
    CHECK(r0.tau3() == 0.0);

    auto r = reduce({dd(1.5), dd(0.5), dd(0.25)});
    CHECK(r.tau1() == doctest::Approx(0.5));
    CHECK(r.tau2() == doctest::Approx(0.5));
    CHECK(r.tau3() == doctest::Approx(0.0));
}

TEST_CASE("reduction is a right-coset invariant") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    HeisPoint<dd> gamma{dd(2.0), dd(-3.0), dd(5.0)};
    for (int trial = 0; trial < 500; ++trial) {
        HeisenbergPoint g{dd(u(rng)), dd(u(rng)), dd(u(rng))};
        auto a = reduce(g);
        auto b = reduce(heis_mul(g, gamma));
        CHECK(circle_dist(a.tau1() - b.tau1()) < 1e-12);
        CHECK(circle_dist(a.tau2() - b.tau2()) < 1e-12);
        CHECK(circle_dist(a.tau3() - b.tau3()) < 1e-12);
    }
}

TEST_CASE("reduce is idempotent on embedded representatives") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto r = reduce({dd(u(rng)), dd(u(rng)), dd(u(rng))});
        // the representative matrix has entries (t1, t2, t3 + t1*t2)
        HeisenbergPoint emb{dd(r.tau1()), dd(r.tau2()),
                            dd_add(dd(r.tau3()), dd_prod(r.tau1(), r.tau2()))};
        auto again = reduce(emb);
        CHECK(again.tau1() == doctest::Approx(r.tau1()).epsilon(1e-14));
        CHECK(again.tau2() == doctest::Approx(r.tau2()).epsilon(1e-14));
        CHECK(circle_dist(again.tau3() - r.tau3()) < 1e-13);
    }
}

TEST_CASE("orbit points in closed form") {
    auto z = orbit_point(std::sqrt(2.0), std::sqrt(3.0), 0);
    CHECK(z.x.to_double() == 0.0);
    CHECK(z.z.to_double() == 0.0);

    auto g1 = orbit_point(std::sqrt(2.0), std::sqrt(3.0), 1);
    CHECK(g1.x.to_double() == doctest::Approx(1.4142135623730951).epsilon(1e-12));
    CHECK(g1.y.to_double() == doctest::Approx(1.7320508075688772).epsilon(1e-12));
    CHECK(g1.z.to_double() == doctest::Approx(2.449489742783178).epsilon(1e-12));
}

TEST_CASE("orbit satisfies its one-step recurrence") {
    dd a = dd_sqrt(2.0), b = dd_sqrt(3.0);
    dd ab = dd_mul(a, b);
    for (int64_t n = 0; n < 1000; ++n) {
        auto gn = orbit_point(a, b, n);
        // step element (a, b, (2n+1)ab - n*ab) = (a, b, (n+1)*ab)
        HeisenbergPoint step{a, b, dd_mul(ab, static_cast<double>(n + 1))};
        auto gn1 = heis_mul(gn, step);
        auto want = orbit_point(a, b, n + 1);
        CHECK(std::abs(dd_sub(gn1.x, want.x).to_double()) < 1e-10);
        CHECK(std::abs(dd_sub(gn1.y, want.y).to_double()) < 1e-10);
        CHECK(std::abs(dd_sub(gn1.z, want.z).to_double()) < 1e-10);
    }
}

TEST_CASE("bracket value at small n") {
    CHECK(bracket_value(std::sqrt(2.0), std::sqrt(3.0), 0) == 0.0);
    // floor(sqrt2) = 1, so the bracket is {sqrt3}
    CHECK(bracket_value(std::sqrt(2.0), std::sqrt(3.0), 1) ==
          doctest::Approx(0.7320508075688772).epsilon(1e-12));
}

TEST_CASE("bracket equals the third reduced orbit coordinate") {
    dd a = dd_sqrt(2.0), b = dd_sqrt(3.0);
    for (int64_t n = 1; n <= 10'000; ++n) {
        double direct = bracket_value(a, b, n);
        double via_orbit = reduce(orbit_point(a, b, n)).tau3();
        REQUIRE(circle_dist(direct - via_orbit) < 1e-9);
    }
}

TEST_CASE("bracket identity for random parameter pairs") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int pair = 0; pair < 20; ++pair) {
        dd a(u(rng)), b(u(rng));
        for (int64_t n = 1; n <= 2000; ++n) {
            double direct = bracket_value(a, b, n);
            double via_orbit = reduce(orbit_point(a, b, n)).tau3();
            REQUIRE(circle_dist(direct - via_orbit) < 1e-9);
        }
    }
}

TEST_CASE("equal-parameter orbit stays on its two segments") {
    dd a = dd_sqrt(2.0);
    auto c0 = case2_suborbit(a, 0);
    CHECK(c0.segment == 1);
    CHECK(c0.point.tau3() == 0.0);

    auto c1 = case2_suborbit(a, 1);
    CHECK(c1.point.tau1() == doctest::Approx(0.41421356).epsilon(1e-6));
    CHECK(c1.point.tau3() == doctest::Approx(0.41421356).epsilon(1e-6));
    CHECK(c1.segment == 2);

    for (int64_t n = 0; n <= 10'000; ++n) CHECK_NOTHROW(case2_suborbit(a, n));
}

TEST_CASE("high precision constants") {
    dd s2 = dd_sqrt(2.0);
    dd err = dd_sub(dd_mul(s2, s2), dd(2.0));
    CHECK(std::abs(err.to_double()) < 1e-30);

    dd c2 = dd_cbrt(2.0);
    dd err3 = dd_sub(dd_mul(dd_mul(c2, c2), c2), dd(2.0));
    CHECK(std::abs(err3.to_double()) < 1e-29);

    dd phi = dd_golden();
    // phi^2 = phi + 1
    dd lhs = dd_mul(phi, phi);
    dd rhs = dd_add(phi, 1.0);
    CHECK(std::abs(dd_sub(lhs, rhs).to_double()) < 1e-30);
}
