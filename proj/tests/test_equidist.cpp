#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nilcorr/dd.hpp"
#include "nilcorr/equidist.hpp"
#include "nilcorr/ref.hpp"

using namespace nilcorr;

namespace {

cplx e_of(double x) {
    double t = 2.0 * std::numbers::pi * x;
    return {std::cos(t), std::sin(t)};
}

std::vector<cplx> linear_phase_values(double theta, int64_t N) {
    std::vector<cplx> v(static_cast<size_t>(N));
    for (int64_t n = 1; n <= N; ++n)
        v[static_cast<size_t>(n - 1)] = e_of(dd_frac_double(dd_prod(theta, static_cast<double>(n))));
    return v;
}

}  // namespace

TEST_CASE("weyl sum of the zero polynomial is 1") {
    auto p = TorusPolynomial::from_binomial({0.0});
    CHECK(weyl_sum(p, 100) == cplx{1.0, 0.0});
}

TEST_CASE("weyl sum of the alternating phase cancels") {
    auto p = TorusPolynomial::linear(0.5);
    CHECK(std::abs(weyl_sum(p, 1000)) < 1e-12);
}

TEST_CASE("weyl sum of n*sqrt2 is small and matches the Kahan oracle") {
    auto p = TorusPolynomial::linear(std::sqrt(2.0));
    const int64_t N = 10'000;
    cplx fast = weyl_sum(p, N);
    cplx slow = ref::weyl_sum_direct(p, N);
    CHECK(std::abs(fast - slow) < 1e-12);
    CHECK(std::abs(fast) < 0.02);
}

TEST_CASE("weyl sums ignore integer shifts of the coefficients") {
    // dyadic coefficients so that the shifted doubles are exactly representable
    auto a = TorusPolynomial::from_binomial({0.25, 0.375, 0.6875});
    auto b = TorusPolynomial::from_binomial({1.25, -0.625, 3.6875});
    CHECK(weyl_sum(a, 500) == weyl_sum(b, 500));

    auto ea = TorusPolynomial::from_binomial_exact({Rational(1, 3), Rational(2, 7)});
    auto eb = TorusPolynomial::from_binomial_exact({Rational(4, 3), Rational(-5, 7)});
    CHECK(weyl_sum(ea, 500) == weyl_sum(eb, 500));
}

TEST_CASE("star discrepancy closed forms") {
    const int64_t N = 100;
    std::vector<double> grid(static_cast<size_t>(N));
    for (int64_t i = 1; i <= N; ++i)
        grid[static_cast<size_t>(i - 1)] = (2.0 * static_cast<double>(i) - 1.0) / (2.0 * N);
    CHECK(star_discrepancy(grid) == doctest::Approx(1.0 / (2.0 * N)));

    CHECK(star_discrepancy({0.5}) == doctest::Approx(0.5));
}

TEST_CASE("star discrepancy is permutation invariant and in range") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> pts(1000);
    for (auto& x : pts) x = u(rng);
    double d1 = star_discrepancy(pts);
    std::shuffle(pts.begin(), pts.end(), rng);
    double d2 = star_discrepancy(pts);
    CHECK(d1 == d2);
    CHECK(d1 >= 1.0 / 2000.0);
    CHECK(d1 <= 1.0);
}

TEST_CASE("star discrepancy of the sqrt2 rotation is tiny") {
    const int64_t N = 100'000;
    std::vector<double> pts(static_cast<size_t>(N));
    for (int64_t n = 1; n <= N; ++n)
        pts[static_cast<size_t>(n - 1)] =
            dd_frac_double(dd_prod(std::sqrt(2.0), static_cast<double>(n)));
    double d = star_discrepancy(pts);
    CHECK(d <= 10.0 * std::log(static_cast<double>(N)) / static_cast<double>(N));
}

TEST_CASE("parity sequence has a full-size progression witness") {
    const int64_t N = 2000;
    std::vector<cplx> v(static_cast<size_t>(N));
    for (int64_t n = 1; n <= N; ++n)
        v[static_cast<size_t>(n - 1)] = (n % 2 == 0) ? 1.0 : -1.0;
    auto rep = total_equidistribution_estimate(v, 1.0, 4, 0.1);
    CHECK(rep.delta_hat == doctest::Approx(1.0));
    CHECK(rep.witness.step == 2);
}

TEST_CASE("zero values give delta zero") {
    std::vector<cplx> v(500, cplx{0.0, 0.0});
    auto rep = total_equidistribution_estimate(v, 1.0, 5, 0.2);
    CHECK(rep.delta_hat == 0.0);
}

TEST_CASE("progression scan matches the exhaustive oracle at small N") {
    const int64_t N = 500;
    auto v = linear_phase_values(std::sqrt(2.0), N);
    auto fast = total_equidistribution_estimate(v, 1.0, 10, 0.1);
    auto slow = ref::progression_scan_exhaustive(v, 1.0, 10, 0.1);
    CHECK(fast.delta_hat == slow.delta_hat);
    CHECK(fast.tested_progressions == slow.tested_progressions);
    CHECK_FALSE(fast.dyadic_windows);

    // the witness attains the reported maximum
    cplx s{};
    for (int64_t i = 0; i < fast.witness.length; ++i)
        s += v[static_cast<size_t>(fast.witness.start - 1 + i * fast.witness.step)];
    CHECK(std::abs(s) / static_cast<double>(fast.witness.length) ==
          doctest::Approx(fast.delta_hat).epsilon(1e-12));
}

TEST_CASE("equidistributed phase scores low even through the dyadic grid") {
    const int64_t N = 10'000;
    auto v = linear_phase_values(std::sqrt(2.0), N);
    auto rep = total_equidistribution_estimate(v, 1.0, 20, 0.1);
    CHECK(rep.delta_hat < 0.05);
    CHECK(rep.dyadic_windows);
}

TEST_CASE("dyadic grid underestimates the exhaustive maximum by at most half") {
    // random values: the dyadic max must be within a factor ~2 of exhaustive
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int64_t N = 400;
    std::vector<cplx> v(static_cast<size_t>(N));
    for (auto& x : v) x = e_of(u(rng));
    auto exact = total_equidistribution_estimate(v, 1.0, 6, 0.05, /*exact_cutoff=*/1 << 20);
    auto dyadic = total_equidistribution_estimate(v, 1.0, 6, 0.05, /*exact_cutoff=*/1);
    CHECK(dyadic.delta_hat <= exact.delta_hat + 1e-12);
    CHECK(dyadic.delta_hat >= 0.25 * exact.delta_hat);
}

TEST_CASE("character family scan catches a rational orbit at some frequency") {
    const int64_t N = 3000;
    std::vector<double> pts(static_cast<size_t>(N));
    for (int64_t n = 1; n <= N; ++n)
        pts[static_cast<size_t>(n - 1)] = frac(static_cast<double>(n) / 3.0);
    auto rep = character_family_estimate(pts, 5, 5, 0.1);
    CHECK(rep.test_family == TestFamily::characters);
    CHECK(rep.delta_hat == doctest::Approx(1.0));
    CHECK(rep.character_k >= 1);

    std::vector<double> irr(static_cast<size_t>(N));
    for (int64_t n = 1; n <= N; ++n)
        irr[static_cast<size_t>(n - 1)] =
            dd_frac_double(dd_prod(std::sqrt(2.0), static_cast<double>(n)));
    auto rep2 = character_family_estimate(irr, 5, 5, 0.1);
    CHECK(rep2.delta_hat < 0.1);
}

TEST_CASE("dichotomy flags rational obstructions") {
    auto half = TorusPolynomial::linear(0.5);
    auto cert = torus_dichotomy({half}, 1000, 10, 0.1);
    CHECK(cert.verdict == Verdict::obstructed);
    CHECK(cert.k == std::vector<int64_t>{2});
    CHECK(cert.norm == 0.0);
}

TEST_CASE("dichotomy passes the sqrt2 rotation") {
    auto p = TorusPolynomial::linear(std::sqrt(2.0));
    auto cert = torus_dichotomy({p}, 10'000, 10, 0.1);
    CHECK(cert.verdict == Verdict::equidistributed_at_scale);
    CHECK(cert.max_weyl_abs < 0.1);
}

TEST_CASE("dichotomy on the two-torus with independent irrationals") {
    std::vector<TorusPolynomial> g = {TorusPolynomial::linear(std::sqrt(2.0)),
                                      TorusPolynomial::linear(std::sqrt(3.0))};
    auto cert = torus_dichotomy(g, 10'000, 5, 0.1);
    CHECK(cert.verdict == Verdict::equidistributed_at_scale);
}

TEST_CASE("dichotomy finds every small denominator") {
    for (int64_t q = 2; q <= 20; ++q) {
        for (int64_t a = 1; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            auto p = TorusPolynomial::linear(static_cast<double>(a) / static_cast<double>(q));
            auto cert = torus_dichotomy({p}, 10'000, 20, 0.1);
            REQUIRE(cert.verdict == Verdict::obstructed);
            REQUIRE(std::abs(cert.k[0]) <= q);
        }
    }
}
