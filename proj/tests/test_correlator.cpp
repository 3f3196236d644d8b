#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nilcorr/correlator.hpp"
#include "nilcorr/errors.hpp"
#include "nilcorr/heisenberg.hpp"
#include "nilcorr/ref.hpp"

using namespace nilcorr;

namespace {

cplx e_of(double x) {
    double t = 2.0 * std::numbers::pi * x;
    return {std::cos(t), std::sin(t)};
}

std::vector<cplx> phase_values(double theta, int64_t top) {
    std::vector<cplx> v(static_cast<size_t>(top));
    for (int64_t n = 1; n <= top; ++n)
        v[static_cast<size_t>(n - 1)] =
            e_of(dd_frac_double(dd_prod(theta, static_cast<double>(n))));
    return v;
}

}  // namespace

TEST_CASE("constant test function reduces to Mertens") {
    auto table = ArithTable::sieve_range(1, 10'001);
    std::vector<cplx> ones(10'000, cplx{1.0, 0.0});
    std::vector<int64_t> Ns = {10, 100, 1000, 10'000};
    auto series = weighted_correlation(table, ones, Ns, Weight::mobius);
    for (size_t i = 0; i < Ns.size(); ++i) {
        int64_t m = 0;
        for (int64_t n = 1; n <= Ns[i]; ++n) m += table.mu(n);
        CHECK(series.normalized[i].real() ==
              doctest::Approx(static_cast<double>(m) / static_cast<double>(Ns[i])));
        CHECK(series.raw[i].real() == doctest::Approx(static_cast<double>(m)));
    }
}

TEST_CASE("zero test function gives the zero series") {
    auto table = ArithTable::sieve_range(1, 1001);
    std::vector<cplx> zeros(1000, cplx{});
    std::vector<int64_t> Ns = {100, 1000};
    auto series = weighted_correlation(table, zeros, Ns, Weight::liouville);
    for (auto v : series.normalized) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("ladder validation") {
    auto table = ArithTable::sieve_range(1, 101);
    std::vector<cplx> ones(100, cplx{1.0, 0.0});
    std::vector<int64_t> bad = {50, 20};
    CHECK_THROWS_AS(weighted_correlation(table, ones, bad, Weight::mobius),
                    std::invalid_argument);
    std::vector<int64_t> past = {50, 200};
    CHECK_THROWS_AS(weighted_correlation(table, ones, past, Weight::mobius),
                    std::invalid_argument);
}

TEST_CASE("liouville series equals the mobius path through the square identity") {
    const int64_t N = 10'000;
    auto table = ArithTable::sieve_range(1, N + 1);
    auto F = [](int64_t n) {
        return e_of(dd_frac_double(dd_prod(std::sqrt(2.0), static_cast<double>(n))));
    };
    std::vector<int64_t> Ns = {N};
    auto direct = weighted_correlation_fn(table, F, Ns, Weight::liouville);
    cplx via_identity = liouville_correlation_via_identity(table, F, N);
    CHECK(std::abs(direct.normalized[0] - via_identity) < 1e-10);
}

TEST_CASE("type I on the constant function") {
    std::vector<cplx> ones(2000, cplx{1.0, 0.0});
    auto t = type_I_statistic(ones, 1000, 8);
    REQUIRE(t.omitted.empty());
    for (const auto& [k, v] : t.by_k) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("type I sees the period-5 phase at full strength") {
    const int64_t N = 1000;
    auto f = phase_values(0.2, 2 * N);
    // k = 5 lives in the window (3, 6]; k = 10 in (5, 10]
    auto t3 = type_I_statistic(f, N, 3);
    CHECK(t3.by_k.at(5) == doctest::Approx(1.0).epsilon(1e-12));
    auto t5 = type_I_statistic(f, N, 5);
    CHECK(t5.by_k.at(10) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("type I matches the direct oracle") {
    const int64_t N = 1000;
    auto f = phase_values(std::sqrt(2.0), 2 * N);
    auto t = type_I_statistic(f, N, 10);
    for (const auto& [k, v] : t.by_k)
        REQUIRE(v == doctest::Approx(ref::type_I_direct(f, N, k)).epsilon(1e-12));
}

TEST_CASE("type II on the constant function is 1") {
    std::vector<cplx> ones(4000, cplx{1.0, 0.0});
    CHECK(type_II_statistic(ones, 1000, 10, 50) == doctest::Approx(1.0));
}

TEST_CASE("type II matches the literal quadrilinear loop") {
    const int64_t N = 1000;
    const int64_t K = 10, W = 25;  // K*W = 250 = N/4
    auto f = phase_values(std::sqrt(2.0), 2 * K * (2 * W - 1) + 1);
    double fast = type_II_statistic(f, N, K, W);
    double slow = ref::type_II_quadrilinear(f, K, W);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
    CHECK(fast >= 0.0);
}

TEST_CASE("type II is nonnegative on random data") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<cplx> f(3000);
        for (auto& x : f) x = e_of(u(rng));
        CHECK(type_II_statistic(f, 700, 7, 25) >= 0.0);
    }
}

TEST_CASE("vaughan report separates periodic from equidistributed input") {
    const int64_t N = 20'000;
    auto periodic = phase_values(0.2, 4 * N + 2);
    auto rep_p = vaughan_report(periodic, N);
    CHECK(rep_p.max_type1 >= 0.99);
    CHECK(rep_p.classification == TypeIIReport::Class::typeI_large);

    auto equi = phase_values(std::sqrt(2.0), 4 * N + 2);
    auto rep_e = vaughan_report(equi, N);
    CHECK(rep_e.max_type1 < 0.1);
    CHECK(rep_e.type2 < 0.1);
    CHECK(rep_e.classification == TypeIIReport::Class::both_small);
}

TEST_CASE("arc classification") {
    auto third = TorusPolynomial::linear(1.0 / 3.0);
    CHECK(classify_arcs({third}, 1000, 20, 0.1) == ArcClass::major_arc);

    auto irr = TorusPolynomial::linear(std::sqrt(2.0));
    CHECK(classify_arcs({irr}, 1000, 20, 0.1) == ArcClass::minor_arc);

    auto perturbed = TorusPolynomial::linear(1.0 / 3.0 + 1e-9);
    CHECK(classify_arcs({perturbed}, 1000, 20, 0.1) == ArcClass::major_arc);

    // mixed pair: only one direction obstructed
    CHECK(classify_arcs({irr, third}, 1000, 20, 0.1) == ArcClass::minor_arc);
    CHECK(classify_arcs({third, TorusPolynomial::linear(0.25)}, 1000, 20, 0.1) ==
          ArcClass::major_arc);
}

TEST_CASE("arc classification ignores integer coefficient shifts") {
    auto a = TorusPolynomial::from_binomial({0.0, 0.25});
    auto b = TorusPolynomial::from_binomial({0.0, 7.25});
    CHECK(classify_arcs({a}, 1000, 20, 0.1) == classify_arcs({b}, 1000, 20, 0.1));
}

TEST_CASE("prime orbit: nth-prime mode on the constant function") {
    auto table = ArithTable::sieve_range(1, 10'000);
    std::vector<cplx> ones(10'000, cplx{1.0, 0.0});
    auto out = prime_orbit_average(table, ones, PrimeOrbitMode::nth_prime, 500, 0);
    CHECK(out.average.real() == doctest::Approx(1.0));
    CHECK(out.W == 1);
}

TEST_CASE("prime orbit: W and phi(W)/W at w = 5") {
    auto table = ArithTable::sieve_range(1, 40'000);
    std::vector<cplx> ones(40'000, cplx{1.0, 0.0});
    auto out = prime_orbit_average(table, ones, PrimeOrbitMode::lambda_weighted, 1000, 5);
    CHECK(out.W == 30);
    CHECK(out.per_residue.size() == 8);  // phi(30)
}

TEST_CASE("prime orbit: weighted averages approach 1 per residue class") {
    const int64_t W = 30;
    const int64_t N = 33'000;  // Wn + b stays near 1e6
    auto table = ArithTable::sieve_range(1, W * N + W);
    std::vector<cplx> ones(static_cast<size_t>(W * N + W), cplx{1.0, 0.0});
    auto out = prime_orbit_average(table, ones, PrimeOrbitMode::lambda_weighted, N, 5);
    for (const auto& [b, avg] : out.per_residue) {
        CHECK(avg.real() > 0.85);
        CHECK(avg.real() < 1.15);
        CHECK(avg.imag() == 0.0);
    }
    CHECK(out.average.real() == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("prime orbit resource errors") {
    auto table = ArithTable::sieve_range(1, 100);
    std::vector<cplx> ones(99, cplx{1.0, 0.0});
    CHECK_THROWS_AS(prime_orbit_average(table, ones, PrimeOrbitMode::nth_prime, 500, 0),
                    resource_error);
}

TEST_CASE("psi built-ins have the advertised shape") {
    auto bump = PsiFunction::smooth_bump();
    CHECK(bump(0.0).real() == doctest::Approx(1.0));
    CHECK(bump(0.05).real() == doctest::Approx(1.0));
    CHECK(bump(0.95).real() == doctest::Approx(1.0));
    CHECK(bump(0.5).real() == doctest::Approx(-1.0));
    // mean zero over the circle
    double mean = 0.0;
    const int M = 200'000;
    for (int i = 0; i < M; ++i)
        mean += bump((static_cast<double>(i) + 0.5) / M).real();
    CHECK(std::abs(mean / M) < 1e-3);

    // sampled tables carry a knot-resolution error ~ Lipschitz/knots
    auto tent = PsiFunction::centered_tent();
    CHECK(tent(0.5).real() == doctest::Approx(1.0).epsilon(0.01));
    CHECK(tent(0.0).real() == doctest::Approx(-1.0));

    auto ec = PsiFunction::exp_circle();
    CHECK(std::abs(ec(0.25) - cplx{0.0, 1.0}) < 1e-12);
}

TEST_CASE("psi table interpolation and validation") {
    CHECK_THROWS_AS(PsiFunction::from_table(std::vector<cplx>(100)), std::invalid_argument);
    std::vector<cplx> knots(2048);
    for (size_t i = 0; i < knots.size(); ++i)
        knots[i] = static_cast<double>(i) / static_cast<double>(knots.size() - 1);
    auto psi = PsiFunction::from_table(knots);
    CHECK(psi(0.37).real() == doctest::Approx(0.37).epsilon(1e-6));
}

TEST_CASE("bracket correlation with the constant test function is Mertens") {
    const int64_t N = 5000;
    auto table = ArithTable::sieve_range(1, N + 1);
    std::vector<cplx> flat(2048, cplx{1.0, 0.0});
    auto psi = PsiFunction::from_table(flat);
    std::vector<int64_t> Ns = {N};
    auto series =
        bracket_correlation(table, dd_sqrt(2.0), dd_sqrt(3.0), psi, Ns, Weight::mobius);
    int64_t m = 0;
    for (int64_t n = 1; n <= N; ++n) m += table.mu(n);
    CHECK(series.normalized[0].real() ==
          doctest::Approx(static_cast<double>(m) / static_cast<double>(N)));
}

TEST_CASE("decay fit recovers planted laws") {
    std::vector<int64_t> Ns = {1000, 10'000, 100'000, 1'000'000};

    std::vector<cplx> power;
    for (int64_t N : Ns)
        power.emplace_back(3.0 * std::pow(static_cast<double>(N), -0.5), 0.0);
    CHECK(fit_decay_exponent(Ns, power, FitMode::power) ==
          doctest::Approx(-0.5).epsilon(1e-9));

    std::vector<cplx> logpow;
    for (int64_t N : Ns)
        logpow.emplace_back(2.0 * std::pow(std::log(static_cast<double>(N)), -2.0), 0.0);
    CHECK(fit_decay_exponent(Ns, logpow, FitMode::log_power) ==
          doctest::Approx(-2.0).epsilon(1e-9));

    // rungs below 1e-12 are excluded rather than dragging the fit
    std::vector<cplx> with_dead = power;
    with_dead[2] = cplx{0.0, 0.0};
    CHECK(fit_decay_exponent(Ns, with_dead, FitMode::power) ==
          doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("csv emission is stable") {
    CorrelationSeries s;
    s.Ns = {10};
    s.raw = {cplx{1.0, 0.0}};
    s.normalized = {cplx{0.1, 0.0}};
    s.fitted_exponent = -0.25;
    auto text = s.to_csv();
    CHECK(text == "N,re,im,abs\n10,0.1,0,0.1\nfitted_exponent,-0.25,,\n");
}
