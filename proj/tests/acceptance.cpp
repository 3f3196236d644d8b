// Acceptance suite: one line per criterion, exit code = number of failures.
//
// Each criterion is checked at the tolerance written next to it; oracles are
// the serial reference implementations, never the kernels under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "nilcorr/arith.hpp"
#include "nilcorr/correlator.hpp"
#include "nilcorr/dirichlet.hpp"
#include "nilcorr/equidist.hpp"
#include "nilcorr/heisenberg.hpp"
#include "nilcorr/polyseq.hpp"
#include "nilcorr/ref.hpp"

using namespace nilcorr;

namespace {

int failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %d: %s  [%s]\n", pass ? "PASS" : "FAIL", idx, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

cplx e_of(double x) {
    double t = 2.0 * std::numbers::pi * x;
    return {std::cos(t), std::sin(t)};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
void exact_identities() {
    const int64_t N = 100'000;
    auto table = ArithTable::sieve_range(1, N + 1);
    bool pass = true;
    std::string detail;

    {  // Mobius inversion
        std::vector<int32_t> divsum(static_cast<size_t>(N) + 1, 0);
        for (int64_t d = 1; d <= N; ++d) {
            int8_t m = table.mu(d);
            if (m == 0) continue;
            for (int64_t k = d; k <= N; k += d) divsum[static_cast<size_t>(k)] += m;
        }
        bool ok = divsum[1] == 1;
        for (int64_t n = 2; n <= N && ok; ++n) ok = divsum[static_cast<size_t>(n)] == 0;
        pass = pass && ok;
        detail += std::string("inversion=") + (ok ? "ok" : "BROKEN");
    }
    {  // lambda two paths
        auto via_mu = liouville_from_mobius(N);
        bool ok = true;
        for (int64_t n = 1; n <= N && ok; ++n)
            ok = via_mu[static_cast<size_t>(n - 1)] == table.lambda(n);
        pass = pass && ok;
        detail += std::string(" lambda-paths=") + (ok ? "equal" : "DIFFER");
    }
    {  // characters: orthogonality + Plancherel + inversion, q <= 100
        double worst = 0.0;
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int64_t q = 1; q <= 100; ++q) {
            auto g = UnitGroupStructure::build(q);
            auto chars = all_characters(g);
            for (size_t i = 0; i < chars.size(); ++i)
                for (size_t j = 0; j < chars.size(); ++j) {
                    cplx acc{};
                    for (int64_t n = 0; n < q; ++n)
                        if (g->is_unit(n)) acc += chars[i](n) * std::conj(chars[j](n));
                    acc /= static_cast<double>(g->phi());
                    worst = std::max(worst, std::abs(acc - (i == j ? cplx{1} : cplx{})));
                }
            std::vector<cplx> f(static_cast<size_t>(q), cplx{});
            for (int64_t n = 0; n < q; ++n)
                if (g->is_unit(n)) f[static_cast<size_t>(n)] = {u(rng), u(rng)};
            auto ex = fourier_expand(f, g);
            double l2 = 0.0;
            for (auto c : ex.coeffs) l2 += std::norm(c);
            double rhs = 0.0;
            for (int64_t n = 0; n < q; ++n)
                if (g->is_unit(n)) rhs += std::norm(f[static_cast<size_t>(n)]);
            rhs /= static_cast<double>(g->phi());
            worst = std::max(worst, std::abs(l2 - rhs));
            for (int64_t n = 0; n < q; ++n) {
                if (!g->is_unit(n)) continue;
                cplx rec{};
                for (size_t c = 0; c < ex.coeffs.size(); ++c)
                    rec += ex.coeffs[c] * ex.characters[c](n);
                worst = std::max(worst, std::abs(rec - f[static_cast<size_t>(n)]));
            }
        }
        pass = pass && worst < 1e-12;
        detail += " char-defect=" + fmt(worst);
    }
    {  // gcd-splitting decomposition, 20 random periodic f with q <= 30
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        bool ok = true;
        for (int trial = 0; trial < 20 && ok; ++trial) {
            auto q = static_cast<int64_t>(1 + rng() % 30);
            std::vector<cplx> f(static_cast<size_t>(q));
            for (auto& x : f) x = e_of(u(rng));
            try {
                mobius_periodic_correlation(f, table, N);  // throws above 1e-10
            } catch (...) {
                ok = false;
            }
        }
        pass = pass && ok;
        detail += std::string(" gcd-split=") + (ok ? "20/20" : "FAILED");
    }
    report(1, "exact identities", pass, detail);
}

// ---------------------------------------------------------------- criterion 2
void bracket_identity() {
    const int64_t N = 10'000;
    double worst = 0.0;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::vector<std::pair<dd, dd>> pairs = {{dd_sqrt(2.0), dd_sqrt(3.0)}};
    for (int i = 0; i < 20; ++i) pairs.emplace_back(dd(u(rng)), dd(u(rng)));
    for (auto [a, b] : pairs)
        for (int64_t n = 1; n <= N; ++n) {
            double direct = bracket_value(a, b, n);
            double via = reduce(orbit_point(a, b, n)).tau3();
            worst = std::max(worst, circle_dist(direct - via));
        }
    bool identity_ok = worst < 1e-9;

    bool segments_ok = true;
    double seg_worst = 0.0;
    try {
        for (int64_t n = 0; n <= N; ++n)
            seg_worst = std::max(seg_worst, case2_suborbit(dd_sqrt(2.0), n).residual);
    } catch (...) {
        segments_ok = false;
    }
    report(2, "bracket identity and two-segment containment", identity_ok && segments_ok,
           "identity-defect=" + fmt(worst) + " segment-defect=" + fmt(seg_worst));
}

// ---------------------------------------------------------------- criterion 3
void oracle_equivalence() {
    bool pass = true;
    std::string detail;
    {  // Type I vs direct loop at N = 1e3
        const int64_t N = 1000;
        std::vector<cplx> f(static_cast<size_t>(2 * N));
        for (int64_t n = 1; n <= 2 * N; ++n)
            f[static_cast<size_t>(n - 1)] =
                e_of(dd_frac_double(dd_prod(std::sqrt(2.0), static_cast<double>(n))));
        double worst = 0.0;
        for (int64_t K : {3, 10, 31}) {
            auto t = type_I_statistic(f, N, K);
            for (const auto& [k, v] : t.by_k)
                worst = std::max(worst, std::abs(v - ref::type_I_direct(f, N, k)));
        }
        pass = pass && worst < 1e-12;
        detail += "typeI-defect=" + fmt(worst);
    }
    {  // Type II vs quadrilinear at N = 1e3
        const int64_t N = 1000, K = 10, W = 25;
        std::vector<cplx> f(static_cast<size_t>(2 * K * (2 * W - 1)));
        for (size_t i = 0; i < f.size(); ++i)
            f[i] = e_of(dd_frac_double(dd_prod(std::sqrt(2.0), static_cast<double>(i + 1))));
        double fast = type_II_statistic(f, N, K, W);
        double slow = ref::type_II_quadrilinear(f, K, W);
        pass = pass && std::abs(fast - slow) < 1e-12;
        detail += " typeII-defect=" + fmt(std::abs(fast - slow));
    }
    {  // progression scan vs exhaustive at N = 500
        const int64_t N = 500;
        std::vector<cplx> v(static_cast<size_t>(N));
        for (int64_t n = 1; n <= N; ++n)
            v[static_cast<size_t>(n - 1)] =
                e_of(dd_frac_double(dd_prod(std::sqrt(2.0), static_cast<double>(n))));
        auto fast = total_equidistribution_estimate(v, 1.0, 10, 0.1);
        auto slow = ref::progression_scan_exhaustive(v, 1.0, 10, 0.1);
        double defect = std::abs(fast.delta_hat - slow.delta_hat);
        pass = pass && defect < 1e-12;
        detail += " scan-defect=" + fmt(defect);
    }
    {  // Mertens at 1e6 vs factoring every n
        int64_t fast = mertens(1'000'000);
        int64_t slow = ref::mertens_naive(1'000'000);
        pass = pass && fast == slow;
        detail += " mertens-1e6=" + std::to_string(fast) + (fast == slow ? "=oracle" : "!=oracle");
    }
    report(3, "oracle equivalence", pass, detail);
}

// ---------------------------------------------------------------- criterion 4
void davenport_trend() {
    const int64_t top = 1'000'000;
    auto table = ArithTable::sieve_range(1, top + 1);
    std::vector<int64_t> Ns = {1000, 10'000, 100'000, 1'000'000};
    dd s2 = dd_sqrt(2.0);
    auto series = weighted_correlation_fn(
        table,
        [&](int64_t n) { return e_of(dd_frac_double(dd_mul(s2, static_cast<double>(n)))); },
        Ns, Weight::mobius, FitMode::power);
    bool decreasing = true;
    for (size_t i = 1; i < series.normalized.size(); ++i)
        decreasing = decreasing &&
                     std::abs(series.normalized[i]) < std::abs(series.normalized[i - 1]);
    double last = std::abs(series.normalized.back());
    bool pass = decreasing && last < 0.05 && series.fitted_exponent < -0.3;
    std::string detail = "abs=";
    for (auto v : series.normalized) detail += fmt(std::abs(v)) + " ";
    detail += "exponent=" + fmt(series.fitted_exponent);
    report(4, "Davenport trend for mu against e(n sqrt2)", pass, detail);
}

// ---------------------------------------------------------------- criterion 5
void bracket_trend() {
    const int64_t top = 1'000'000;
    auto table = ArithTable::sieve_range(1, top + 1);
    std::vector<int64_t> Ns = {1000, 10'000, 100'000, 1'000'000};
    auto psi = PsiFunction::exp_circle();

    auto case1 = bracket_correlation(table, dd_sqrt(2.0), dd_sqrt(3.0), psi, Ns, Weight::mobius);
    auto case2 = bracket_correlation(table, dd_sqrt(2.0), dd_sqrt(2.0), psi, Ns, Weight::mobius);
    double last1 = std::abs(case1.normalized.back());
    double last2 = std::abs(case2.normalized.back());
    bool pass = last1 < 0.05 && last2 < 0.05 && case1.fitted_exponent < 0.0 &&
                case2.fitted_exponent < 0.0;
    report(5, "bracket correlation trend (two parameter cases)", pass,
           "abs1=" + fmt(last1) + " exp1=" + fmt(case1.fitted_exponent) +
               " abs2=" + fmt(last2) + " exp2=" + fmt(case2.fitted_exponent));
}

// ---------------------------------------------------------------- criterion 6
void prime_orbit() {
    auto primes = primes_up_to(10'000'000);
    std::vector<double> pts;
    pts.reserve(primes.size());
    dd s2 = dd_sqrt(2.0);
    for (int64_t p : primes)
        pts.push_back(dd_frac_double(dd_mul(s2, static_cast<double>(p))));
    double disc = star_discrepancy(std::move(pts));

    const int64_t N = 100'000;
    cplx acc{};
    for (int64_t i = 0; i < N; ++i)
        acc += e_of(dd_frac_double(dd_mul(s2, static_cast<double>(primes[static_cast<size_t>(i)]))));
    double avg = std::abs(acc) / static_cast<double>(N);

    bool pass = disc < 0.005 && avg < 0.02;
    report(6, "prime-orbit equidistribution for sqrt2", pass,
           "discrepancy=" + fmt(disc) + " |avg|=" + fmt(avg));
}

// ---------------------------------------------------------------- criterion 7
void type_contrast() {
    const int64_t N = 100'000;
    std::vector<cplx> periodic(static_cast<size_t>(4 * N + 2));
    std::vector<cplx> equi(static_cast<size_t>(4 * N + 2));
    dd s2 = dd_sqrt(2.0);
    for (size_t i = 0; i < periodic.size(); ++i) {
        auto n = static_cast<int64_t>(i + 1);
        periodic[i] = e_of(frac(static_cast<double>(n % 5) / 5.0));
        equi[i] = e_of(dd_frac_double(dd_mul(s2, static_cast<double>(n))));
    }
    auto rep_p = vaughan_report(periodic, N);
    auto rep_e = vaughan_report(equi, N);

    // window K = 8 contains k = 10 and 15; both give inner average 1
    bool periodic_ok = rep_p.type1.count(8) != 0 && rep_p.type1.at(8) >= 0.99;
    bool equi_ok = rep_e.max_type1 < 0.05 && rep_e.type2 < 0.05;
    bool nonneg = rep_p.type2 >= -1e-12 && rep_e.type2 >= -1e-12;
    report(7, "bilinear statistic contrast", periodic_ok && equi_ok && nonneg,
           "periodic-max=" + fmt(rep_p.max_type1) + " equi-max=" + fmt(rep_e.max_type1) +
               " equi-type2=" + fmt(rep_e.type2));
}

// ---------------------------------------------------------------- criterion 8
void dichotomy_correctness() {
    bool pass = true;
    int64_t cases = 0;
    for (int64_t q = 2; q <= 20; ++q)
        for (int64_t a = 1; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            auto p = TorusPolynomial::linear(static_cast<double>(a) / static_cast<double>(q));
            auto cert = torus_dichotomy({p}, 10'000, 20, 0.1);
            pass = pass && cert.verdict == Verdict::obstructed && std::abs(cert.k[0]) <= q;
            ++cases;
        }
    auto irr = torus_dichotomy({TorusPolynomial::linear(std::sqrt(2.0))}, 10'000, 20, 0.1);
    bool irr_ok = irr.verdict == Verdict::equidistributed_at_scale;
    report(8, "dichotomy flags rationals and passes sqrt2", pass && irr_ok,
           std::to_string(cases) + " rational cases, sqrt2 max-weyl=" + fmt(irr.max_weyl_abs));
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    exact_identities();
    bracket_identity();
    oracle_equivalence();
    davenport_trend();
    bracket_trend();
    prime_orbit();
    type_contrast();
    dichotomy_correctness();
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/8 criteria passed in %.1f s\n", 8 - failures, dt);
    return failures;
}
