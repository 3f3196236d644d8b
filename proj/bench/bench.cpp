// Kernel benchmark: OpenMP-parallel paths against the serial references.
//
// Every row checks agreement before timing, so a speedup never comes from
// computing something different.  Usage: nilcorr_bench [scale]
// where scale (default 1.0) multiplies the problem sizes.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nilcorr/arith.hpp"
#include "nilcorr/correlator.hpp"
#include "nilcorr/dd.hpp"
#include "nilcorr/equidist.hpp"
#include "nilcorr/heisenberg.hpp"
#include "nilcorr/polyseq.hpp"
#include "nilcorr/ref.hpp"

using namespace nilcorr;

namespace {

double now() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return static_cast<double>(clock()) / CLOCKS_PER_SEC;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

struct Row {
    const char* name;
    double serial_s;
    double parallel_s;
    bool agree;
};

std::vector<Row> rows;

template <class SerialFn, class ParallelFn, class CmpFn>
void bench(const char* name, SerialFn&& serial, ParallelFn&& parallel, CmpFn&& agree) {
    set_threads(1);
    double t0 = now();
    auto a = serial();
    double ts = now() - t0;

    set_threads(max_threads());
    t0 = now();
    auto b = parallel();
    double tp = now() - t0;

    rows.push_back({name, ts, tp, agree(a, b)});
    std::printf("  %-34s serial %8.3fs   parallel %8.3fs   x%5.2f   %s\n", name, ts, tp,
                tp > 0 ? ts / tp : 0.0, agree(a, b) ? "agree" : "DISAGREE");
    std::fflush(stdout);
}

cplx e_of(double x) {
    double t = 2.0 * std::numbers::pi * x;
    return {std::cos(t), std::sin(t)};
}

}  // namespace

int main(int argc, char** argv) {
    double scale = argc > 1 ? std::atof(argv[1]) : 1.0;
    std::printf("kernel benchmark, %d thread(s) available, scale %.2f\n", max_threads(), scale);

    {  // segmented factor sieve vs per-n trial division
        auto N = static_cast<int64_t>(2'000'000 * scale);
        bench(
            "sieve mu/lambda (vs trial div)",
            [&] { return ref::mobius_table_naive(N); },
            [&] { return ArithTable::sieve_range(1, N + 1); },
            [&](const std::vector<int8_t>& naive, const ArithTable& t) {
                for (int64_t n = 1; n <= N; n += 997)
                    if (naive[static_cast<size_t>(n - 1)] != t.mu(n)) return false;
                return true;
            });
    }

    {  // blocked Weyl sum vs direct Kahan loop
        auto N = static_cast<int64_t>(4'000'000 * scale);
        auto p = TorusPolynomial::linear(std::sqrt(2.0));
        bench(
            "weyl sum (vs Kahan loop)",
            [&] { return ref::weyl_sum_direct(p, N); },
            [&] { return weyl_sum(p, N); },
            [&](cplx a, cplx b) { return std::abs(a - b) < 1e-11; });
    }

    {  // factored Type II vs the literal quadrilinear loop (small size)
        const int64_t K = static_cast<int64_t>(24 * scale), W = 400;
        std::vector<cplx> f(static_cast<size_t>(2 * K * (2 * W - 1)));
        for (size_t i = 0; i < f.size(); ++i)
            f[i] = e_of(dd_frac_double(dd_prod(std::sqrt(2.0), static_cast<double>(i + 1))));
        bench(
            "type II factored (vs 4-loop)",
            [&] { return ref::type_II_quadrilinear(f, K, W); },
            [&] { return type_II_statistic(f, 4 * K * W, K, W); },
            [&](double a, double b) { return std::abs(a - b) < 1e-10; });
    }

    {  // progression scan: residue-parallel dyadic vs exhaustive
        auto N = static_cast<int64_t>(3000 * scale);
        std::vector<cplx> v(static_cast<size_t>(N));
        for (int64_t n = 1; n <= N; ++n)
            v[static_cast<size_t>(n - 1)] =
                e_of(dd_frac_double(dd_prod(std::sqrt(2.0), static_cast<double>(n))));
        bench(
            "progression scan (vs full scan)",
            [&] { return ref::progression_scan_exhaustive(v, 1.0, 12, 0.05); },
            [&] { return total_equidistribution_estimate(v, 1.0, 12, 0.05); },
            [&](const EquidistributionReport& a, const EquidistributionReport& b) {
                // the dyadic grid may under-report by at most a factor 2
                return b.delta_hat <= a.delta_hat + 1e-12 && b.delta_hat >= 0.4 * a.delta_hat;
            });
    }

    {  // bracket orbit throughput, 1 thread vs all (same deterministic kernel)
        auto N = static_cast<int64_t>(2'000'000 * scale);
        auto table = ArithTable::sieve_range(1, N + 1);
        std::vector<int64_t> Ns = {N};
        auto psi = PsiFunction::exp_circle();
        auto run = [&] {
            return bracket_correlation(table, dd_sqrt(2.0), dd_sqrt(3.0), psi, Ns,
                                       Weight::mobius);
        };
        bench(
            "bracket correlation (1T vs all)",
            [&] { return run(); }, [&] { return run(); },
            [&](const CorrelationSeries& a, const CorrelationSeries& b) {
                // fixed blocking: bit-identical whatever the thread count
                return a.raw[0] == b.raw[0];
            });
    }

    int bad = 0;
    for (const auto& r : rows) bad += r.agree ? 0 : 1;
    std::printf("%zu kernels, %d disagreement(s)\n", rows.size(), bad);
    return bad;
}
