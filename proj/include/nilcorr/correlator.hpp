#pragma once

// Correlation experiments: mu/lambda against supplied sequence values over a
// ladder of N, bilinear (Type I / Type II) statistics with their
// large/small classification, arc classification of torus sequences,
// prime-orbit averages, and bracket-polynomial correlations.
//
// Everything here is a reduction over index ranges; parallel partial sums
// use fixed blocking with pairwise combination, so results are bit-stable
// across thread counts.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nilcorr/arith.hpp"
#include "nilcorr/dd.hpp"
#include "nilcorr/equidist.hpp"
#include "nilcorr/polyseq.hpp"

namespace nilcorr {

enum class Weight { mobius, liouville };
enum class FitMode { log_power, power };  // |E| ~ log^s N  vs  |E| ~ N^s

struct CorrelationSeries {
    std::vector<int64_t> Ns;
    std::vector<cplx> raw;         // sums
    std::vector<cplx> normalized;  // averages raw/N
    double fitted_exponent = 0.0;  // least-squares slope of log|E| on the fit axis
    FitMode fit_mode = FitMode::power;
    std::string to_csv() const;   // columns N, re, im, abs; exponent footer
    std::string to_json(const std::string& label) const;
};

// Least-squares slope of log|E| against log N (power) or log log N
// (log_power); rungs below 1e-12 in magnitude are excluded.
double fit_decay_exponent(std::span<const int64_t> Ns, std::span<const cplx> normalized,
                          FitMode mode);

// shortest round-trip decimal representation (CSV/JSON output)
std::string format_double(double v);

// F_values[i] is F at n = i+1.  Ladder must be ascending and within range.
CorrelationSeries weighted_correlation(const ArithTable& table, std::span<const cplx> F_values,
                                       std::span<const int64_t> Ns, Weight weight,
                                       FitMode fit = FitMode::power);

// same series computed without a value array: F supplied as a callable
CorrelationSeries weighted_correlation_fn(const ArithTable& table,
                                          const std::function<cplx(int64_t)>& F,
                                          std::span<const int64_t> Ns, Weight weight,
                                          FitMode fit = FitMode::power);

// Liouville-weighted average rebuilt from the Mobius path through
//   lambda(n) = sum_{r^2 | n} mu(n/r^2):
// E_{n<=N} lambda(n) F(n) = (1/N) sum_{r <= sqrt N} sum_{m <= N/r^2} mu(m) F(r^2 m).
// Independent cross-check of the direct lambda sieve path.
cplx liouville_correlation_via_identity(const ArithTable& table,
                                        const std::function<cplx(int64_t)>& F, int64_t N);

struct TypeIStatistic {
    std::map<int64_t, double> by_k;  // k in (K, 2K] -> |E_{N/k < w <= 2N/k} f(kw)|
    std::vector<int64_t> omitted;    // k whose w-range was empty
    bool range_warning = false;      // K outside [1, N^(2/3)]
};

// f[i] is f(i+1); needs indices up to 2N
TypeIStatistic type_I_statistic(std::span<const cplx> f, int64_t N, int64_t K);

// E_{K<k,k'<=2K} |E_{W<=w<2W} f(kw) conj(f(k'w))|^2, the factored form of the
// quadrilinear average; always >= 0.  f needs indices up to 2K(2W-1).
double type_II_statistic(std::span<const cplx> f, int64_t N, int64_t K, int64_t W,
                         bool* range_warning = nullptr);

struct TypeIIReport {
    int64_t N = 0;
    int64_t K = 0;  // Type II anchor K (W = N/K)
    int64_t W = 0;
    std::map<int64_t, double> type1;  // dyadic K-window -> max_k |inner average|
    double type2 = 0.0;
    double max_type1 = 0.0;
    enum class Class { typeI_large, typeII_large, both_small } classification = Class::both_small;
    std::string to_json() const;
};

// Canonical bilinear scan anchored at K = ceil(N^(1/3)): Type I over dyadic
// windows up to that K, Type II at (K, W = N/K).  `threshold` drives the
// large/small classification; raw statistics are always reported.
TypeIIReport vaughan_report(std::span<const cplx> f, int64_t N, double threshold = 0.1);

enum class ArcClass { major_arc, minor_arc };

// A torus sequence is major-arc when the obstructed frequencies span all of
// Z^m (orbit closure finite at this scale), minor-arc otherwise.
ArcClass classify_arcs(const std::vector<TorusPolynomial>& g, int64_t N, int64_t K_max,
                       double threshold);

enum class PrimeOrbitMode { nth_prime, lambda_weighted };

struct PrimeOrbitAverage {
    cplx average{};
    int64_t W = 1;
    std::map<int64_t, cplx> per_residue;  // b (coprime to W) -> weighted average
};

// nth_prime: E_{n<=N} F(p_n).  lambda_weighted: per residue b coprime to
// W = prod_{p<=w} p, (phi(W)/W) E_{n<=N} logp-weight(Wn+b) F(Wn+b), and their
// mean over b.  F_values[i] is F at integer i+1 and must cover the largest
// index touched.
PrimeOrbitAverage prime_orbit_average(const ArithTable& table, std::span<const cplx> F_values,
                                      PrimeOrbitMode mode, int64_t N, int64_t w);

// Lipschitz test functions on [0,1] for bracket correlations
class PsiFunction {
public:
    static PsiFunction exp_circle();    // e(x)
    static PsiFunction centered_tent(); // mean-zero tent
    static PsiFunction smooth_bump();   // mean zero, = 1 on [-1/10, 1/10] mod 1
    static PsiFunction from_table(std::vector<cplx> knots);  // >= 1024 knots, linear interp
    cplx operator()(double x) const;

private:
    std::vector<cplx> knots_;
    bool circle_exp_ = false;
};

// E_{n<=N} weight(n) Psi(bracket value at n) over a ladder, power-mode fit
CorrelationSeries bracket_correlation(const ArithTable& table, dd alpha, dd beta,
                                      const PsiFunction& Psi, std::span<const int64_t> Ns,
                                      Weight weight);

}  // namespace nilcorr
