#pragma once

// Equidistribution diagnostics: normalised Weyl sums, exact 1-d star
// discrepancy, the progression-maximising equidistribution estimate, and
// the abelian obstruction search (small frequency with small smoothness
// norm vs. all Weyl sums small).

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nilcorr/polyseq.hpp"

namespace nilcorr {

using cplx = std::complex<double>;

// (1/N) sum_{n=1..N} e(p(n))
cplx weyl_sum(const TorusPolynomial& p, int64_t N);

// exact star discrepancy of points in [0,1), sorted-points formula
double star_discrepancy(std::vector<double> points);

struct Progression {
    int64_t start = 0;  // first index (1-based position in the value array)
    int64_t step = 0;
    int64_t length = 0;
};

enum class TestFamily { characters, supplied_function };

struct EquidistributionReport {
    double delta_hat = 0.0;  // max over progressions of |E_{n in P} F| / ||F||
    Progression witness;
    int64_t tested_progressions = 0;
    TestFamily test_family = TestFamily::supplied_function;
    bool dyadic_windows = false;  // true when only the dyadic window grid was scanned
    double min_frac = 0.0;
    int64_t Q_max = 0;
    int64_t character_k = 0;  // frequency attaining delta_hat (character family only)
    std::string to_json() const;
};

// Scans progressions of step q <= Q_max and length >= min_frac * N via
// per-residue prefix sums.  Window endpoints are exhaustive for residue
// classes up to `exact_cutoff` elements and on a half-overlapping dyadic
// grid beyond that (witness length then off by at most a factor 2).
// values[i] is F at position i+1.
EquidistributionReport total_equidistribution_estimate(std::span<const cplx> values,
                                                       double F_norm, int64_t Q_max,
                                                       double min_frac,
                                                       int64_t exact_cutoff = 512);

// Same scan with the mean-zero character family e(k x), 1 <= k <= K_max, as
// the tests: the report carries the worst frequency.  points[i] is the orbit
// value x at position i+1, in [0,1).
EquidistributionReport character_family_estimate(std::span<const double> points, int64_t K_max,
                                                 int64_t Q_max, double min_frac,
                                                 int64_t exact_cutoff = 512);

enum class Verdict { equidistributed_at_scale, obstructed };

struct ObstructionCertificate {
    std::vector<int64_t> k;  // frequency vector attaining the decision
    double norm = 0.0;       // smoothness norm of k . g at this N
    Verdict verdict = Verdict::equidistributed_at_scale;
    double max_weyl_abs = 0.0;  // filled in the equidistributed case
    int64_t tested_k = 0;
    std::string to_json() const;
};

// Enumerates 0 < |k|_inf <= K_max.  If some k . g has smoothness norm at
// most `threshold` the sequence is obstructed at that frequency; otherwise
// all Weyl sums are computed and the verdict reports whether every one of
// them stays below `threshold`.
ObstructionCertificate torus_dichotomy(const std::vector<TorusPolynomial>& g, int64_t N,
                                       int64_t K_max, double threshold);

}  // namespace nilcorr
