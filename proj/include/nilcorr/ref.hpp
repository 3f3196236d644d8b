#pragma once

// Serial reference implementations.
//
// Each routine here recomputes a quantity the optimised kernels produce, by
// the most literal method available: trial division instead of the
// segmented sieve, direct Kahan summation instead of blocked reduction,
// the quadrilinear four-index loop instead of the factored bilinear form,
// and the full O(N^2) progression scan.  They exist to pin the fast paths
// down in tests and to serve as the baseline in the benchmark; nothing in
// the library proper calls them.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "nilcorr/equidist.hpp"
#include "nilcorr/polyseq.hpp"

namespace nilcorr::ref {

using cplx = std::complex<double>;

// mu(n) by trial division
int mobius_naive(int64_t n);

// mu(1..N) and Mertens by factoring every n independently
std::vector<int8_t> mobius_table_naive(int64_t N);
int64_t mertens_naive(int64_t N);

// lambda(n) by full factorisation
int lambda_naive(int64_t n);

// Kahan-compensated direct Weyl sum
cplx weyl_sum_direct(const TorusPolynomial& p, int64_t N);

// literal inner average of the Type I statistic at one k
double type_I_direct(std::span<const cplx> f, int64_t N, int64_t k);

// literal four-index quadrilinear average, O(K^2 W^2)
double type_II_quadrilinear(std::span<const cplx> f, int64_t K, int64_t W);

// every progression with step <= Q_max and length >= min_frac*N
EquidistributionReport progression_scan_exhaustive(std::span<const cplx> values, double F_norm,
                                                   int64_t Q_max, double min_frac);

// distinct values of k_1^j + ... + k_t^j by enumerating all |S|^t tuples
int64_t waring_count_brute(const std::vector<int64_t>& S, int j, int t);

// plain left-to-right sum, the serial baseline for the benchmark
template <class T, class Fn>
T sum_serial(int64_t lo, int64_t hi, Fn&& f) {
    T acc{};
    for (int64_t n = lo; n < hi; ++n) acc = acc + f(n);
    return acc;
}

}  // namespace nilcorr::ref
