#pragma once

// Polynomials into R/Z held in binomial-coefficient form
//   p(n) = a0 + a1*C(n,1) + ... + ad*C(n,d)   (mod 1),
// the smoothness norm sup_j N^j ||a_j||, exact conversion to and from the
// monomial basis, and two counting lemmas used by the bilinear-sum analysis.
//
// Stored double coefficients are treated as the exact dyadic rationals they
// are; evaluation reduces a_j * C(n,j) mod 1 in integer arithmetic, so
// {p(n)} is exact (up to one final rounding) wherever C(|n|,j) fits 128 bits.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nilcorr/rational.hpp"

namespace nilcorr {

class TorusPolynomial {
public:
    // binomial coefficients a_0..a_d; reduced into [0,1) on construction
    static TorusPolynomial from_binomial(std::vector<double> alpha);
    static TorusPolynomial from_binomial_exact(std::vector<Rational> alpha);
    // monomial coefficients b_0..b_d, converted through the exact basis matrix
    static TorusPolynomial from_monomial(const std::vector<double>& beta);
    static TorusPolynomial from_monomial_exact(const std::vector<Rational>& beta);
    // convenience: p(n) = theta * n
    static TorusPolynomial linear(double theta);

    int degree() const { return static_cast<int>(alpha_.size()) - 1; }
    const std::vector<double>& alpha() const { return alpha_; }
    bool is_exact() const { return exact_.has_value(); }
    const std::vector<Rational>& exact_alpha() const;

    // {p(n)}; exact-rational path when available, dyadic-integer path else
    double eval_frac(int64_t n) const;

    std::string to_json() const;
    static TorusPolynomial from_json(const std::string& text);

private:
    std::vector<double> alpha_;
    std::optional<std::vector<Rational>> exact_;
};

struct SmoothnessNorm {
    double value = 0.0;
    int64_t N = 0;
    int argmax_j = 0;  // 0 when the polynomial is constant
};

// sup over 1 <= j <= d of N^j * ||a_j||_{R/Z}; a_0 never contributes
SmoothnessNorm smoothness_norm(const TorusPolynomial& p, int64_t N);

struct MonomialForm {
    std::vector<Rational> beta;  // p(n) = sum beta_j n^j, exact
    int64_t q = 1;               // clears the conversion denominators on supp(alpha)
};

// Exact-input only.  q is the least integer such that q * s(i,j)/i! is an
// integer for every i with a_i != 0; it divides lcm(1..d) * d!.
MonomialForm binomial_to_monomial(const TorusPolynomial& p);

// inverse conversion, exact
TorusPolynomial monomial_to_binomial(const std::vector<Rational>& beta);

// The constant C(d) with ||q beta_j|| <= C(d) N^-j ||p||_{C^inf[N]} for the
// full denominator-clearing q, read off the conversion matrix itself.
double coefficient_clearing_constant(int degree);
// full clearing denominator of the conversion matrix at this degree
int64_t coefficient_clearing_q(int degree);

struct RecurrenceHit {
    int64_t k = 0;
    double knorm = 0.0;  // ||k*alpha||_{R/Z}
};

// Searches 0 < k <= k_max for the k minimising ||k*alpha||, given that
// {alpha n} visits `interval` (of length mu_len) for at least sigma*N of the
// n in [N].  The density precondition is measured and enforced.  Returns
// nothing if even the best k misses ||k alpha|| <= mu_len * k_max^c0 / N.
std::optional<RecurrenceHit> strong_recurrence_finder(double alpha, int64_t N, double sigma,
                                                      double mu_len, double interval_lo,
                                                      int64_t k_max, double c0 = 3.0);

struct WaringCount {
    int64_t representable_count = 0;        // distinct n in [t*K^j] with r(n) > 0
    std::map<uint64_t, uint64_t> histogram;  // r -> #{n : r(n) = r}, r >= 1
    bool range_warning = false;              // t < 2^j + 1
};

// Counts integers representable as k_1^j + ... + k_t^j with k_i in S.
WaringCount waring_representation_count(const std::vector<int64_t>& S, int j, int t);

}  // namespace nilcorr
