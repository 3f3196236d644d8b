#include "nilcorr/polyseq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "nilcorr/dd.hpp"
#include "nilcorr/errors.hpp"

namespace nilcorr {

namespace {

constexpr int kMaxDegree = 12;

// signed Stirling numbers of the first kind: x(x-1)...(x-j+1) = sum_k s(j,k) x^k
int64_t stirling1(int j, int k) {
    static const auto table = [] {
        std::vector<std::vector<int64_t>> s(kMaxDegree + 1,
                                            std::vector<int64_t>(kMaxDegree + 1, 0));
        s[0][0] = 1;
        for (int n = 0; n < kMaxDegree; ++n)
            for (int m = 0; m <= n; ++m) {
                if (s[n][m] == 0 && m != 0) continue;
                s[n + 1][m + 1] += s[n][m];
                s[n + 1][m] -= n * s[n][m];
            }
        return s;
    }();
    return table[static_cast<size_t>(j)][static_cast<size_t>(k)];
}

// Stirling numbers of the second kind
int64_t stirling2(int n, int k) {
    static const auto table = [] {
        std::vector<std::vector<int64_t>> s(kMaxDegree + 1,
                                            std::vector<int64_t>(kMaxDegree + 1, 0));
        s[0][0] = 1;
        for (int m = 0; m < kMaxDegree; ++m)
            for (int j = 0; j <= m; ++j) {
                if (s[m][j] == 0 && j != 0) continue;
                s[m + 1][j + 1] += s[m][j];
                s[m + 1][j] += j * s[m][j];
            }
        return s;
    }();
    return table[static_cast<size_t>(n)][static_cast<size_t>(k)];
}

int64_t factorial(int n) {
    int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void check_degree(size_t len) {
    if (len == 0) throw std::invalid_argument("TorusPolynomial: empty coefficient list");
    if (len > kMaxDegree + 1)
        throw std::invalid_argument("TorusPolynomial: degree above " +
                                    std::to_string(kMaxDegree) + " not supported");
}

// C(n,j) as a signed 128-bit integer; throws when it cannot fit
__int128 binom_i128(int64_t n, int j) {
    if (j == 0) return 1;
    bool neg = false;
    unsigned __int128 acc = 1;
    // C(n,j) for n < 0 via C(n,j) = (-1)^j C(j-1-n, j)
    uint64_t m;
    if (n >= 0) {
        if (n < j) return 0;
        m = static_cast<uint64_t>(n);
    } else {
        neg = (j % 2) != 0;
        m = static_cast<uint64_t>(j - 1 - n);
    }
    constexpr unsigned __int128 kLimit = (~static_cast<unsigned __int128>(0)) >> 1;
    for (int i = 1; i <= j; ++i) {
        // exact at each step: acc = C(m - ?, i) pattern acc*(m-i+1)/i
        unsigned __int128 factor = m - static_cast<uint64_t>(i) + 1;
        if (factor != 0 && acc > kLimit / factor)
            throw resource_error("binomial coefficient exceeds 128 bits");
        acc = acc * factor / static_cast<unsigned>(i);
    }
    auto v = static_cast<__int128>(acc);
    return neg ? -v : v;
}

// n^k exact in 128 bits
__int128 pow_i128(int64_t n, int k) {
    __int128 acc = 1;
    constexpr __int128 kLimit = (~static_cast<unsigned __int128>(0)) >> 2;
    for (int i = 0; i < k; ++i) {
        if (acc > kLimit / (n > 0 ? n : -n + 1) && n != 0)
            throw resource_error("power exceeds 128 bits");
        acc *= n;
    }
    return acc;
}

// {r * K} for rational r and integer K, exact:  (num*(K mod den)) mod den / den
double frac_rational_times(const Rational& r, __int128 K) {
    int64_t den = r.den();
    __int128 km = K % den;
    __int128 v = (static_cast<__int128>(r.num()) % den) * km % den;
    if (v < 0) v += den;
    return static_cast<double>(static_cast<int64_t>(v)) / static_cast<double>(den);
}

}  // namespace

TorusPolynomial TorusPolynomial::from_binomial(std::vector<double> alpha) {
    check_degree(alpha.size());
    TorusPolynomial p;
    for (double& a : alpha) a = frac(a);
    p.alpha_ = std::move(alpha);
    return p;
}

TorusPolynomial TorusPolynomial::from_binomial_exact(std::vector<Rational> alpha) {
    check_degree(alpha.size());
    TorusPolynomial p;
    p.alpha_.reserve(alpha.size());
    // exact coefficients stay as given: the coefficient lemmas are statements
    // about real representatives; only the float shadow is reduced into [0,1)
    for (const auto& a : alpha) p.alpha_.push_back(frac(a.frac().to_double()));
    p.exact_ = std::move(alpha);
    return p;
}

TorusPolynomial TorusPolynomial::from_monomial(const std::vector<double>& beta) {
    check_degree(beta.size());
    int d = static_cast<int>(beta.size()) - 1;
    std::vector<double> alpha(beta.size(), 0.0);
    // n^k = sum_j S(k,j) j! C(n,j)
    for (int j = 0; j <= d; ++j) {
        double a = 0.0;
        for (int k = j; k <= d; ++k)
            a += beta[static_cast<size_t>(k)] *
                 static_cast<double>(stirling2(k, j) * factorial(j));
        alpha[static_cast<size_t>(j)] = frac(a);
    }
    return from_binomial(std::move(alpha));
}

TorusPolynomial TorusPolynomial::from_monomial_exact(const std::vector<Rational>& beta) {
    return monomial_to_binomial(beta);
}

TorusPolynomial TorusPolynomial::linear(double theta) {
    return from_binomial({0.0, theta});
}

const std::vector<Rational>& TorusPolynomial::exact_alpha() const {
    if (!exact_) throw std::invalid_argument("TorusPolynomial: no exact coefficients stored");
    return *exact_;
}

double TorusPolynomial::eval_frac(int64_t n) const {
    if (exact_) {
        // sum the exact fractional parts, then reduce once
        double acc = 0.0;
        for (size_t j = 0; j < exact_->size(); ++j) {
            acc += frac_rational_times((*exact_)[j], binom_i128(n, static_cast<int>(j)));
            if (acc >= 1.0) acc -= 1.0;
        }
        return frac(acc);
    }
    double acc = 0.0;
    for (size_t j = 0; j < alpha_.size(); ++j) {
        acc += frac_mul_i128(alpha_[j], binom_i128(n, static_cast<int>(j)));
        if (acc >= 1.0) acc -= 1.0;
    }
    return frac(acc);
}

std::string TorusPolynomial::to_json() const {
    nlohmann::json j;
    if (exact_) {
        std::vector<int64_t> num, den;
        for (const auto& a : *exact_) {
            num.push_back(a.num());
            den.push_back(a.den());
        }
        j["alpha_num"] = num;
        j["alpha_den"] = den;
    } else {
        j["alpha_real"] = alpha_;
    }
    return j.dump();
}

TorusPolynomial TorusPolynomial::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.contains("alpha_num")) {
        auto num = j["alpha_num"].get<std::vector<int64_t>>();
        auto den = j["alpha_den"].get<std::vector<int64_t>>();
        if (num.size() != den.size())
            throw std::invalid_argument("TorusPolynomial: alpha_num/alpha_den length mismatch");
        std::vector<Rational> alpha;
        alpha.reserve(num.size());
        for (size_t i = 0; i < num.size(); ++i) alpha.emplace_back(num[i], den[i]);
        return from_binomial_exact(std::move(alpha));
    }
    return from_binomial(j["alpha_real"].get<std::vector<double>>());
}

SmoothnessNorm smoothness_norm(const TorusPolynomial& p, int64_t N) {
    if (N < 1) throw std::invalid_argument("smoothness_norm: N >= 1 required");
    SmoothnessNorm r;
    r.N = N;
    double npow = 1.0;
    for (int j = 1; j <= p.degree(); ++j) {
        npow *= static_cast<double>(N);
        double v = npow * circle_dist(p.alpha()[static_cast<size_t>(j)]);
        if (v > r.value) {
            r.value = v;
            r.argmax_j = j;
        } else if (r.argmax_j == 0) {
            r.argmax_j = j;  // first j wins ties at zero
        }
    }
    if (p.degree() == 0) r.argmax_j = 0;
    return r;
}

MonomialForm binomial_to_monomial(const TorusPolynomial& p) {
    if (!p.is_exact())
        throw std::invalid_argument("binomial_to_monomial: exact coefficients required");
    const auto& alpha = p.exact_alpha();
    int d = static_cast<int>(alpha.size()) - 1;
    MonomialForm out;
    out.beta.assign(alpha.size(), Rational(0));
    // beta_k = sum_{j>=k} alpha_j s(j,k)/j!
    for (int k = 0; k <= d; ++k)
        for (int j = std::max(k, 1); j <= d; ++j)
            out.beta[static_cast<size_t>(k)] =
                out.beta[static_cast<size_t>(k)] +
                alpha[static_cast<size_t>(j)] * Rational(stirling1(j, k), factorial(j));
    out.beta[0] = out.beta[0] + alpha[0];
    // least q clearing s(j,k)/j! over the support of alpha
    int64_t q = 1;
    for (int j = 1; j <= d; ++j) {
        if (alpha[static_cast<size_t>(j)].num() == 0) continue;
        for (int k = 1; k <= j; ++k) {
            Rational c(stirling1(j, k), factorial(j));
            q = lcm_i64(q, c.den());
        }
    }
    out.q = q;
    return out;
}

TorusPolynomial monomial_to_binomial(const std::vector<Rational>& beta) {
    check_degree(beta.size());
    int d = static_cast<int>(beta.size()) - 1;
    std::vector<Rational> alpha(beta.size(), Rational(0));
    for (int j = 0; j <= d; ++j)
        for (int k = j; k <= d; ++k)
            alpha[static_cast<size_t>(j)] =
                alpha[static_cast<size_t>(j)] +
                beta[static_cast<size_t>(k)] * Rational(stirling2(k, j) * factorial(j));
    return TorusPolynomial::from_binomial_exact(std::move(alpha));
}

double coefficient_clearing_constant(int degree) {
    int64_t q = coefficient_clearing_q(degree);
    double best = 0.0;
    for (int k = 1; k <= degree; ++k) {
        double col = 0.0;
        for (int j = k; j <= degree; ++j) {
            Rational c = Rational(q) * Rational(stirling1(j, k), factorial(j));
            col += std::abs(c.to_double());
        }
        best = std::max(best, col);
    }
    return std::max(best, 1.0);
}

int64_t coefficient_clearing_q(int degree) {
    int64_t q = 1;
    for (int j = 1; j <= degree; ++j)
        for (int k = 1; k <= j; ++k)
            q = lcm_i64(q, Rational(stirling1(j, k), factorial(j)).den());
    return q;
}

std::optional<RecurrenceHit> strong_recurrence_finder(double alpha, int64_t N, double sigma,
                                                      double mu_len, double interval_lo,
                                                      int64_t k_max, double c0) {
    if (N < 1 || k_max < 1)
        throw std::invalid_argument("strong_recurrence_finder: N and k_max must be positive");
    if (!(sigma > 0.0 && sigma < 0.5))
        throw std::invalid_argument("strong_recurrence_finder: sigma must lie in (0, 1/2)");
    if (mu_len > sigma / 2 + 1e-15)
        throw std::invalid_argument("strong_recurrence_finder: interval length " +
                                    std::to_string(mu_len) + " exceeds sigma/2");

    // measure the recurrence density {alpha n} in [lo, lo+mu_len) mod 1
    double lo = frac(interval_lo);
    int64_t hits = 0;
    for (int64_t n = 1; n <= N; ++n) {
        double u = dd_frac_double(dd_prod(alpha, static_cast<double>(n)));
        double rel = u - lo;
        if (rel < 0.0) rel += 1.0;
        if (rel < mu_len) ++hits;
    }
    double density = static_cast<double>(hits) / static_cast<double>(N);
    if (density + 1e-12 < sigma)
        throw std::invalid_argument(
            "strong_recurrence_finder: measured density " + std::to_string(density) +
            " is below sigma = " + std::to_string(sigma));

    RecurrenceHit best{0, 2.0};
    for (int64_t k = 1; k <= k_max; ++k) {
        double nrm = circle_dist(dd_frac_double(dd_prod(alpha, static_cast<double>(k))));
        if (nrm < best.knorm) best = {k, nrm};
    }
    double accept = mu_len * std::pow(static_cast<double>(k_max), c0) / static_cast<double>(N);
    if (best.knorm <= accept) return best;
    return std::nullopt;
}

WaringCount waring_representation_count(const std::vector<int64_t>& S, int j, int t) {
    if (S.empty()) throw std::invalid_argument("waring_representation_count: S is empty");
    if (j < 1 || t < 1)
        throw std::invalid_argument("waring_representation_count: j, t must be >= 1");
    int64_t K = *std::max_element(S.begin(), S.end());
    int64_t Kmin = *std::min_element(S.begin(), S.end());
    if (Kmin < 1) throw std::invalid_argument("waring_representation_count: S must be in [1, K]");

    __int128 buckets128 = static_cast<__int128>(t) * pow_i128(K, j) + 1;
    if (buckets128 > 100'000'001)
        throw resource_error("waring_representation_count: needs " +
                             std::to_string(static_cast<double>(buckets128)) +
                             " buckets, above the 1e8 cap");
    auto buckets = static_cast<int64_t>(buckets128);

    WaringCount out;
    out.range_warning = t < (int64_t(1) << j) + 1;

    std::vector<int64_t> powers;
    powers.reserve(S.size());
    for (int64_t k : S) powers.push_back(static_cast<int64_t>(pow_i128(k, j)));

    std::vector<uint64_t> cur(static_cast<size_t>(buckets), 0), next;
    cur[0] = 1;
    int64_t reach = 0;  // highest occupied index
    for (int round = 0; round < t; ++round) {
        next.assign(static_cast<size_t>(buckets), 0);
        for (int64_t n = 0; n <= reach; ++n) {
            uint64_t c = cur[static_cast<size_t>(n)];
            if (c == 0) continue;
            for (int64_t pw : powers) next[static_cast<size_t>(n + pw)] += c;
        }
        reach += static_cast<int64_t>(pow_i128(K, j));
        cur.swap(next);
    }

    for (int64_t n = 1; n < buckets; ++n) {
        uint64_t r = cur[static_cast<size_t>(n)];
        if (r == 0) continue;
        ++out.representable_count;
        ++out.histogram[r];
    }
    return out;
}

}  // namespace nilcorr
