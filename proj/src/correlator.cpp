#include "nilcorr/correlator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nilcorr/errors.hpp"
#include "nilcorr/heisenberg.hpp"
#include "nilcorr/reduce.hpp"

namespace nilcorr {

// shortest round-trip decimal form, deterministic across runs
std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

namespace {

void check_ladder(std::span<const int64_t> Ns, int64_t limit) {
    if (Ns.empty()) throw std::invalid_argument("correlation: empty ladder");
    for (size_t i = 0; i < Ns.size(); ++i) {
        if (Ns[i] < 1 || (i > 0 && Ns[i] <= Ns[i - 1]))
            throw std::invalid_argument("correlation: ladder must be ascending and positive");
    }
    if (Ns.back() > limit)
        throw std::invalid_argument("correlation: ladder top " + std::to_string(Ns.back()) +
                                    " exceeds available range " + std::to_string(limit));
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    // least squares slope; caller guarantees xs.size() == ys.size()
    const auto n = static_cast<double>(xs.size());
    if (xs.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

}  // namespace

double fit_decay_exponent(std::span<const int64_t> Ns, std::span<const cplx> normalized,
                          FitMode mode) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < Ns.size(); ++i) {
        double a = std::abs(normalized[i]);
        if (a < 1e-12) continue;  // dead rungs carry no decay information
        double x = std::log(static_cast<double>(Ns[i]));
        if (mode == FitMode::log_power) x = std::log(x);
        xs.push_back(x);
        ys.push_back(std::log(a));
    }
    return fit_slope(xs, ys);
}

namespace {

void fit_series(CorrelationSeries& s) {
    s.fitted_exponent = fit_decay_exponent(s.Ns, s.normalized, s.fit_mode);
}

// shared ladder-walk: sums weight(n)*F(n) capturing each rung, deterministic
template <class FValue>
CorrelationSeries ladder_series(const ArithTable& table, FValue&& F,
                                std::span<const int64_t> Ns, Weight weight, FitMode fit,
                                int64_t limit) {
    check_ladder(Ns, limit);
    CorrelationSeries out;
    out.fit_mode = fit;
    out.Ns.assign(Ns.begin(), Ns.end());

    cplx acc{};
    int64_t prev = 1;
    for (int64_t N : Ns) {
        acc += indexed_sum<cplx>(prev, N + 1, [&](int64_t n) {
            double wv = weight == Weight::mobius ? static_cast<double>(table.mu(n))
                                                 : static_cast<double>(table.lambda(n));
            if (wv == 0.0) return cplx{};
            return wv * F(n);
        });
        out.raw.push_back(acc);
        out.normalized.push_back(acc / static_cast<double>(N));
        prev = N + 1;
    }
    fit_series(out);
    return out;
}

}  // namespace

CorrelationSeries weighted_correlation(const ArithTable& table, std::span<const cplx> F_values,
                                       std::span<const int64_t> Ns, Weight weight, FitMode fit) {
    auto limit = std::min<int64_t>(static_cast<int64_t>(F_values.size()), table.hi() - 1);
    return ladder_series(
        table, [&](int64_t n) { return F_values[static_cast<size_t>(n - 1)]; }, Ns, weight, fit,
        limit);
}

CorrelationSeries weighted_correlation_fn(const ArithTable& table,
                                          const std::function<cplx(int64_t)>& F,
                                          std::span<const int64_t> Ns, Weight weight,
                                          FitMode fit) {
    return ladder_series(table, [&](int64_t n) { return F(n); }, Ns, weight, fit,
                         table.hi() - 1);
}

cplx liouville_correlation_via_identity(const ArithTable& table,
                                        const std::function<cplx(int64_t)>& F, int64_t N) {
    if (N < 1) throw std::invalid_argument("liouville identity path: N >= 1 required");
    if (table.lo() > 1 || table.hi() < N + 1)
        throw std::invalid_argument("liouville identity path: table does not cover [1, N]");
    cplx total{};
    for (int64_t r = 1; r * r <= N; ++r) {
        int64_t rr = r * r;
        total += indexed_sum<cplx>(1, N / rr + 1, [&](int64_t m) {
            int8_t mu = table.mu(m);
            if (mu == 0) return cplx{};
            return static_cast<double>(mu) * F(rr * m);
        });
    }
    return total / static_cast<double>(N);
}

TypeIStatistic type_I_statistic(std::span<const cplx> f, int64_t N, int64_t K) {
    if (K < 1 || N < 1) throw std::invalid_argument("type_I_statistic: N, K >= 1 required");
    if (2 * N > static_cast<int64_t>(f.size()))
        throw std::invalid_argument("type_I_statistic: values must cover indices up to 2N");
    TypeIStatistic out;
    out.range_warning =
        static_cast<double>(K) > std::pow(static_cast<double>(N), 2.0 / 3.0) + 1e-9;

    std::vector<std::pair<int64_t, double>> rows(static_cast<size_t>(K), {0, -1.0});
#pragma omp parallel for schedule(dynamic)
    for (int64_t idx = 0; idx < K; ++idx) {
        int64_t k = K + 1 + idx;
        int64_t wlo = N / k + 1;    // w > N/k
        int64_t whi = (2 * N) / k;  // w <= 2N/k
        if (whi < wlo) {
            rows[static_cast<size_t>(idx)] = {k, -1.0};
            continue;
        }
        cplx s{};
        for (int64_t w = wlo; w <= whi; ++w) s += f[static_cast<size_t>(k * w - 1)];
        double avg = std::abs(s) / static_cast<double>(whi - wlo + 1);
        rows[static_cast<size_t>(idx)] = {k, avg};
    }
    for (auto& [k, v] : rows) {
        if (v < 0.0)
            out.omitted.push_back(k);
        else
            out.by_k[k] = v;
    }
    return out;
}

double type_II_statistic(std::span<const cplx> f, int64_t N, int64_t K, int64_t W,
                         bool* range_warning) {
    if (K < 1 || W < 1 || N < 1)
        throw std::invalid_argument("type_II_statistic: N, K, W >= 1 required");
    int64_t top = 2 * K * (2 * W - 1);
    if (top > static_cast<int64_t>(f.size()))
        throw std::invalid_argument("type_II_statistic: values must cover indices up to " +
                                    std::to_string(top));
    if (range_warning) {
        double n13 = std::pow(static_cast<double>(N), 1.0 / 3.0);
        double n23 = std::pow(static_cast<double>(N), 2.0 / 3.0);
        double kw = static_cast<double>(K) * static_cast<double>(W);
        *range_warning = !(0.5 * n13 <= K + 1e-9 && K <= 4.0 * n23 + 1e-9 &&
                           static_cast<double>(N) / 4.0 <= kw + 1e-9 &&
                           kw <= 4.0 * static_cast<double>(N) + 1e-9);
    }

    // E_{k,k'} |E_w f(kw) conj(f(k'w))|^2, one O(W) pass per ordered pair
    double total = blocked_reduce<double>(0, K * K, [&](int64_t lo, int64_t hi) {
        double part = 0.0;
        for (int64_t pair = lo; pair < hi; ++pair) {
            int64_t k = K + 1 + pair / K;
            int64_t kp = K + 1 + pair % K;
            cplx s{};
            for (int64_t w = W; w < 2 * W; ++w)
                s += f[static_cast<size_t>(k * w - 1)] *
                     std::conj(f[static_cast<size_t>(kp * w - 1)]);
            double a = std::abs(s) / static_cast<double>(W);
            part += a * a;
        }
        return part;
    });
    return total / (static_cast<double>(K) * static_cast<double>(K));
}

TypeIIReport vaughan_report(std::span<const cplx> f, int64_t N, double threshold) {
    TypeIIReport rep;
    rep.N = N;
    rep.K = static_cast<int64_t>(std::ceil(std::cbrt(static_cast<double>(N))));
    rep.W = N / rep.K;

    double frac_large_somewhere = 0.0;
    for (int64_t K = 1; K <= rep.K; K *= 2) {
        auto t1 = type_I_statistic(f, N, K);
        double mx = 0.0;
        int64_t nlarge = 0;
        for (const auto& [k, v] : t1.by_k) {
            mx = std::max(mx, v);
            if (v >= threshold) ++nlarge;
        }
        rep.type1[K] = mx;
        rep.max_type1 = std::max(rep.max_type1, mx);
        frac_large_somewhere = std::max(
            frac_large_somewhere, static_cast<double>(nlarge) / static_cast<double>(K));
    }
    rep.type2 = type_II_statistic(f, N, rep.K, rep.W);

    // the Type I event needs a positive fraction of large k, not one spike
    if (frac_large_somewhere >= threshold)
        rep.classification = TypeIIReport::Class::typeI_large;
    else if (rep.type2 >= threshold)
        rep.classification = TypeIIReport::Class::typeII_large;
    else
        rep.classification = TypeIIReport::Class::both_small;
    return rep;
}

std::string TypeIIReport::to_json() const {
    nlohmann::json j;
    j["N"] = N;
    j["K"] = K;
    j["W"] = W;
    nlohmann::json t1 = nlohmann::json::object();
    for (const auto& [k, v] : type1) t1[std::to_string(k)] = v;
    j["type1_max_by_window"] = t1;
    j["max_type1"] = max_type1;
    j["type2"] = type2;
    switch (classification) {
        case Class::typeI_large: j["classification"] = "typeI-large"; break;
        case Class::typeII_large: j["classification"] = "typeII-large"; break;
        case Class::both_small: j["classification"] = "both-small"; break;
    }
    return j.dump();
}

ArcClass classify_arcs(const std::vector<TorusPolynomial>& g, int64_t N, int64_t K_max,
                       double threshold) {
    if (g.empty()) throw std::invalid_argument("classify_arcs: empty sequence");
    const auto m = g.size();
    // collect all obstructed frequencies and check whether they span Z^m
    std::vector<std::vector<double>> basis;
    std::vector<int64_t> k(m, -K_max);
    while (true) {
        bool zero = std::all_of(k.begin(), k.end(), [](int64_t v) { return v == 0; });
        if (!zero) {
            std::size_t deg1 = 0;
            for (const auto& p : g) deg1 = std::max(deg1, p.alpha().size());
            std::vector<double> comb(deg1, 0.0);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < g[i].alpha().size(); ++j)
                    comb[j] = frac(comb[j] +
                                   frac_mul_i128(g[i].alpha()[j], static_cast<__int128>(k[i])));
            double nrm = smoothness_norm(TorusPolynomial::from_binomial(comb), N).value;
            if (nrm <= threshold) {
                // Gaussian elimination over the reals on the obstructed set
                std::vector<double> v(k.begin(), k.end());
                for (const auto& b : basis) {
                    // eliminate with the pivot of b
                    size_t p = 0;
                    while (p < m && std::abs(b[p]) < 1e-12) ++p;
                    if (p == m) continue;
                    double c = v[p] / b[p];
                    for (size_t t = 0; t < m; ++t) v[t] -= c * b[t];
                }
                if (std::any_of(v.begin(), v.end(), [](double x) { return std::abs(x) > 1e-9; }))
                    basis.push_back(v);
                if (basis.size() == m) return ArcClass::major_arc;
            }
        }
        std::size_t i = 0;
        while (i < m && k[i] == K_max) k[i++] = -K_max;
        if (i == m) break;
        ++k[i];
    }
    return basis.size() == m ? ArcClass::major_arc : ArcClass::minor_arc;
}

PrimeOrbitAverage prime_orbit_average(const ArithTable& table, std::span<const cplx> F_values,
                                      PrimeOrbitMode mode, int64_t N, int64_t w) {
    PrimeOrbitAverage out;
    if (N < 1) throw std::invalid_argument("prime_orbit_average: N >= 1 required");

    if (mode == PrimeOrbitMode::nth_prime) {
        // average F over the first N primes
        int64_t count = 0;
        cplx acc{};
        for (int64_t n = table.lo() < 2 ? 2 : table.lo(); n < table.hi() && count < N; ++n) {
            if (!table.is_prime(n)) continue;
            if (n > static_cast<int64_t>(F_values.size()))
                throw resource_error("prime_orbit_average: F_values shorter than p_" +
                                     std::to_string(count + 1));
            acc += F_values[static_cast<size_t>(n - 1)];
            ++count;
        }
        if (count < N)
            throw resource_error("prime_orbit_average: table holds only " +
                                 std::to_string(count) + " primes, need " + std::to_string(N));
        out.average = acc / static_cast<double>(N);
        return out;
    }

    // lambda_weighted: W-trick averages per residue class, W = prod_{p<=w} p
    int64_t W = 1;
    double phi_over_W = 1.0;
    for (int64_t p = 2; p <= w; ++p) {
        bool prime = true;
        for (int64_t d = 2; d * d <= p; ++d)
            if (p % d == 0) { prime = false; break; }
        if (!prime) continue;
        if (W > 1'000'000 / p)
            throw resource_error("prime_orbit_average: W exceeds 1e6 at w = " + std::to_string(w));
        W *= p;
        phi_over_W *= 1.0 - 1.0 / static_cast<double>(p);
    }
    out.W = W;

    int64_t top = W * N + (W - 1);
    if (top > static_cast<int64_t>(F_values.size()) || top >= table.hi())
        throw resource_error("prime_orbit_average: need values and sieve up to " +
                             std::to_string(top));

    cplx acc{};
    int64_t classes = 0;
    for (int64_t b = 0; b < W; ++b) {
        if (std::gcd(b, W) != 1) continue;
        cplx s = indexed_sum<cplx>(1, N + 1, [&](int64_t n) {
            int64_t idx = W * n + b;
            double lp = table.lambda_prime(idx);
            if (lp == 0.0) return cplx{};
            return lp * F_values[static_cast<size_t>(idx - 1)];
        });
        cplx avg = phi_over_W * s / static_cast<double>(N);
        out.per_residue[b] = avg;
        acc += avg;
        ++classes;
    }
    out.average = acc / static_cast<double>(classes);
    return out;
}

PsiFunction PsiFunction::exp_circle() {
    PsiFunction p;
    p.circle_exp_ = true;
    return p;
}

PsiFunction PsiFunction::centered_tent() {
    // T(x) = 1 - 4|x - 1/2|: peak 1 at the centre, -1 at the ends, mean zero
    std::vector<cplx> knots(2048);
    for (size_t i = 0; i < knots.size(); ++i) {
        double x = static_cast<double>(i) / static_cast<double>(knots.size() - 1);
        knots[i] = 1.0 - 4.0 * std::abs(x - 0.5);
    }
    PsiFunction p;
    p.knots_ = std::move(knots);
    return p;
}

PsiFunction PsiFunction::smooth_bump() {
    // mean-zero plateau function on R/Z: 1 on |x| <= 1/10, linear down to -1
    // at |x| = 2/5, -1 on [2/5, 1/2]; mean over the circle is zero
    std::vector<cplx> knots(4096);
    for (size_t i = 0; i < knots.size(); ++i) {
        double x = static_cast<double>(i) / static_cast<double>(knots.size() - 1);
        double d = x <= 0.5 ? x : 1.0 - x;  // distance to 0 on the circle
        double v;
        if (d <= 0.1) v = 1.0;
        else if (d <= 0.4) v = 1.0 - 2.0 * (d - 0.1) / 0.3;
        else v = -1.0;
        knots[i] = v;
    }
    PsiFunction p;
    p.knots_ = std::move(knots);
    return p;
}

PsiFunction PsiFunction::from_table(std::vector<cplx> knots) {
    if (knots.size() < 1024)
        throw std::invalid_argument("PsiFunction: sampled table needs at least 1024 knots");
    PsiFunction p;
    p.knots_ = std::move(knots);
    return p;
}

cplx PsiFunction::operator()(double x) const {
    if (circle_exp_) {
        double t = 2.0 * std::numbers::pi * x;
        return {std::cos(t), std::sin(t)};
    }
    const auto n = knots_.size();
    double pos = x * static_cast<double>(n - 1);
    auto i = static_cast<size_t>(pos);
    if (i >= n - 1) return knots_.back();
    double t = pos - static_cast<double>(i);
    return knots_[i] * (1.0 - t) + knots_[i + 1] * t;
}

CorrelationSeries bracket_correlation(const ArithTable& table, dd alpha, dd beta,
                                      const PsiFunction& Psi, std::span<const int64_t> Ns,
                                      Weight weight) {
    return ladder_series(
        table, [&](int64_t n) { return Psi(bracket_value(alpha, beta, n)); }, Ns, weight,
        FitMode::power, table.hi() - 1);
}

std::string CorrelationSeries::to_csv() const {
    std::ostringstream os;
    os << "N,re,im,abs\n";
    for (size_t i = 0; i < Ns.size(); ++i) {
        os << Ns[i] << ',' << format_double(normalized[i].real()) << ','
           << format_double(normalized[i].imag()) << ','
           << format_double(std::abs(normalized[i])) << '\n';
    }
    os << "fitted_exponent," << format_double(fitted_exponent) << ",,\n";
    return os.str();
}

std::string CorrelationSeries::to_json(const std::string& label) const {
    nlohmann::json j;
    j["label"] = label;
    j["fit_mode"] = fit_mode == FitMode::power ? "power" : "log-power";
    j["fitted_exponent"] = fitted_exponent;
    nlohmann::json rows = nlohmann::json::array();
    for (size_t i = 0; i < Ns.size(); ++i) {
        rows.push_back({{"N", Ns[i]},
                        {"raw_re", raw[i].real()},
                        {"raw_im", raw[i].imag()},
                        {"re", normalized[i].real()},
                        {"im", normalized[i].imag()},
                        {"abs", std::abs(normalized[i])}});
    }
    j["series"] = rows;
    return j.dump(2);
}

}  // namespace nilcorr
