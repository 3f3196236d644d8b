#include "nilcorr/equidist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "nilcorr/dd.hpp"
#include "nilcorr/reduce.hpp"

namespace nilcorr {

namespace {

cplx e_of(double frac01) {
    double t = 2.0 * std::numbers::pi * frac01;
    return {std::cos(t), std::sin(t)};
}

}  // namespace

cplx weyl_sum(const TorusPolynomial& p, int64_t N) {
    if (N < 1) throw std::invalid_argument("weyl_sum: N >= 1 required");
    cplx s = indexed_sum<cplx>(1, N + 1, [&](int64_t n) { return e_of(p.eval_frac(n)); });
    s /= static_cast<double>(N);
    if (std::abs(s) > 1.0) s /= std::abs(s);  // trim rounding past the unit disc
    return s;
}

double star_discrepancy(std::vector<double> points) {
    if (points.empty()) throw std::invalid_argument("star_discrepancy: empty point set");
    std::sort(points.begin(), points.end());
    const auto N = static_cast<double>(points.size());
    double d = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double u = points[i];
        double up = static_cast<double>(i + 1) / N - u;
        double dn = u - static_cast<double>(i) / N;
        d = std::max(d, std::max(up, dn));
    }
    return d;
}

namespace {

// candidate windows [a, b) over a residue class of length len
struct WindowScan {
    int64_t min_len;
    int64_t len;
    bool dyadic;

    template <class Fn>
    void for_each(Fn&& fn) const {
        if (!dyadic) {
            for (int64_t a = 0; a < len; ++a)
                for (int64_t b = a + min_len; b <= len; ++b) fn(a, b);
            return;
        }
        // half-overlapping dyadic windows: length 2^j, starts at multiples
        // of 2^(j-1); any window shares >= half its length with one of these
        for (int64_t w = 1; w <= len; w *= 2) {
            if (w < min_len) continue;
            int64_t stride = std::max<int64_t>(1, w / 2);
            for (int64_t a = 0; a + w <= len; a += stride) fn(a, a + w);
            if ((len - w) % stride != 0) fn(len - w, len);  // right-aligned tail
        }
        if (min_len <= len) fn(int64_t{0}, len);  // the full class
    }
};

}  // namespace

EquidistributionReport total_equidistribution_estimate(std::span<const cplx> values,
                                                       double F_norm, int64_t Q_max,
                                                       double min_frac, int64_t exact_cutoff) {
    if (values.empty())
        throw std::invalid_argument("total_equidistribution_estimate: empty value array");
    if (Q_max < 1)
        throw std::invalid_argument("total_equidistribution_estimate: Q_max >= 1 required");
    if (!(min_frac > 0.0 && min_frac <= 1.0))
        throw std::invalid_argument("total_equidistribution_estimate: min_frac in (0,1]");
    if (!(F_norm > 0.0))
        throw std::invalid_argument("total_equidistribution_estimate: F_norm must be positive");

    const auto N = static_cast<int64_t>(values.size());
    EquidistributionReport rep;
    rep.min_frac = min_frac;
    rep.Q_max = Q_max;

    struct Best {
        double delta = -1.0;
        Progression wit;
        int64_t tested = 0;
        bool dyadic = false;
    };

    // one task per (q, residue) class; deterministic combination afterwards
    std::vector<std::pair<int64_t, int64_t>> classes;
    for (int64_t q = 1; q <= Q_max; ++q)
        for (int64_t r = 0; r < q; ++r) classes.emplace_back(q, r);

    std::vector<Best> results(classes.size());

#pragma omp parallel
    {
        std::vector<cplx> prefix;
#pragma omp for schedule(dynamic)
        for (std::size_t ci = 0; ci < classes.size(); ++ci) {
            auto [q, r] = classes[ci];
            // positions r+1, r+1+q, ... (1-based); values index = pos-1
            int64_t len = (N - 1 - r) / q + (r < N ? 1 : 0);
            if (r >= N || len <= 0) continue;
            prefix.assign(static_cast<std::size_t>(len) + 1, cplx{});
            for (int64_t i = 0; i < len; ++i)
                prefix[static_cast<std::size_t>(i) + 1] =
                    prefix[static_cast<std::size_t>(i)] + values[static_cast<std::size_t>(r + i * q)];

            // progressions of absolute length at least min_frac * N
            auto min_len = static_cast<int64_t>(std::ceil(min_frac * static_cast<double>(N)));
            min_len = std::max<int64_t>(min_len, 1);
            if (min_len > len) continue;

            Best best;
            best.dyadic = len > exact_cutoff;
            WindowScan scan{min_len, len, best.dyadic};
            scan.for_each([&](int64_t a, int64_t b) {
                ++best.tested;
                cplx s = prefix[static_cast<std::size_t>(b)] - prefix[static_cast<std::size_t>(a)];
                double d = std::abs(s) / (static_cast<double>(b - a) * F_norm);
                if (d > best.delta) {
                    best.delta = d;
                    best.wit = {r + 1 + a * q, q, b - a};
                }
            });
            results[ci] = best;
        }
    }

    for (const auto& b : results) {
        rep.tested_progressions += b.tested;
        rep.dyadic_windows = rep.dyadic_windows || b.dyadic;
        if (b.delta > rep.delta_hat) {
            rep.delta_hat = b.delta;
            rep.witness = b.wit;
        }
    }
    return rep;
}

EquidistributionReport character_family_estimate(std::span<const double> points, int64_t K_max,
                                                 int64_t Q_max, double min_frac,
                                                 int64_t exact_cutoff) {
    if (K_max < 1)
        throw std::invalid_argument("character_family_estimate: K_max >= 1 required");
    EquidistributionReport best;
    std::vector<cplx> values(points.size());
    for (int64_t k = 1; k <= K_max; ++k) {
        for (size_t i = 0; i < points.size(); ++i)
            values[i] = e_of(frac(static_cast<double>(k) * points[i]));
        auto rep = total_equidistribution_estimate(values, 1.0, Q_max, min_frac, exact_cutoff);
        best.tested_progressions += rep.tested_progressions;
        best.dyadic_windows = best.dyadic_windows || rep.dyadic_windows;
        if (rep.delta_hat > best.delta_hat) {
            best.delta_hat = rep.delta_hat;
            best.witness = rep.witness;
            best.character_k = k;
        }
    }
    best.test_family = TestFamily::characters;
    best.min_frac = min_frac;
    best.Q_max = Q_max;
    return best;
}

std::string EquidistributionReport::to_json() const {
    nlohmann::json j;
    j["delta_hat"] = delta_hat;
    j["witness"] = {{"start", witness.start}, {"step", witness.step}, {"length", witness.length}};
    j["tested_progressions"] = tested_progressions;
    j["test_family"] = test_family == TestFamily::characters ? "characters" : "supplied-function";
    j["dyadic_windows"] = dyadic_windows;
    j["min_frac"] = min_frac;
    j["q_max"] = Q_max;
    if (test_family == TestFamily::characters) j["character_k"] = character_k;
    return j.dump();
}

namespace {

// k . g as a torus polynomial, combining binomial coefficients linearly
TorusPolynomial combine(const std::vector<TorusPolynomial>& g, const std::vector<int64_t>& k) {
    std::size_t deg1 = 0;
    for (const auto& p : g) deg1 = std::max(deg1, p.alpha().size());
    std::vector<double> alpha(deg1, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g[i].alpha().size(); ++j)
            alpha[j] = frac(alpha[j] + frac_mul_i128(g[i].alpha()[j], static_cast<__int128>(k[i])));
    return TorusPolynomial::from_binomial(std::move(alpha));
}

}  // namespace

ObstructionCertificate torus_dichotomy(const std::vector<TorusPolynomial>& g, int64_t N,
                                       int64_t K_max, double threshold) {
    if (g.empty()) throw std::invalid_argument("torus_dichotomy: empty sequence");
    if (K_max < 1) throw std::invalid_argument("torus_dichotomy: K_max >= 1 required");
    const auto m = g.size();

    ObstructionCertificate cert;
    cert.k.assign(m, 0);

    // One representative per +-pair (leading sign positive): k and -k carry
    // the same smoothness norm and the same Weyl magnitude.  Sorted by box
    // size so ties resolve to the smallest frequency.
    std::vector<int64_t> k(m, -K_max);
    std::vector<std::vector<int64_t>> candidates;
    while (true) {
        auto lead = std::find_if(k.begin(), k.end(), [](int64_t v) { return v != 0; });
        if (lead != k.end() && *lead > 0) candidates.push_back(k);
        std::size_t i = 0;
        while (i < m && k[i] == K_max) k[i++] = -K_max;
        if (i == m) break;
        ++k[i];
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
                         auto box = [](const std::vector<int64_t>& v) {
                             int64_t mx = 0;
                             for (int64_t x : v) mx = std::max(mx, x < 0 ? -x : x);
                             return mx;
                         };
                         return box(a) < box(b);
                     });
    cert.tested_k = static_cast<int64_t>(candidates.size());

    double best_norm = -1.0;
    std::vector<int64_t> best_k;
    for (const auto& kk : candidates) {
        double nrm = smoothness_norm(combine(g, kk), N).value;
        if (best_norm < 0.0 || nrm < best_norm) {
            best_norm = nrm;
            best_k = kk;
        }
    }
    if (best_norm <= threshold) {
        cert.verdict = Verdict::obstructed;
        cert.k = best_k;
        cert.norm = best_norm;
        return cert;
    }

    // no small frequency: measure every character's Weyl sum
    double worst = -1.0;
    std::vector<int64_t> worst_k;
    double worst_norm = 0.0;
    for (const auto& kk : candidates) {
        TorusPolynomial p = combine(g, kk);
        double a = std::abs(weyl_sum(p, N));
        if (a > worst) {
            worst = a;
            worst_k = kk;
            worst_norm = smoothness_norm(p, N).value;
        }
    }
    cert.max_weyl_abs = worst;
    cert.k = worst_k;
    cert.norm = worst_norm;
    cert.verdict = worst < threshold ? Verdict::equidistributed_at_scale : Verdict::obstructed;
    return cert;
}

std::string ObstructionCertificate::to_json() const {
    nlohmann::json j;
    j["k"] = k;
    j["norm"] = norm;
    j["verdict"] =
        verdict == Verdict::obstructed ? "obstructed" : "equidistributed-at-scale";
    j["max_weyl_abs"] = max_weyl_abs;
    j["tested_k"] = tested_k;
    return j.dump();
}

}  // namespace nilcorr
