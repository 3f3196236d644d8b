#include "nilcorr/ref.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nilcorr::ref {

int mobius_naive(int64_t n) {
    if (n < 1) throw std::invalid_argument("mobius_naive: n >= 1 required");
    int sign = 1;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;  // square factor
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

std::vector<int8_t> mobius_table_naive(int64_t N) {
    std::vector<int8_t> out(static_cast<size_t>(N));
    for (int64_t n = 1; n <= N; ++n)
        out[static_cast<size_t>(n - 1)] = static_cast<int8_t>(mobius_naive(n));
    return out;
}

int64_t mertens_naive(int64_t N) {
    int64_t s = 0;
    for (int64_t n = 1; n <= N; ++n) s += mobius_naive(n);
    return s;
}

int lambda_naive(int64_t n) {
    if (n < 1) throw std::invalid_argument("lambda_naive: n >= 1 required");
    int omega = 0;  // prime factors with multiplicity
    for (int64_t p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            n /= p;
            ++omega;
        }
    if (n > 1) ++omega;
    return omega % 2 == 0 ? 1 : -1;
}

cplx weyl_sum_direct(const TorusPolynomial& p, int64_t N) {
    // Kahan compensation on both components
    double sr = 0, cr = 0, si = 0, ci = 0;
    for (int64_t n = 1; n <= N; ++n) {
        double t = 2.0 * std::numbers::pi * p.eval_frac(n);
        double xr = std::cos(t) - cr;
        double tr = sr + xr;
        cr = (tr - sr) - xr;
        sr = tr;
        double xi = std::sin(t) - ci;
        double ti = si + xi;
        ci = (ti - si) - xi;
        si = ti;
    }
    return cplx{sr, si} / static_cast<double>(N);
}

double type_I_direct(std::span<const cplx> f, int64_t N, int64_t k) {
    cplx s{};
    int64_t count = 0;
    for (int64_t w = N / k + 1; w <= (2 * N) / k; ++w) {
        if (k * w > static_cast<int64_t>(f.size()))
            throw std::out_of_range("type_I_direct: index past the value array");
        s += f[static_cast<size_t>(k * w - 1)];
        ++count;
    }
    if (count == 0) throw std::invalid_argument("type_I_direct: empty w-range");
    return std::abs(s) / static_cast<double>(count);
}

double type_II_quadrilinear(std::span<const cplx> f, int64_t K, int64_t W) {
    auto at = [&](int64_t idx) {
        if (idx > static_cast<int64_t>(f.size()))
            throw std::out_of_range("type_II_quadrilinear: index past the value array");
        return f[static_cast<size_t>(idx - 1)];
    };
    cplx total{};
    for (int64_t k = K + 1; k <= 2 * K; ++k)
        for (int64_t kp = K + 1; kp <= 2 * K; ++kp)
            for (int64_t w = W; w < 2 * W; ++w)
                for (int64_t wp = W; wp < 2 * W; ++wp)
                    total += at(k * w) * std::conj(at(kp * w)) * std::conj(at(k * wp)) *
                             at(kp * wp);
    double denom = static_cast<double>(K) * static_cast<double>(K) * static_cast<double>(W) *
                   static_cast<double>(W);
    return total.real() / denom;  // the average is real up to rounding
}

EquidistributionReport progression_scan_exhaustive(std::span<const cplx> values, double F_norm,
                                                   int64_t Q_max, double min_frac) {
    if (values.empty())
        throw std::invalid_argument("progression_scan_exhaustive: empty value array");
    const auto N = static_cast<int64_t>(values.size());
    EquidistributionReport rep;
    rep.min_frac = min_frac;
    rep.Q_max = Q_max;
    auto min_len = static_cast<int64_t>(std::ceil(min_frac * static_cast<double>(N)));
    min_len = std::max<int64_t>(min_len, 1);
    for (int64_t q = 1; q <= Q_max; ++q) {
        for (int64_t r = 0; r < q && r < N; ++r) {
            int64_t len = (N - 1 - r) / q + 1;
            std::vector<cplx> prefix(static_cast<size_t>(len) + 1);
            for (int64_t i = 0; i < len; ++i)
                prefix[static_cast<size_t>(i + 1)] =
                    prefix[static_cast<size_t>(i)] + values[static_cast<size_t>(r + i * q)];
            for (int64_t a = 0; a < len; ++a)
                for (int64_t b = a + min_len; b <= len; ++b) {
                    ++rep.tested_progressions;
                    cplx s =
                        prefix[static_cast<size_t>(b)] - prefix[static_cast<size_t>(a)];
                    double d = std::abs(s) / (static_cast<double>(b - a) * F_norm);
                    if (d > rep.delta_hat) {
                        rep.delta_hat = d;
                        rep.witness = {r + 1 + a * q, q, b - a};
                    }
                }
        }
    }
    return rep;
}

int64_t waring_count_brute(const std::vector<int64_t>& S, int j, int t) {
    std::vector<int64_t> powers;
    powers.reserve(S.size());
    for (int64_t k : S) {
        int64_t p = 1;
        for (int i = 0; i < j; ++i) p *= k;
        powers.push_back(p);
    }
    std::vector<char> seen;
    int64_t maxsum = 0;
    for (int64_t p : powers) maxsum = std::max(maxsum, p);
    seen.assign(static_cast<size_t>(maxsum) * static_cast<size_t>(t) + 1, 0);

    std::vector<size_t> idx(static_cast<size_t>(t), 0);
    while (true) {
        int64_t sum = 0;
        for (size_t i = 0; i < idx.size(); ++i) sum += powers[idx[i]];
        seen[static_cast<size_t>(sum)] = 1;
        size_t i = 0;
        while (i < idx.size() && idx[i] + 1 == powers.size()) idx[i++] = 0;
        if (i == idx.size()) break;
        ++idx[i];
    }
    int64_t count = 0;
    for (char c : seen) count += c;
    return count;
}

}  // namespace nilcorr::ref
