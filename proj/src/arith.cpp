#include "nilcorr/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "nilcorr/errors.hpp"
#include "nilcorr/reduce.hpp"

namespace nilcorr {

namespace {

constexpr int64_t kSegment = int64_t(1) << 20;
constexpr int64_t kMaxTableSize = int64_t(1) << 31;  // ~2e9 entries per table

int64_t isqrt64(int64_t n) {
    auto r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// primes <= limit by plain Eratosthenes
std::vector<int64_t> base_primes(int64_t limit) {
    std::vector<char> mark(static_cast<size_t>(limit + 1), 1);
    std::vector<int64_t> out;
    for (int64_t i = 2; i <= limit; ++i) {
        if (!mark[static_cast<size_t>(i)]) continue;
        out.push_back(i);
        for (int64_t j = i * i; j <= limit; j += i) mark[static_cast<size_t>(j)] = 0;
    }
    return out;
}

// One segment [lo, hi) of the factor sieve.  For each base prime p the full
// power of p is divided out of rem[], updating the sign for lambda and the
// distinct/square state for mu.  Whatever remains in rem[] afterwards is
// either 1 or a single prime > sqrt(hi-1).
struct SegmentSieve {
    int64_t lo, hi;
    std::vector<int64_t> rem;
    std::vector<int8_t> mu, lambda;
    std::vector<uint8_t> prime;

    SegmentSieve(int64_t l, int64_t h, const std::vector<int64_t>& bases) : lo(l), hi(h) {
        const auto n = static_cast<size_t>(hi - lo);
        rem.resize(n);
        mu.assign(n, 1);
        lambda.assign(n, 1);
        prime.assign(n, 0);
        for (size_t i = 0; i < n; ++i) rem[i] = lo + static_cast<int64_t>(i);

        for (int64_t p : bases) {
            if (p * p >= hi) break;
            int64_t start = ((lo + p - 1) / p) * p;
            for (int64_t j = start; j < hi; j += p) {
                size_t i = static_cast<size_t>(j - lo);
                if (j == p) prime[i] = 1;  // the base prime itself is in range
                int e = 0;
                while (rem[i] % p == 0) { rem[i] /= p; ++e; }
                if (e & 1) lambda[i] = -lambda[i];
                mu[i] = (e >= 2) ? 0 : static_cast<int8_t>(-mu[i]);
            }
        }
        for (size_t i = 0; i < n; ++i) {
            int64_t r = rem[i];
            if (r > 1) {  // leftover prime factor, multiplicity one
                lambda[i] = -lambda[i];
                if (mu[i] != 0) mu[i] = -mu[i];
                if (r == lo + static_cast<int64_t>(i)) prime[i] = 1;
            }
        }
        if (lo <= 1 && 1 < hi) {  // n = 1: empty product
            size_t i = static_cast<size_t>(1 - lo);
            mu[i] = 1;
            lambda[i] = 1;
            prime[i] = 0;
        }
    }
};

}  // namespace

ArithTable ArithTable::sieve_range(int64_t lo, int64_t hi) {
    if (lo < 1 || lo >= hi)
        throw std::invalid_argument("sieve_range: need 1 <= lo < hi, got [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + ")");
    if (hi - lo > kMaxTableSize)
        throw resource_error("sieve_range: range of " + std::to_string(hi - lo) +
                             " entries exceeds the table limit");

    ArithTable t;
    t.lo_ = lo;
    t.hi_ = hi;
    const auto n = static_cast<size_t>(hi - lo);
    t.mu_.resize(n);
    t.lambda_.resize(n);
    t.prime_bits_.assign((n + 63) / 64, 0);

    const auto bases = base_primes(isqrt64(hi - 1));
    const int64_t nseg = (hi - lo + kSegment - 1) / kSegment;

#pragma omp parallel for schedule(dynamic)
    for (int64_t s = 0; s < nseg; ++s) {
        int64_t slo = lo + s * kSegment;
        int64_t shi = std::min(slo + kSegment, hi);
        SegmentSieve seg(slo, shi, bases);
        size_t off = static_cast<size_t>(slo - lo);
        std::memcpy(t.mu_.data() + off, seg.mu.data(), seg.mu.size());
        std::memcpy(t.lambda_.data() + off, seg.lambda.data(), seg.lambda.size());
        for (size_t i = 0; i < seg.prime.size(); ++i)
            if (seg.prime[i]) {
                size_t bit = off + i;
                // segments are >= 2^20 long and 64-aligned in all but the
                // first, whose offset is 0: no two threads share a word
                t.prime_bits_[bit >> 6] |= uint64_t(1) << (bit & 63);
            }
    }
    return t;
}

double ArithTable::lambda_prime(int64_t n) const {
    return is_prime(n) ? std::log(static_cast<double>(n)) : 0.0;
}

std::vector<int64_t> ArithTable::primes() const {
    std::vector<int64_t> out;
    for (int64_t n = lo_; n < hi_; ++n)
        if (is_prime(n)) out.push_back(n);
    return out;
}

void ArithTable::resieve_primes() {
    const auto n = static_cast<size_t>(hi_ - lo_);
    prime_bits_.assign((n + 63) / 64, 0);
    std::vector<uint8_t> comp(n, 0);
    for (int64_t p : base_primes(isqrt64(hi_ - 1))) {
        int64_t start = std::max(p * p, ((lo_ + p - 1) / p) * p);
        for (int64_t j = start; j < hi_; j += p) comp[static_cast<size_t>(j - lo_)] = 1;
    }
    for (size_t i = 0; i < n; ++i) {
        int64_t v = lo_ + static_cast<int64_t>(i);
        if (v >= 2 && !comp[i]) prime_bits_[i >> 6] |= uint64_t(1) << (i & 63);
    }
}

void ArithTable::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("ArithTable::save: cannot open " + path);
    const char magic[4] = {'N', 'C', 'A', 'R'};
    uint32_t version = 1;
    auto lo = static_cast<uint64_t>(lo_), hi = static_cast<uint64_t>(hi_);
    f.write(magic, 4);
    f.write(reinterpret_cast<const char*>(&version), 4);
    f.write(reinterpret_cast<const char*>(&lo), 8);
    f.write(reinterpret_cast<const char*>(&hi), 8);
    f.write(reinterpret_cast<const char*>(mu_.data()), static_cast<std::streamsize>(mu_.size()));
    f.write(reinterpret_cast<const char*>(lambda_.data()),
            static_cast<std::streamsize>(lambda_.size()));
    if (!f) throw std::runtime_error("ArithTable::save: write failed on " + path);
}

ArithTable ArithTable::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("ArithTable::load: cannot open " + path);
    char magic[4];
    uint32_t version = 0;
    uint64_t lo = 0, hi = 0;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&version), 4);
    f.read(reinterpret_cast<char*>(&lo), 8);
    f.read(reinterpret_cast<char*>(&hi), 8);
    if (!f || std::memcmp(magic, "NCAR", 4) != 0)
        throw std::runtime_error("ArithTable::load: bad magic in " + path);
    if (version != 1)
        throw std::runtime_error("ArithTable::load: unsupported version in " + path);
    ArithTable t;
    t.lo_ = static_cast<int64_t>(lo);
    t.hi_ = static_cast<int64_t>(hi);
    if (t.lo_ < 1 || t.lo_ >= t.hi_ || t.hi_ - t.lo_ > kMaxTableSize)
        throw std::runtime_error("ArithTable::load: corrupt header in " + path);
    const auto n = static_cast<size_t>(t.hi_ - t.lo_);
    t.mu_.resize(n);
    t.lambda_.resize(n);
    f.read(reinterpret_cast<char*>(t.mu_.data()), static_cast<std::streamsize>(n));
    f.read(reinterpret_cast<char*>(t.lambda_.data()), static_cast<std::streamsize>(n));
    if (!f) throw std::runtime_error("ArithTable::load: truncated file " + path);
    t.resieve_primes();
    return t;
}

int64_t mertens(int64_t N) {
    if (N < 1) throw std::invalid_argument("mertens: N >= 1 required");
    ArithTable t = ArithTable::sieve_range(1, N + 1);
    return indexed_sum<int64_t>(1, N + 1, [&](int64_t n) {
        return static_cast<int64_t>(t.mu(n));
    });
}

std::vector<int8_t> liouville_from_mobius(int64_t N) {
    if (N < 1) throw std::invalid_argument("liouville_from_mobius: N >= 1 required");
    ArithTable t = ArithTable::sieve_range(1, N + 1);
    std::vector<int16_t> acc(static_cast<size_t>(N) + 1, 0);
    for (int64_t r = 1; r * r <= N; ++r) {
        int64_t rr = r * r;
        for (int64_t m = 1; m * rr <= N; ++m)
            acc[static_cast<size_t>(m * rr)] += t.mu(m);
    }
    std::vector<int8_t> out(static_cast<size_t>(N));
    for (int64_t n = 1; n <= N; ++n) out[static_cast<size_t>(n - 1)] = static_cast<int8_t>(acc[static_cast<size_t>(n)]);
    return out;
}

std::vector<int64_t> primes_up_to(int64_t N) {
    if (N < 2) return {};
    std::vector<int64_t> out;
    out.reserve(static_cast<size_t>(static_cast<double>(N) / std::log(static_cast<double>(N) + 2) * 1.2) + 16);
    const auto bases = base_primes(isqrt64(N));
    std::vector<uint8_t> comp;
    for (int64_t lo = 2; lo <= N; lo += kSegment) {
        int64_t hi = std::min(lo + kSegment, N + 1);
        comp.assign(static_cast<size_t>(hi - lo), 0);
        for (int64_t p : bases) {
            if (p * p >= hi) break;
            int64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (int64_t j = start; j < hi; j += p) comp[static_cast<size_t>(j - lo)] = 1;
        }
        for (int64_t v = lo; v < hi; ++v)
            if (!comp[static_cast<size_t>(v - lo)]) out.push_back(v);
    }
    return out;
}

}  // namespace nilcorr
