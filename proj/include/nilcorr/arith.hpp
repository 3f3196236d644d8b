#pragma once

// Sieved arithmetic functions: Mobius mu, Liouville lambda, the modified
// von Mangoldt weight (log p at primes, no support on prime powers), and
// primality, over an arbitrary range [lo, hi).
//
// A table is immutable after construction and safe to read from any thread.

#include <cstdint>
#include <string>
#include <vector>

namespace nilcorr {

class ArithTable {
public:
    // Sieve of [lo, hi).  1 <= lo < hi; hi - lo must fit in memory.
    static ArithTable sieve_range(int64_t lo, int64_t hi);

    int64_t lo() const { return lo_; }
    int64_t hi() const { return hi_; }
    int64_t size() const { return hi_ - lo_; }

    // accessors take the integer n itself, lo <= n < hi
    int8_t mu(int64_t n) const { return mu_[static_cast<size_t>(n - lo_)]; }
    int8_t lambda(int64_t n) const { return lambda_[static_cast<size_t>(n - lo_)]; }
    double lambda_prime(int64_t n) const;
    bool is_prime(int64_t n) const {
        size_t i = static_cast<size_t>(n - lo_);
        return (prime_bits_[i >> 6] >> (i & 63)) & 1;
    }

    const std::vector<int8_t>& mu_array() const { return mu_; }
    const std::vector<int8_t>& lambda_array() const { return lambda_; }

    std::vector<int64_t> primes() const;

    // Binary cache: "NCAR" magic, version, lo, hi, raw mu/lambda bytes
    // (little endian).  Primality and the log-p weights are resieved on load.
    void save(const std::string& path) const;
    static ArithTable load(const std::string& path);

private:
    ArithTable() = default;
    void resieve_primes();

    int64_t lo_ = 0, hi_ = 0;
    std::vector<int8_t> mu_;
    std::vector<int8_t> lambda_;
    std::vector<uint64_t> prime_bits_;
};

// Sum of mu(n) for n <= N, exact.
int64_t mertens(int64_t N);

// lambda(1..N) computed only through the identity
//   lambda(n) = sum over r with r^2 | n of mu(n/r^2),
// independent of the direct sieve path.  Index i holds lambda(i+1).
std::vector<int8_t> liouville_from_mobius(int64_t N);

// Primes up to N without materialising the full function tables.
std::vector<int64_t> primes_up_to(int64_t N);

}  // namespace nilcorr
