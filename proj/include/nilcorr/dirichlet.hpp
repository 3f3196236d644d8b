#pragma once

// Dirichlet characters mod q realised as exponent vectors over computed
// generators of the unit group, Fourier analysis on (Z/qZ)^x, and the
// correlation of the Mobius function against characters and general
// periodic sequences (the latter verified against its gcd-splitting
// decomposition as an internal identity).

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nilcorr/arith.hpp"

namespace nilcorr {

using cplx = std::complex<double>;

struct Generator {
    int64_t residue = 0;
    int64_t order = 0;
};

class UnitGroupStructure {
public:
    // CRT decomposition of (Z/qZ)^x: odd prime powers through a primitive
    // root, 2^k through {-1, 5}.  Builds the full discrete-log table.
    static std::shared_ptr<const UnitGroupStructure> build(int64_t q);

    int64_t q() const { return q_; }
    int64_t phi() const { return phi_; }
    const std::vector<Generator>& generators() const { return gens_; }

    bool is_unit(int64_t n) const { return dlog_flat((n % q_ + q_) % q_) != nullptr; }
    // exponent vector of n on the generators; n must be a unit
    std::vector<int64_t> dlog(int64_t n) const;

private:
    const int64_t* dlog_flat(int64_t r) const;

    int64_t q_ = 1;
    int64_t phi_ = 1;
    std::vector<Generator> gens_;
    std::vector<int64_t> table_;  // q * gens size, -1 on non-units
    friend class DirichletCharacter;
};

class DirichletCharacter {
public:
    DirichletCharacter(std::shared_ptr<const UnitGroupStructure> group,
                       std::vector<int64_t> exponents);

    static DirichletCharacter principal(std::shared_ptr<const UnitGroupStructure> group);

    int64_t q() const { return group_->q(); }
    const std::vector<int64_t>& exponents() const { return exponents_; }
    const std::shared_ptr<const UnitGroupStructure>& group() const { return group_; }

    // chi(n): 0 off the units, a root of unity e(sum e_i dlog_i / ord_i) on them
    cplx operator()(int64_t n) const;

    bool is_principal() const;

    std::string to_json() const;
    // reconstructs the group from the stored modulus
    static DirichletCharacter from_json(const std::string& text);

private:
    std::shared_ptr<const UnitGroupStructure> group_;
    std::vector<int64_t> exponents_;  // one per generator, reduced mod its order
};

// all phi(q) characters, principal first, in mixed-radix exponent order
std::vector<DirichletCharacter> all_characters(std::shared_ptr<const UnitGroupStructure> group);

struct FourierExpansion {
    std::vector<DirichletCharacter> characters;
    std::vector<cplx> coeffs;  // f_hat(chi) = E_{n unit} f(n) conj(chi(n))
    bool ignored_nonunit_values = false;
};

// f given by one period of length q; values on non-units are ignored (and
// flagged).  Inversion f(n) = sum_chi f_hat(chi) chi(n) holds on units.
FourierExpansion fourier_expand(std::span<const cplx> f,
                                std::shared_ptr<const UnitGroupStructure> group);

// E_{n in [N]} mu(n) conj(chi(n))
cplx mobius_character_correlation(const DirichletCharacter& chi, int64_t N);
cplx mobius_character_correlation(const DirichletCharacter& chi, const ArithTable& table,
                                  int64_t N);

// E_{n in [N]} mu(n) conj(f(n mod q)) computed directly and again through
// the split n = d*m with d = (n,q); disagreement beyond 1e-10 throws a
// consistency error.  Returns the direct value.
cplx mobius_periodic_correlation(std::span<const cplx> f, int64_t N);
cplx mobius_periodic_correlation(std::span<const cplx> f, const ArithTable& table, int64_t N);

}  // namespace nilcorr
