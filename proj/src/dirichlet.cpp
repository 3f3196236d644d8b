#include "nilcorr/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "nilcorr/errors.hpp"
#include "nilcorr/reduce.hpp"

namespace nilcorr {

namespace {

constexpr int64_t kMaxModulus = 1'000'000;  // dlog table cap

int64_t mulmod(int64_t a, int64_t b, int64_t m) {
    return static_cast<int64_t>(static_cast<__int128>(a) * b % m);
}

int64_t powmod(int64_t base, int64_t exp, int64_t m) {
    int64_t r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

std::vector<std::pair<int64_t, int>> factorize(int64_t n) {
    std::vector<std::pair<int64_t, int>> f;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

// primitive root mod an odd prime p
int64_t primitive_root_prime(int64_t p) {
    int64_t phi = p - 1;
    auto fac = factorize(phi);
    for (int64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (auto [f, e] : fac)
            if (powmod(g, phi / f, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root_prime: none found (impossible for prime p)");
}

// primitive root mod p^k for odd prime p
int64_t primitive_root_prime_power(int64_t p, int k, int64_t pk) {
    int64_t g = primitive_root_prime(p);
    if (k == 1) return g;
    // g is primitive mod p^2 (hence all p^k) unless g^(p-1) = 1 mod p^2
    if (powmod(g, p - 1, p * p) == 1) g += p;
    return g % pk;
}

struct LocalFactor {
    int64_t modulus;                 // prime power
    std::vector<Generator> gens;    // generators mod `modulus`
};

LocalFactor local_unit_group(int64_t p, int e) {
    int64_t pk = 1;
    for (int i = 0; i < e; ++i) pk *= p;
    LocalFactor lf;
    lf.modulus = pk;
    if (p == 2) {
        if (e == 1) return lf;                         // trivial
        if (e == 2) { lf.gens.push_back({3, 2}); return lf; }
        lf.gens.push_back({pk - 1, 2});                 // -1
        lf.gens.push_back({5, pk / 4});                 // 5 has order 2^(k-2)
        return lf;
    }
    int64_t phi = pk / p * (p - 1);
    lf.gens.push_back({primitive_root_prime_power(p, e, pk), phi});
    return lf;
}

}  // namespace

std::shared_ptr<const UnitGroupStructure> UnitGroupStructure::build(int64_t q) {
    if (q < 1) throw std::invalid_argument("unit_group: q >= 1 required");
    if (q > kMaxModulus)
        throw resource_error("unit_group: q = " + std::to_string(q) +
                             " above the discrete-log table cap");
    auto u = std::make_shared<UnitGroupStructure>();
    u->q_ = q;

    // CRT-lift each local generator: equal to it mod its prime power, 1 elsewhere
    for (auto [p, e] : factorize(q)) {
        LocalFactor lf = local_unit_group(p, e);
        int64_t rest = q / lf.modulus;
        for (const auto& gen : lf.gens) {
            // x = gen mod lf.modulus, x = 1 mod rest
            int64_t lifted = gen.residue % q;
            if (rest > 1) {
                for (int64_t x = gen.residue % lf.modulus; x < q; x += lf.modulus)
                    if (x % rest == 1) { lifted = x; break; }
            }
            u->gens_.push_back({lifted, gen.order});
            u->phi_ *= gen.order;
        }
    }

    // discrete logs by one walk through the group in mixed-radix order;
    // rolling an axis over multiplies by g^(1-ord) = g since g^ord = 1
    const auto ng = u->gens_.size();
    u->table_.assign(static_cast<size_t>(q) * std::max<size_t>(ng, 1), -1);
    std::vector<int64_t> expo(ng, 0);
    int64_t cur = 1 % q;
    int64_t visited = 0;
    while (true) {
        if (ng > 0)
            for (size_t i = 0; i < ng; ++i)
                u->table_[static_cast<size_t>(cur) * ng + i] = expo[i];
        else
            u->table_[static_cast<size_t>(cur)] = 0;
        ++visited;
        size_t i = 0;
        while (i < ng && expo[i] + 1 == u->gens_[i].order) {
            expo[i] = 0;
            cur = mulmod(cur, u->gens_[i].residue, q);
            ++i;
        }
        if (i == ng) break;
        ++expo[i];
        cur = mulmod(cur, u->gens_[i].residue, q);
    }
    if (visited != u->phi_)
        throw std::logic_error("unit_group: generator orders do not multiply to phi");
    return u;
}

const int64_t* UnitGroupStructure::dlog_flat(int64_t r) const {
    const auto ng = std::max<size_t>(gens_.size(), 1);
    const int64_t* row = table_.data() + static_cast<size_t>(r) * ng;
    return row[0] >= 0 ? row : nullptr;
}

std::vector<int64_t> UnitGroupStructure::dlog(int64_t n) const {
    int64_t r = (n % q_ + q_) % q_;
    const int64_t* row = dlog_flat(r);
    if (!row) throw std::invalid_argument("dlog: " + std::to_string(n) + " is not a unit mod " +
                                          std::to_string(q_));
    return {row, row + gens_.size()};
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroupStructure> group,
                                       std::vector<int64_t> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
    if (exponents_.size() != group_->generators().size())
        throw std::invalid_argument("DirichletCharacter: exponent count != generator count");
    for (size_t i = 0; i < exponents_.size(); ++i) {
        int64_t ord = group_->generators()[i].order;
        exponents_[i] = ((exponents_[i] % ord) + ord) % ord;
    }
}

DirichletCharacter DirichletCharacter::principal(
    std::shared_ptr<const UnitGroupStructure> group) {
    std::vector<int64_t> e(group->generators().size(), 0);
    return {std::move(group), std::move(e)};
}

cplx DirichletCharacter::operator()(int64_t n) const {
    int64_t q = group_->q_;
    int64_t r = (n % q + q) % q;
    const int64_t* row = group_->dlog_flat(r);
    if (!row) return {0.0, 0.0};
    // phase = sum e_i d_i / ord_i, accumulated exactly over lcm of orders
    int64_t L = 1;
    for (const auto& g : group_->gens_) L = std::lcm(L, g.order);
    int64_t num = 0;
    for (size_t i = 0; i < exponents_.size(); ++i) {
        int64_t ord = group_->gens_[i].order;
        int64_t term = mulmod(exponents_[i] % ord, row[i] % ord, ord);
        num = (num + term * (L / ord)) % L;
    }
    double t = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(L);
    return {std::cos(t), std::sin(t)};
}

bool DirichletCharacter::is_principal() const {
    return std::all_of(exponents_.begin(), exponents_.end(), [](int64_t e) { return e == 0; });
}

std::string DirichletCharacter::to_json() const {
    nlohmann::json j;
    j["q"] = group_->q();
    j["exponents"] = exponents_;
    return j.dump();
}

DirichletCharacter DirichletCharacter::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    auto group = UnitGroupStructure::build(j["q"].get<int64_t>());
    return {group, j["exponents"].get<std::vector<int64_t>>()};
}

std::vector<DirichletCharacter> all_characters(
    std::shared_ptr<const UnitGroupStructure> group) {
    std::vector<DirichletCharacter> out;
    out.reserve(static_cast<size_t>(group->phi()));
    const auto& gens = group->generators();
    std::vector<int64_t> e(gens.size(), 0);
    while (true) {
        out.emplace_back(group, e);
        size_t i = 0;
        while (i < gens.size() && e[i] + 1 == gens[i].order) e[i++] = 0;
        if (i == gens.size()) break;
        ++e[i];
    }
    return out;
}

FourierExpansion fourier_expand(std::span<const cplx> f,
                                std::shared_ptr<const UnitGroupStructure> group) {
    int64_t q = group->q();
    if (static_cast<int64_t>(f.size()) != q)
        throw std::invalid_argument("fourier_expand: need exactly one period of length q");
    FourierExpansion out;
    out.characters = all_characters(group);
    out.coeffs.resize(out.characters.size());

    for (int64_t n = 0; n < q; ++n)
        if (!group->is_unit(n) && std::abs(f[static_cast<size_t>(n)]) != 0.0)
            out.ignored_nonunit_values = true;

    const double phi = static_cast<double>(group->phi());
    for (size_t c = 0; c < out.characters.size(); ++c) {
        cplx acc{};
        const auto& chi = out.characters[c];
        for (int64_t n = 0; n < q; ++n) {
            if (!group->is_unit(n)) continue;
            acc += f[static_cast<size_t>(n)] * std::conj(chi(n));
        }
        out.coeffs[c] = acc / phi;
    }
    return out;
}

cplx mobius_character_correlation(const DirichletCharacter& chi, const ArithTable& table,
                                  int64_t N) {
    if (N < 1) throw std::invalid_argument("mobius_character_correlation: N >= 1 required");
    if (table.lo() > 1 || table.hi() < N + 1)
        throw std::invalid_argument("mobius_character_correlation: table does not cover [1, N]");
    cplx s = indexed_sum<cplx>(1, N + 1, [&](int64_t n) {
        int8_t m = table.mu(n);
        if (m == 0) return cplx{};
        return static_cast<double>(m) * std::conj(chi(n));
    });
    return s / static_cast<double>(N);
}

cplx mobius_character_correlation(const DirichletCharacter& chi, int64_t N) {
    ArithTable t = ArithTable::sieve_range(1, N + 1);
    return mobius_character_correlation(chi, t, N);
}

cplx mobius_periodic_correlation(std::span<const cplx> f, const ArithTable& table, int64_t N) {
    if (f.empty()) throw std::invalid_argument("mobius_periodic_correlation: empty period");
    if (N < 1) throw std::invalid_argument("mobius_periodic_correlation: N >= 1 required");
    const auto q = static_cast<int64_t>(f.size());

    cplx direct = indexed_sum<cplx>(1, N + 1, [&](int64_t n) {
        int8_t m = table.mu(n);
        if (m == 0) return cplx{};
        return static_cast<double>(m) * std::conj(f[static_cast<size_t>(n % q)]);
    });
    direct /= static_cast<double>(N);

    // split n = d*m with d = (n,q): over squarefree d | q, m <= N/d coprime to q
    cplx split{};
    for (int64_t d = 1; d <= q; ++d) {
        if (q % d) continue;
        int64_t mu_d = 0;
        {
            auto fac = factorize(d);
            bool sf = std::all_of(fac.begin(), fac.end(), [](auto pe) { return pe.second == 1; });
            if (sf) mu_d = (fac.size() % 2 == 0) ? 1 : -1;
        }
        if (mu_d == 0) continue;
        cplx inner = indexed_sum<cplx>(1, N / d + 1, [&](int64_t m) {
            if (std::gcd(m % q, q) != 1) return cplx{};
            int8_t mm = table.mu(m);
            if (mm == 0) return cplx{};
            return static_cast<double>(mm) * std::conj(f[static_cast<size_t>((d * m) % q)]);
        });
        split += static_cast<double>(mu_d) * inner;
    }
    split /= static_cast<double>(N);

    if (std::abs(direct - split) > 1e-10)
        throw consistency_error("periodic-gcd-splitting",
                                "mobius_periodic_correlation: direct and split paths differ by " +
                                    std::to_string(std::abs(direct - split)));
    return direct;
}

cplx mobius_periodic_correlation(std::span<const cplx> f, int64_t N) {
    ArithTable t = ArithTable::sieve_range(1, N + 1);
    return mobius_periodic_correlation(f, t, N);
}

}  // namespace nilcorr
