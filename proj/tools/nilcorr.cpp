// Command-line driver: reproducible experiments emitting CSV/JSON data.
//
// Exit codes: 0 ok, 2 usage error, 3 resource limit, 4 internal-consistency
// failure (the failing identity is named on stderr).

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nilcorr/arith.hpp"
#include "nilcorr/correlator.hpp"
#include "nilcorr/dirichlet.hpp"
#include "nilcorr/equidist.hpp"
#include "nilcorr/errors.hpp"
#include "nilcorr/heisenberg.hpp"
#include "nilcorr/polyseq.hpp"
#include "nilcorr/ref.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#ifndef NILCORR_GIT_DESCRIBE
#define NILCORR_GIT_DESCRIBE "unknown"
#endif

using namespace nilcorr;
using nlohmann::json;

namespace {

struct GlobalOpts {
    int threads = 0;
    std::string output;
    std::string format = "csv";
    bool reproducible = false;
    uint64_t seed = 1;
};

// lets integer size options accept scientific notation ("1e8")
const CLI::Validator ScientificInt(
    [](std::string& s) -> std::string {
        try {
            size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) return "not a number: " + s;
            s = std::to_string(static_cast<long long>(std::llround(v)));
            return {};
        } catch (...) {
            return "not a number: " + s;
        }
    },
    "SIZE");

// "1e3,1e4,1e6" or "1000,5000" -> ascending integer ladder
std::vector<int64_t> parse_ladder(const std::string& text) {
    std::vector<int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = std::stod(item);
        out.push_back(static_cast<int64_t>(std::llround(v)));
    }
    if (out.empty()) throw CLI::ValidationError("--ladder", "empty ladder");
    for (size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1])
            throw CLI::ValidationError("--ladder", "ladder must be strictly ascending");
    return out;
}

// symbolic phase tokens expand at full (compensated) precision
dd parse_phase(const std::string& tok) {
    if (tok == "sqrt2") return dd_sqrt(2.0);
    if (tok == "sqrt3") return dd_sqrt(3.0);
    if (tok == "sqrt5") return dd_sqrt(5.0);
    if (tok == "cbrt2") return dd_cbrt(2.0);
    if (tok == "golden") return dd_golden();
    try {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return dd(v);
    } catch (...) {
        throw CLI::ValidationError("--phase", "unknown token '" + tok +
                                                  "' (use sqrt2, sqrt3, sqrt5, cbrt2, golden, "
                                                  "or a decimal)");
    }
}

cplx e_of(double x) {
    double t = 2.0 * std::numbers::pi * x;
    return {std::cos(t), std::sin(t)};
}

json base_metadata(const GlobalOpts& g, const std::string& command) {
    json meta;
    meta["command"] = command;
    meta["build"] = NILCORR_GIT_DESCRIBE;
    meta["seed"] = g.seed;
    if (!g.reproducible) meta["timestamp"] = static_cast<int64_t>(std::time(nullptr));
    return meta;
}

void emit(const GlobalOpts& g, const std::string& csv_text, const json& full) {
    std::string text = g.format == "json" ? full.dump(2) + "\n" : csv_text;
    if (g.output.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream f(g.output, std::ios::binary);
    if (!f) throw resource_error("cannot open output file " + g.output);
    f << text;
}

PsiFunction parse_psi(const std::string& name) {
    if (name == "e") return PsiFunction::exp_circle();
    if (name == "tent") return PsiFunction::centered_tent();
    if (name == "bump") return PsiFunction::smooth_bump();
    throw CLI::ValidationError("--psi", "unknown test function '" + name + "'");
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int run_sieve(const GlobalOpts& g, int64_t lo, int64_t hi, bool use_cache, bool verify,
              const std::string& out_bin) {
    std::optional<ArithTable> table;
    std::string cache_path;
    if (use_cache) {
        const char* dir = std::getenv("NILCORR_CACHE_DIR");
        if (!dir) throw resource_error("--cache set but NILCORR_CACHE_DIR is not");
        cache_path = std::string(dir) + "/ncar_" + std::to_string(lo) + "_" +
                     std::to_string(hi) + ".bin";
        if (std::ifstream(cache_path).good()) table = ArithTable::load(cache_path);
    }
    if (!table) {
        table = ArithTable::sieve_range(lo, hi);
        if (!cache_path.empty()) table->save(cache_path);
    }
    if (!out_bin.empty()) table->save(out_bin);

    if (verify) {
        std::mt19937_64 rng(g.seed);
        for (int i = 0; i < 200; ++i) {
            int64_t n = lo + static_cast<int64_t>(rng() % static_cast<uint64_t>(hi - lo));
            if (table->mu(n) != ref::mobius_naive(n) || table->lambda(n) != ref::lambda_naive(n))
                throw consistency_error("sieve-vs-trial-division",
                                        "sieve disagrees with trial division at n = " +
                                            std::to_string(n));
        }
    }

    int64_t nprimes = 0, msum = 0;
    for (int64_t n = lo; n < hi; ++n) {
        if (table->is_prime(n)) ++nprimes;
        msum += table->mu(n);
    }
    json out = base_metadata(g, "sieve");
    out["lo"] = lo;
    out["hi"] = hi;
    out["primes"] = nprimes;
    out["mu_sum"] = msum;
    out["verified"] = verify;
    std::string csv = "lo,hi,primes,mu_sum\n" + std::to_string(lo) + "," + std::to_string(hi) +
                      "," + std::to_string(nprimes) + "," + std::to_string(msum) + "\n";
    emit(g, csv, out);
    return 0;
}

int run_correlate(const GlobalOpts& g, const std::string& mode, const std::string& weight_name,
                  const std::string& ladder_text, const std::string& phase_tok,
                  const std::string& alpha_tok, const std::string& beta_tok,
                  const std::string& psi_name, const std::string& poly_path,
                  const std::string& dump_orbit) {
    auto Ns = parse_ladder(ladder_text);
    int64_t top = Ns.back();
    Weight weight = weight_name == "liouville" ? Weight::liouville : Weight::mobius;
    auto table = ArithTable::sieve_range(1, top + 1);

    CorrelationSeries series;
    json meta = base_metadata(g, "correlate");
    meta["weight"] = weight_name;
    meta["mode"] = mode;

    if (mode == "davenport") {
        dd theta = parse_phase(phase_tok);
        series = weighted_correlation_fn(
            table,
            [&](int64_t n) { return e_of(dd_frac_double(dd_mul(theta, static_cast<double>(n)))); },
            Ns, weight, FitMode::power);
        meta["phase"] = phase_tok;
    } else if (mode == "bracket") {
        dd a = parse_phase(alpha_tok), b = parse_phase(beta_tok);
        series = bracket_correlation(table, a, b, parse_psi(psi_name), Ns, weight);
        meta["alpha"] = alpha_tok;
        meta["beta"] = beta_tok;
        meta["psi"] = psi_name;
        if (!dump_orbit.empty()) {
            std::ofstream f(dump_orbit, std::ios::binary);
            if (!f) throw resource_error("cannot open orbit dump " + dump_orbit);
            f << "n,tau1,tau2,tau3\n";
            for (int64_t n = 1; n <= top; ++n) {
                auto r = reduce(orbit_point(a, b, n));
                f << n << ',' << format_double(r.tau1()) << ',' << format_double(r.tau2())
                  << ',' << format_double(r.tau3()) << '\n';
            }
            meta["orbit_dump"] = dump_orbit;
        }
    } else if (mode == "nilseq") {
        std::ifstream pf(poly_path);
        if (!pf) throw resource_error("cannot read polynomial file " + poly_path);
        std::stringstream buf;
        buf << pf.rdbuf();
        auto p = TorusPolynomial::from_json(buf.str());
        series = weighted_correlation_fn(
            table, [&](int64_t n) { return e_of(p.eval_frac(n)); }, Ns, weight, FitMode::power);
        meta["poly"] = json::parse(p.to_json());
    } else {
        throw CLI::ValidationError("--mode", "unknown mode '" + mode + "'");
    }

    json full = meta;
    full["result"] = json::parse(series.to_json(mode));
    emit(g, series.to_csv(), full);
    return 0;
}

int run_typesums(const GlobalOpts& g, int64_t N, const std::string& phase_tok, double threshold) {
    dd theta = parse_phase(phase_tok);
    std::vector<cplx> f(static_cast<size_t>(4 * N + 2));
    for (size_t i = 0; i < f.size(); ++i)
        f[i] = e_of(dd_frac_double(dd_mul(theta, static_cast<double>(i + 1))));
    auto rep = vaughan_report(f, N, threshold);
    json full = base_metadata(g, "typesums");
    full["phase"] = phase_tok;
    full["threshold"] = threshold;
    full["result"] = json::parse(rep.to_json());

    std::ostringstream csv;
    csv << "K,max_type1_in_window\n";
    for (const auto& [K, v] : rep.type1) csv << K << ',' << format_double(v) << '\n';
    csv << "type2," << format_double(rep.type2) << '\n';
    csv << "max_type1," << format_double(rep.max_type1) << '\n';
    emit(g, csv.str(), full);
    return 0;
}

int run_equidist(const GlobalOpts& g, int64_t N, const std::string& phase_tok, bool bracket,
                 const std::string& alpha_tok, const std::string& beta_tok, int64_t qmax,
                 double minfrac, int64_t kmax, const std::string& dump_orbit) {
    std::vector<cplx> values(static_cast<size_t>(N));
    std::vector<double> points(static_cast<size_t>(N));
    json meta = base_metadata(g, "equidist");
    if (bracket) {
        dd a = parse_phase(alpha_tok), b = parse_phase(beta_tok);
        std::ofstream orbit;
        if (!dump_orbit.empty()) {
            orbit.open(dump_orbit, std::ios::binary);
            if (!orbit) throw resource_error("cannot open orbit dump " + dump_orbit);
            orbit << "n,tau1,tau2,tau3\n";
        }
        for (int64_t n = 1; n <= N; ++n) {
            auto r = reduce(orbit_point(a, b, n));
            points[static_cast<size_t>(n - 1)] = r.tau3();
            values[static_cast<size_t>(n - 1)] = e_of(r.tau3());
            if (orbit.is_open())
                orbit << n << ',' << format_double(r.tau1()) << ',' << format_double(r.tau2())
                      << ',' << format_double(r.tau3()) << '\n';
        }
        meta["alpha"] = alpha_tok;
        meta["beta"] = beta_tok;
    } else {
        dd theta = parse_phase(phase_tok);
        for (int64_t n = 1; n <= N; ++n) {
            double x = dd_frac_double(dd_mul(theta, static_cast<double>(n)));
            points[static_cast<size_t>(n - 1)] = x;
            values[static_cast<size_t>(n - 1)] = e_of(x);
        }
        meta["phase"] = phase_tok;
    }
    auto rep = kmax > 0 ? character_family_estimate(points, kmax, qmax, minfrac)
                        : total_equidistribution_estimate(values, 1.0, qmax, minfrac);
    double disc = star_discrepancy(points);

    json full = meta;
    full["report"] = json::parse(rep.to_json());
    full["star_discrepancy"] = disc;
    std::ostringstream csv;
    csv << "delta_hat,witness_start,witness_step,witness_length,star_discrepancy\n";
    csv << format_double(rep.delta_hat) << ',' << rep.witness.start << ',' << rep.witness.step
        << ',' << rep.witness.length << ',' << format_double(disc) << '\n';
    emit(g, csv.str(), full);
    return 0;
}

int run_dichotomy(const GlobalOpts& g, int64_t N, int64_t kmax, double threshold,
                  const std::string& phase_tok, const std::string& phase2_tok) {
    std::vector<TorusPolynomial> seq;
    std::vector<std::string> labels;
    seq.push_back(TorusPolynomial::linear(parse_phase(phase_tok).to_double()));
    labels.push_back(phase_tok);
    if (!phase2_tok.empty()) {
        seq.push_back(TorusPolynomial::linear(parse_phase(phase2_tok).to_double()));
        labels.push_back(phase2_tok);
    }
    auto cert = torus_dichotomy(seq, N, kmax, threshold);
    auto arcs = classify_arcs(seq, N, kmax, threshold);

    json full = base_metadata(g, "dichotomy");
    full["phases"] = labels;
    full["N"] = N;
    full["k_max"] = kmax;
    full["threshold"] = threshold;
    full["certificate"] = json::parse(cert.to_json());
    full["arc_class"] = arcs == ArcClass::major_arc ? "major-arc" : "minor-arc";

    std::ostringstream csv;
    csv << "verdict,norm,max_weyl_abs,arc_class\n";
    csv << (cert.verdict == Verdict::obstructed ? "obstructed" : "equidistributed-at-scale")
        << ',' << format_double(cert.norm) << ',' << format_double(cert.max_weyl_abs) << ','
        << (arcs == ArcClass::major_arc ? "major-arc" : "minor-arc") << '\n';
    emit(g, csv.str(), full);
    return 0;
}

int run_char(const GlobalOpts& g, int64_t q, bool plancherel, int64_t correlate_N) {
    auto group = UnitGroupStructure::build(q);
    json full = base_metadata(g, "char");
    full["q"] = q;
    full["phi"] = group->phi();
    json gens = json::array();
    for (const auto& gen : group->generators())
        gens.push_back({{"residue", gen.residue}, {"order", gen.order}});
    full["generators"] = gens;

    std::ostringstream csv;
    csv << "q,phi\n" << q << ',' << group->phi() << '\n';

    if (plancherel) {
        std::mt19937_64 rng(g.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<cplx> f(static_cast<size_t>(q), cplx{});
            for (int64_t n = 0; n < q; ++n)
                if (group->is_unit(n)) f[static_cast<size_t>(n)] = e_of(u(rng));
            auto ex = fourier_expand(f, group);
            double l2 = 0.0;
            for (auto c : ex.coeffs) l2 += std::norm(c);
            double rhs = 0.0;
            for (int64_t n = 0; n < q; ++n)
                if (group->is_unit(n)) rhs += std::norm(f[static_cast<size_t>(n)]);
            rhs /= static_cast<double>(group->phi());
            worst = std::max(worst, std::abs(l2 - rhs));
            for (int64_t n = 0; n < q; ++n) {
                if (!group->is_unit(n)) continue;
                cplx rec{};
                for (size_t c = 0; c < ex.coeffs.size(); ++c)
                    rec += ex.coeffs[c] * ex.characters[c](n);
                worst = std::max(worst, std::abs(rec - f[static_cast<size_t>(n)]));
            }
        }
        if (worst > 1e-12)
            throw consistency_error("plancherel-inversion",
                                    "Plancherel/inversion defect " + std::to_string(worst));
        full["plancherel_defect"] = worst;
        csv << "plancherel_defect," << format_double(worst) << '\n';
    }

    if (correlate_N > 0) {
        auto table = ArithTable::sieve_range(1, correlate_N + 1);
        json rows = json::array();
        csv << "character,corr_abs\n";
        auto chars = all_characters(group);
        for (size_t c = 0; c < chars.size(); ++c) {
            cplx v = mobius_character_correlation(chars[c], table, correlate_N);
            rows.push_back({{"exponents", chars[c].exponents()},
                            {"re", v.real()},
                            {"im", v.imag()},
                            {"abs", std::abs(v)}});
            csv << c << ',' << format_double(std::abs(v)) << '\n';
        }
        full["mobius_correlations"] = rows;
        full["N"] = correlate_N;
    }
    emit(g, csv.str(), full);
    return 0;
}

int run_prime_orbit(const GlobalOpts& g, int64_t N, const std::string& phase_tok,
                    const std::string& mode_name, int64_t w) {
    dd theta = parse_phase(phase_tok);
    json full = base_metadata(g, "prime-orbit");
    full["phase"] = phase_tok;
    full["N"] = N;
    full["mode"] = mode_name;
    std::ostringstream csv;

    if (mode_name == "nth-prime") {
        // enough sieve to hold the first N primes
        auto top = static_cast<int64_t>(
            static_cast<double>(N) *
                (std::log(static_cast<double>(N) + 2) + std::log(std::log(static_cast<double>(N) + 4)) + 2) +
            100);
        auto table = ArithTable::sieve_range(1, top);
        std::vector<cplx> values(static_cast<size_t>(top));
        std::vector<double> pts;
        pts.reserve(static_cast<size_t>(N));
        for (int64_t n = 1; n < top; ++n)
            values[static_cast<size_t>(n - 1)] =
                e_of(dd_frac_double(dd_mul(theta, static_cast<double>(n))));
        auto out = prime_orbit_average(table, values, PrimeOrbitMode::nth_prime, N, 0);
        int64_t count = 0;
        for (int64_t n = 2; n < top && count < N; ++n)
            if (table.is_prime(n)) {
                pts.push_back(dd_frac_double(dd_mul(theta, static_cast<double>(n))));
                ++count;
            }
        double disc = star_discrepancy(std::move(pts));
        full["average_abs"] = std::abs(out.average);
        full["star_discrepancy"] = disc;
        csv << "average_abs,star_discrepancy\n"
            << format_double(std::abs(out.average)) << ',' << format_double(disc) << '\n';
    } else if (mode_name == "lambda") {
        int64_t W = 1;
        for (int64_t p = 2; p <= w; ++p) {
            bool prime = true;
            for (int64_t d = 2; d * d <= p; ++d)
                if (p % d == 0) prime = false;
            if (prime) W *= p;
        }
        int64_t top = W * N + W;
        auto table = ArithTable::sieve_range(1, top);
        std::vector<cplx> values(static_cast<size_t>(top));
        for (int64_t n = 1; n < top; ++n)
            values[static_cast<size_t>(n - 1)] =
                e_of(dd_frac_double(dd_mul(theta, static_cast<double>(n))));
        auto out = prime_orbit_average(table, values, PrimeOrbitMode::lambda_weighted, N, w);
        full["W"] = out.W;
        full["average_re"] = out.average.real();
        full["average_im"] = out.average.imag();
        json rows = json::array();
        csv << "b,re,im\n";
        for (const auto& [b, v] : out.per_residue) {
            rows.push_back({{"b", b}, {"re", v.real()}, {"im", v.imag()}});
            csv << b << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
        }
        full["per_residue"] = rows;
    } else {
        throw CLI::ValidationError("--mode", "unknown mode '" + mode_name + "'");
    }
    emit(g, csv.str(), full);
    return 0;
}

int run_selftest(const GlobalOpts& g, int64_t N) {
    int suites_failed = 0;
    std::string first_failure;
    auto suite = [&](const char* name, auto&& body) {
        int64_t pass = 0, total = 0;
        std::string why;
        try {
            body(pass, total);
        } catch (const std::exception& e) {
            why = e.what();
        }
        bool ok = why.empty() && pass == total && total > 0;
        std::printf("%-28s %lld/%lld %s\n", name, static_cast<long long>(pass),
                    static_cast<long long>(total), ok ? "ok" : ("FAILED " + why).c_str());
        if (!ok) {
            ++suites_failed;
            if (first_failure.empty()) first_failure = name;
        }
    };

    auto table = ArithTable::sieve_range(1, N + 1);
    std::mt19937_64 rng(g.seed);

    suite("mobius-inversion", [&](int64_t& pass, int64_t& total) {
        std::vector<int32_t> divsum(static_cast<size_t>(N) + 1, 0);
        for (int64_t d = 1; d <= N; ++d) {
            int8_t m = table.mu(d);
            if (m == 0) continue;
            for (int64_t k = d; k <= N; k += d) divsum[static_cast<size_t>(k)] += m;
        }
        total = N;
        for (int64_t n = 1; n <= N; ++n)
            if (divsum[static_cast<size_t>(n)] == (n == 1 ? 1 : 0)) ++pass;
    });

    suite("lambda-two-path", [&](int64_t& pass, int64_t& total) {
        auto via = liouville_from_mobius(N);
        total = N;
        for (int64_t n = 1; n <= N; ++n)
            if (via[static_cast<size_t>(n - 1)] == table.lambda(n)) ++pass;
    });

    suite("segment-independence", [&](int64_t& pass, int64_t& total) {
        total = 20;
        for (int t = 0; t < 20; ++t) {
            int64_t k = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(N - 100));
            auto piece = ArithTable::sieve_range(k, k + 100);
            bool ok = true;
            for (int64_t n = k; n < k + 100; ++n)
                ok = ok && piece.mu(n) == table.mu(n) && piece.lambda(n) == table.lambda(n);
            if (ok) ++pass;
        }
    });

    suite("coefficient-roundtrip", [&](int64_t& pass, int64_t& total) {
        total = 50;
        for (int t = 0; t < 50; ++t) {
            int degree = 1 + static_cast<int>(rng() % 8);
            std::vector<Rational> alpha;
            for (int j = 0; j <= degree; ++j)
                alpha.emplace_back(static_cast<int64_t>(rng() % 40) - 20,
                                   static_cast<int64_t>(1 + rng() % 20));
            auto p = TorusPolynomial::from_binomial_exact(alpha);
            auto back = monomial_to_binomial(binomial_to_monomial(p).beta);
            bool ok = true;
            for (size_t j = 0; j < alpha.size(); ++j)
                ok = ok && back.exact_alpha()[j] == p.exact_alpha()[j];
            if (ok) ++pass;
        }
    });

    suite("bracket-identity", [&](int64_t& pass, int64_t& total) {
        int64_t top = std::min<int64_t>(N, 20'000);
        std::vector<std::pair<dd, dd>> pairs = {{dd_sqrt(2.0), dd_sqrt(3.0)},
                                                {dd_sqrt(2.0), dd_sqrt(2.0)}};
        std::uniform_real_distribution<double> u(0.0, 3.0);
        for (int i = 0; i < 3; ++i) pairs.emplace_back(dd(u(rng)), dd(u(rng)));
        total = static_cast<int64_t>(pairs.size()) * top;
        for (auto [a, b] : pairs)
            for (int64_t n = 1; n <= top; ++n)
                if (circle_dist(bracket_value(a, b, n) - reduce(orbit_point(a, b, n)).tau3()) <
                    1e-9)
                    ++pass;
    });

    suite("case2-containment", [&](int64_t& pass, int64_t& total) {
        int64_t top = std::min<int64_t>(N, 10'000);
        total = top;
        for (int64_t n = 1; n <= top; ++n) {
            case2_suborbit(dd_sqrt(2.0), n);  // throws off-segment
            ++pass;
        }
    });

    suite("character-orthogonality", [&](int64_t& pass, int64_t& total) {
        for (int64_t q = 1; q <= 50; ++q) {
            auto group = UnitGroupStructure::build(q);
            auto chars = all_characters(group);
            for (size_t i = 0; i < chars.size(); ++i)
                for (size_t j = 0; j < chars.size(); ++j) {
                    cplx acc{};
                    for (int64_t n = 0; n < q; ++n)
                        if (group->is_unit(n)) acc += chars[i](n) * std::conj(chars[j](n));
                    acc /= static_cast<double>(group->phi());
                    ++total;
                    if (std::abs(acc - (i == j ? cplx{1} : cplx{})) < 1e-12) ++pass;
                }
        }
    });

    suite("gcd-splitting", [&](int64_t& pass, int64_t& total) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        total = 5;
        for (int t = 0; t < 5; ++t) {
            auto q = static_cast<int64_t>(1 + rng() % 30);
            std::vector<cplx> f(static_cast<size_t>(q));
            for (auto& x : f) x = e_of(u(rng));
            mobius_periodic_correlation(f, table, std::min<int64_t>(N, 50'000));
            ++pass;  // throws on two-path disagreement
        }
    });

    suite("bilinear-vs-oracle", [&](int64_t& pass, int64_t& total) {
        const int64_t n0 = 1000;
        std::vector<cplx> f(static_cast<size_t>(2 * n0));
        for (size_t i = 0; i < f.size(); ++i)
            f[i] = e_of(dd_frac_double(dd_mul(dd_sqrt(2.0), static_cast<double>(i + 1))));
        auto t1 = type_I_statistic(f, n0, 10);
        for (const auto& [k, v] : t1.by_k) {
            ++total;
            if (std::abs(v - ref::type_I_direct(f, n0, k)) < 1e-12) ++pass;
        }
        ++total;
        if (std::abs(type_II_statistic(f, n0, 10, 25) - ref::type_II_quadrilinear(f, 10, 25)) <
            1e-12)
            ++pass;
    });

    suite("progression-vs-oracle", [&](int64_t& pass, int64_t& total) {
        const int64_t n0 = 300;
        std::vector<cplx> v(static_cast<size_t>(n0));
        for (int64_t n = 1; n <= n0; ++n)
            v[static_cast<size_t>(n - 1)] =
                e_of(dd_frac_double(dd_mul(dd_sqrt(2.0), static_cast<double>(n))));
        auto fast = total_equidistribution_estimate(v, 1.0, 8, 0.1);
        auto slow = ref::progression_scan_exhaustive(v, 1.0, 8, 0.1);
        total = 1;
        if (fast.delta_hat == slow.delta_hat) ++pass;
    });

    suite("weyl-vs-kahan", [&](int64_t& pass, int64_t& total) {
        total = 3;
        for (double theta : {std::sqrt(2.0), 0.5, 0.123456}) {
            auto p = TorusPolynomial::linear(theta);
            if (std::abs(weyl_sum(p, 5000) - ref::weyl_sum_direct(p, 5000)) < 1e-12) ++pass;
        }
    });

    if (suites_failed > 0)
        throw consistency_error(first_failure,
                                std::to_string(suites_failed) + " selftest suite(s) failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlation experiments for multiplicative functions against structured phases"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--threads", g.threads, "cap worker threads (0 = library default)");
    app.add_option("--output", g.output, "write result file here instead of stdout");
    app.add_option("--format", g.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--reproducible", g.reproducible, "suppress timestamps in output");
    app.add_option("--seed", g.seed, "seed for random test functions");

    // sieve
    auto* sieve = app.add_subcommand("sieve", "sieve arithmetic functions over a range");
    int64_t lo = 1, hi = 0;
    bool use_cache = false, verify = false;
    std::string out_bin;
    sieve->add_option("--lo", lo, "range start (inclusive)")->transform(ScientificInt);
    sieve->add_option("--hi", hi, "range end (exclusive)")->required()->transform(ScientificInt);
    sieve->add_flag("--cache", use_cache, "use NILCORR_CACHE_DIR binary cache");
    sieve->add_flag("--verify", verify, "cross-check a sample against trial division");
    sieve->add_option("--out", out_bin, "also write the binary table here");

    // correlate
    auto* corr = app.add_subcommand("correlate", "weighted correlation series over a ladder");
    std::string mode = "davenport", weight_name = "mobius", ladder_text = "1e3,1e4,1e5";
    std::string phase_tok = "sqrt2", alpha_tok = "sqrt2", beta_tok = "sqrt3", psi_name = "e";
    std::string poly_path, dump_orbit;
    corr->add_option("--mode", mode, "davenport | bracket | nilseq");
    corr->add_option("--weight", weight_name, "mobius | liouville")
        ->check(CLI::IsMember({"mobius", "liouville"}));
    corr->add_option("--ladder", ladder_text, "comma list of N values, ascending");
    corr->add_option("--phase", phase_tok, "phase token for davenport mode");
    corr->add_option("--alpha", alpha_tok, "bracket alpha token");
    corr->add_option("--beta", beta_tok, "bracket beta token");
    corr->add_option("--psi", psi_name, "bracket test function: e | tent | bump");
    corr->add_option("--poly", poly_path, "torus polynomial JSON for nilseq mode");
    corr->add_option("--dump-orbit", dump_orbit, "write reduced orbit CSV (bracket mode)");

    // typesums
    auto* ts = app.add_subcommand("typesums", "bilinear Type I / Type II statistics");
    int64_t ts_N = 100'000;
    double ts_threshold = 0.1;
    std::string ts_phase = "sqrt2";
    ts->add_option("--n", ts_N, "sample size N")->transform(ScientificInt);
    ts->add_option("--phase", ts_phase, "phase token");
    ts->add_option("--threshold", ts_threshold, "large/small classification threshold");

    // equidist
    auto* eq = app.add_subcommand("equidist", "progression-maximising equidistribution scan");
    int64_t eq_N = 10'000, eq_qmax = 20, eq_kmax = 0;
    double eq_minfrac = 0.1;
    bool eq_bracket = false;
    std::string eq_phase = "sqrt2", eq_alpha = "sqrt2", eq_beta = "sqrt3", eq_dump;
    eq->add_option("--n", eq_N, "sample size N")->transform(ScientificInt);
    eq->add_option("--phase", eq_phase, "phase token for the linear orbit");
    eq->add_flag("--bracket", eq_bracket, "scan the bracket orbit instead of a linear phase");
    eq->add_option("--alpha", eq_alpha, "bracket alpha token");
    eq->add_option("--beta", eq_beta, "bracket beta token");
    eq->add_option("--qmax", eq_qmax, "largest progression step")->transform(ScientificInt);
    eq->add_option("--minfrac", eq_minfrac, "progression length floor as a fraction of N");
    eq->add_option("--kmax", eq_kmax, "scan the character family e(kx) up to this k (0 = e(x) only)")->transform(ScientificInt);
    eq->add_option("--dump-orbit", eq_dump, "write reduced orbit CSV");

    // dichotomy
    auto* dich = app.add_subcommand("dichotomy", "obstruction search for torus sequences");
    int64_t d_N = 10'000, d_kmax = 20;
    double d_threshold = 0.1;
    std::string d_phase = "sqrt2", d_phase2;
    dich->add_option("--n", d_N, "sample size N")->transform(ScientificInt);
    dich->add_option("--kmax", d_kmax, "frequency box size")->transform(ScientificInt);
    dich->add_option("--threshold", d_threshold, "obstruction threshold");
    dich->add_option("--phase", d_phase, "first component phase token");
    dich->add_option("--phase2", d_phase2, "optional second component (two-torus)");

    // char
    auto* ch = app.add_subcommand("char", "unit group and character analysis mod q");
    int64_t c_q = 15, c_N = 0;
    bool c_plancherel = false;
    ch->add_option("--q", c_q, "modulus")->required()->transform(ScientificInt);
    ch->add_flag("--plancherel", c_plancherel, "verify Plancherel/inversion on random data");
    ch->add_option("--correlate", c_N, "also correlate mu against every character up to N")->transform(ScientificInt);

    // prime-orbit
    auto* po = app.add_subcommand("prime-orbit", "orbit averages along the primes");
    int64_t p_N = 100'000, p_w = 5;
    std::string p_phase = "sqrt2", p_mode = "nth-prime";
    po->add_option("--n", p_N, "number of primes (nth-prime) or steps per class (lambda)")->transform(ScientificInt);
    po->add_option("--phase", p_phase, "phase token");
    po->add_option("--mode", p_mode, "nth-prime | lambda");
    po->add_option("--w", p_w, "W-trick smoothness cut (lambda mode)")->transform(ScientificInt);

    // selftest
    auto* st = app.add_subcommand("selftest", "run the exact-identity suites");
    int64_t st_N = 100'000;
    st->add_option("--n", st_N, "size parameter for the identity suites")->transform(ScientificInt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

#ifdef _OPENMP
    if (g.threads > 0) omp_set_num_threads(g.threads);
#endif

    try {
        if (*sieve) {
            if (hi <= lo) throw CLI::ValidationError("--hi", "need lo < hi");
            return run_sieve(g, lo, hi, use_cache, verify, out_bin);
        }
        if (*corr)
            return run_correlate(g, mode, weight_name, ladder_text, phase_tok, alpha_tok,
                                 beta_tok, psi_name, poly_path, dump_orbit);
        if (*ts) return run_typesums(g, ts_N, ts_phase, ts_threshold);
        if (*eq)
            return run_equidist(g, eq_N, eq_phase, eq_bracket, eq_alpha, eq_beta, eq_qmax,
                                eq_minfrac, eq_kmax, eq_dump);
        if (*dich) return run_dichotomy(g, d_N, d_kmax, d_threshold, d_phase, d_phase2);
        if (*ch) return run_char(g, c_q, c_plancherel, c_N);
        if (*po) return run_prime_orbit(g, p_N, p_phase, p_mode, p_w);
        if (*st) return run_selftest(g, st_N);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const consistency_error& e) {
        std::fprintf(stderr, "internal consistency failure [%s]: %s\n", e.identity.c_str(),
                     e.what());
        return 4;
    } catch (const resource_error& e) {
        std::fprintf(stderr, "resource error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "argument error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
