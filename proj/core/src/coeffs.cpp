#include "vdm/coeffs.hpp"

#include "vdm/errors.hpp"
#include "vdm/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

namespace vdm {

std::string ExpansionCoefficient::kind_name() const {
    switch (kind) {
        case Kind::ExactRational: return "exact-rational";
        case Kind::FiniteNRational: return "finite-N-rational";
        case Kind::McEstimate: return "mc-estimate";
    }
    return "?";
}

ExpansionCoefficient::Kind ExpansionCoefficient::kind_from_name(const std::string& name) {
    if (name == "exact-rational") return Kind::ExactRational;
    if (name == "finite-N-rational") return Kind::FiniteNRational;
    if (name == "mc-estimate") return Kind::McEstimate;
    throw domain_error("unknown coefficient kind: " + name);
}

namespace {

SetPartition remove_element(const SetPartition& p, int victim) {
    std::vector<std::vector<int>> blocks;
    for (const auto& b : p.blocks()) {
        std::vector<int> nb;
        for (int e : b) {
            if (e == victim) continue;
            nb.push_back(e > victim ? e - 1 : e);
        }
        if (!nb.empty()) blocks.push_back(std::move(nb));
    }
    return SetPartition(p.n() - 1, std::move(blocks));
}

SetPartition rotate_partition(const SetPartition& p, int shift) {
    const int n = p.n();
    std::vector<std::vector<int>> blocks;
    for (const auto& b : p.blocks()) {
        std::vector<int> nb;
        for (int e : b) nb.push_back((e - 1 + shift) % n + 1);
        blocks.push_back(std::move(nb));
    }
    return SetPartition(n, std::move(blocks));
}

SetPartition reflect_partition(const SetPartition& p) {
    const int n = p.n();
    std::vector<std::vector<int>> blocks;
    for (const auto& b : p.blocks()) {
        std::vector<int> nb;
        for (int e : b) nb.push_back(n + 1 - e);
        blocks.push_back(std::move(nb));
    }
    return SetPartition(n, std::move(blocks));
}

// Known crossing cores, keyed by dihedral-canonical text per ground-set size.
// Built from the cyclic-shift family (exact integrals of the convolution
// polynomials) plus the three crossing cores that are not cyclic shifts.
const std::map<std::string, Rational>& known_cores(int n) {
    static std::mutex mu;
    static std::map<int, std::map<std::string, Rational>> tables;
    std::lock_guard<std::mutex> lock(mu);
    auto it = tables.find(n);
    if (it != tables.end()) return it->second;

    std::map<std::string, Rational> table;
    for (int m = 2; m <= n / 2; ++m) {
        if (n % m != 0) continue;
        int q = n / m;
        if (q < 2) continue;
        std::vector<std::vector<int>> blocks(static_cast<std::size_t>(q));
        for (int e = 1; e <= n; ++e) blocks[static_cast<std::size_t>((e - 1) % q)].push_back(e);
        SetPartition sigma(n, std::move(blocks));
        table[dihedral_canonical_text(sigma)] = cyclic_shift_coefficient(m, q);
    }
    if (n == 6) {
        table[dihedral_canonical_text(SetPartition::from_text("1,4/2,6/3,5"))] = Rational(1, 2);
    }
    if (n == 7) {
        table[dihedral_canonical_text(SetPartition::from_text("1,5/3,7/2,4,6"))] = Rational(9, 20);
        table[dihedral_canonical_text(SetPartition::from_text("1,6/2,4/3,5,7"))] = Rational(9, 20);
    }
    return tables.emplace(n, std::move(table)).first->second;
}

struct McAccumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t count = 0;
};

// Deterministic chunked Monte Carlo: chunk c uses Rng::stream(seed, c) and
// partial sums combine in chunk order whatever the worker count.
McAccumulator run_chunked_mc(std::int64_t samples, std::uint64_t seed, int workers,
                             const std::function<double(Rng&)>& one_sample) {
    constexpr std::int64_t kChunk = 1 << 14;
    const std::int64_t nchunks = (samples + kChunk - 1) / kChunk;
    std::vector<McAccumulator> partials(static_cast<std::size_t>(nchunks));

    auto run_chunk = [&](std::int64_t c) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(c));
        std::int64_t count = std::min(kChunk, samples - c * kChunk);
        McAccumulator acc;
        for (std::int64_t s = 0; s < count; ++s) {
            double v = one_sample(rng);
            acc.sum += v;
            acc.sum_sq += v * v;
        }
        acc.count = count;
        partials[static_cast<std::size_t>(c)] = acc;
    };

    workers = std::max(1, workers);
    if (workers == 1 || nchunks == 1) {
        for (std::int64_t c = 0; c < nchunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::int64_t> next{0};
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::int64_t c = next.fetch_add(1); c < nchunks; c = next.fetch_add(1)) run_chunk(c);
            });
        }
        for (auto& t : pool) t.join();
    }

    McAccumulator total;
    for (const auto& p : partials) {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
        total.count += p.count;
    }
    return total;
}

ExpansionCoefficient finish_mc(const McAccumulator& acc) {
    double mean = acc.sum / static_cast<double>(acc.count);
    double var = std::max(0.0, acc.sum_sq / static_cast<double>(acc.count) - mean * mean);
    double se = std::sqrt(var / static_cast<double>(acc.count));
    return ExpansionCoefficient::mc(mean, se, acc.count);
}

} // namespace

std::string dihedral_canonical_text(const SetPartition& p) {
    std::string best;
    for (int reflected = 0; reflected < 2; ++reflected) {
        SetPartition base = reflected ? reflect_partition(p) : p;
        for (int shift = 0; shift < p.n(); ++shift) {
            std::string text = rotate_partition(base, shift).to_text();
            if (best.empty() || text < best) best = text;
        }
    }
    return best;
}

SetPartition reduce_partition(const SetPartition& p) {
    SetPartition cur = p;
    bool changed = true;
    while (changed && cur.n() > 1) {
        changed = false;
        const int n = cur.n();
        // omit k when k and its cyclic successor share a block
        for (int k = 1; k <= n; ++k) {
            int succ = (k % n) + 1;
            if (succ != k && cur.block_of(k) == cur.block_of(succ)) {
                cur = remove_element(cur, k);
                changed = true;
                break;
            }
        }
        if (changed) continue;
        // elide singleton blocks (the equation glues the two neighbours)
        for (const auto& b : cur.blocks()) {
            if (b.size() == 1) {
                cur = remove_element(cur, b.front());
                changed = true;
                break;
            }
        }
    }
    return cur;
}

std::optional<ExpansionCoefficient> coeff_uniform_exact(const SetPartition& rho) {
    if (is_noncrossing(rho)) return ExpansionCoefficient::exact_rational(Rational(1));
    SetPartition core = reduce_partition(rho);
    if (is_noncrossing(core)) return ExpansionCoefficient::exact_rational(Rational(1));
    const auto& table = known_cores(core.n());
    auto it = table.find(dihedral_canonical_text(core));
    if (it == table.end()) return std::nullopt;
    return ExpansionCoefficient::exact_rational(it->second);
}

ExpansionCoefficient coeff_uniform_mc(const SetPartition& rho, const McOptions& opt) {
    if (opt.samples < 10000) throw domain_error("coeff_uniform_mc needs at least 1e4 samples");
    BalanceSystem sys = solve_balance_system(rho);
    if (sys.dependents.empty()) return ExpansionCoefficient::exact_rational(Rational(1));

    std::vector<int> free_pos(static_cast<std::size_t>(sys.n), -1);
    for (std::size_t i = 0; i < sys.free_vars.size(); ++i) {
        free_pos[static_cast<std::size_t>(sys.free_vars[i] - 1)] = static_cast<int>(i);
    }
    auto one = [&sys, &free_pos](Rng& rng) {
        std::vector<double> x(sys.free_vars.size());
        for (auto& v : x) v = rng.uniform();
        for (const auto& dep : sys.dependents) {
            double v = 0.0;
            for (auto [var, coef] : dep.combo) {
                v += static_cast<double>(coef) * x[static_cast<std::size_t>(free_pos[static_cast<std::size_t>(var - 1)])];
            }
            if (v < 0.0 || v > 1.0) return 0.0;
        }
        return 1.0;
    };

    McAccumulator acc = run_chunked_mc(opt.samples, opt.seed, opt.workers, one);
    // Bernoulli mean: report the binomial proportion standard error.
    double p = acc.sum / static_cast<double>(acc.count);
    double se = std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(acc.count));
    return ExpansionCoefficient::mc(p, se, acc.count);
}

ExpansionCoefficient coeff_uniform_finite_N(const SetPartition& rho, int N) {
    if (N < 1 || N > 256) throw size_error("coeff_uniform_finite_N supports 1 <= N <= 256");
    BalanceSystem sys = solve_balance_system(rho);
    const int free_dim = sys.free_dimension();
    if (free_dim > 4) throw size_error("coeff_uniform_finite_N free dimension exceeds 4");

    std::vector<int> free_pos(static_cast<std::size_t>(sys.n), -1);
    for (std::size_t i = 0; i < sys.free_vars.size(); ++i) {
        free_pos[static_cast<std::size_t>(sys.free_vars[i] - 1)] = static_cast<int>(i);
    }

    std::int64_t hits = 0;
    std::vector<std::int64_t> idx(static_cast<std::size_t>(free_dim), 0);
    while (true) {
        bool ok = true;
        for (const auto& dep : sys.dependents) {
            std::int64_t v = 0;
            for (auto [var, coef] : dep.combo) {
                v += coef * idx[static_cast<std::size_t>(free_pos[static_cast<std::size_t>(var - 1)])];
            }
            if (v < 0 || v >= N) {
                ok = false;
                break;
            }
        }
        if (ok) ++hits;

        int d = 0;
        for (; d < free_dim; ++d) {
            if (++idx[static_cast<std::size_t>(d)] < N) break;
            idx[static_cast<std::size_t>(d)] = 0;
        }
        if (d == free_dim) break;
    }

    Rational denom(1);
    for (int i = 0; i < free_dim; ++i) denom *= Rational(N);
    return ExpansionCoefficient::exact_rational(Rational(hits) / denom,
                                                ExpansionCoefficient::Kind::FiniteNRational);
}

ExpansionCoefficient coeff_density(const SetPartition& rho, const PhaseDistribution& omega,
                                   const ExpansionCoefficient& uniform_coeff) {
    if (!omega.is_continuous_type()) {
        throw domain_error("coeff_density requires a continuous phase distribution; "
                           "use the atomic/singular moment operations instead");
    }
    double ik = density_power_integral(omega, rho.block_count());
    ExpansionCoefficient out = uniform_coeff;
    out.value = uniform_coeff.value * ik;
    out.stderr_value = uniform_coeff.stderr_value * ik;
    if (out.exact && ik != 1.0) out.exact.reset();  // deterministic but no longer rational
    return out;
}

double density_power_integral(const PhaseDistribution& omega, int k) {
    if (omega.kind() == PhaseDistribution::Kind::SinOfUniform && (k == 2 || k == 3)) {
        double d = omega.sin_d(), lambda = omega.sin_lambda(), alpha = omega.sin_alpha();
        return k == 2 ? sin_family_I2_closed_form(d, lambda, alpha)
                      : sin_family_I3_closed_form(d, lambda, alpha);
    }
    return omega.power_integral(k);
}

ExpansionCoefficient coeff_generalized(const SetPartition& rho, const PowerDistribution& power,
                                       const McOptions& opt) {
    if (power.is_uniform()) return coeff_uniform_mc(rho, opt);
    if (opt.samples < 10000) throw domain_error("coeff_generalized needs at least 1e4 samples");

    BalanceSystem sys = solve_balance_system(rho);
    std::vector<int> free_pos(static_cast<std::size_t>(sys.n), -1);
    for (std::size_t i = 0; i < sys.free_vars.size(); ++i) {
        free_pos[static_cast<std::size_t>(sys.free_vars[i] - 1)] = static_cast<int>(i);
    }
    if (sys.dependents.empty()) return ExpansionCoefficient::exact_rational(Rational(1));

    auto one = [&](Rng& rng) {
        std::vector<double> x(sys.free_vars.size());
        for (auto& v : x) v = power.sample(rng);
        double weight = 1.0;
        for (const auto& dep : sys.dependents) {
            double v = 0.0;
            for (auto [var, coef] : dep.combo) {
                v += static_cast<double>(coef) * x[static_cast<std::size_t>(free_pos[static_cast<std::size_t>(var - 1)])];
            }
            if (v < 0.0 || v >= 1.0) return 0.0;
            weight *= power.density_at(v);
        }
        return weight;
    };

    return finish_mc(run_chunked_mc(opt.samples, opt.seed, opt.workers, one));
}

ExpansionCoefficient coeff_second_order(const SetPartition& rho, int i, int j, const McOptions& opt) {
    BalanceSystem sys = solve_balance_system_second_order(rho, i, j);  // validates mixing
    if (i == 2 && j == 2) {
        // Exact values: the two crossing-type systems have
        // volume 2/3, the other nine partitions of P(2,2) have volume 1.
        std::string text = rho.to_text();
        if (text == "1,3/2,4" || text == "1,4/2,3") {
            return ExpansionCoefficient::exact_rational(Rational(2, 3));
        }
        return ExpansionCoefficient::exact_rational(Rational(1));
    }
    if (sys.dependents.empty()) return ExpansionCoefficient::exact_rational(Rational(1));

    std::vector<int> free_pos(static_cast<std::size_t>(sys.n), -1);
    for (std::size_t fi = 0; fi < sys.free_vars.size(); ++fi) {
        free_pos[static_cast<std::size_t>(sys.free_vars[fi] - 1)] = static_cast<int>(fi);
    }
    auto one = [&](Rng& rng) {
        std::vector<double> x(sys.free_vars.size());
        for (auto& v : x) v = rng.uniform();
        for (const auto& dep : sys.dependents) {
            double v = 0.0;
            for (auto [var, coef] : dep.combo) {
                v += static_cast<double>(coef) * x[static_cast<std::size_t>(free_pos[static_cast<std::size_t>(var - 1)])];
            }
            if (v < 0.0 || v > 1.0) return 0.0;
        }
        return 1.0;
    };
    McAccumulator acc = run_chunked_mc(opt.samples, opt.seed, opt.workers, one);
    double p = acc.sum / static_cast<double>(acc.count);
    double se = std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(acc.count));
    return ExpansionCoefficient::mc(p, se, acc.count);
}

} // namespace vdm
