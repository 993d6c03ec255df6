#include "vdm/moments.hpp"

#include "vdm/errors.hpp"
#include "vdm/quadrature.hpp"
#include "vdm/rng.hpp"
#include "vdm/summation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

namespace vdm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.141592653589793238462643383280;
}

MomentVector MomentVector::to_scaled() const {
    if (scaling == Scaling::Scaled) return *this;
    MomentVector out = *this;
    out.scaling = Scaling::Scaled;
    for (double& v : out.values) v *= c;
    return out;
}

MomentVector MomentVector::to_raw() const {
    if (scaling == Scaling::Raw) return *this;
    MomentVector out = *this;
    out.scaling = Scaling::Raw;
    for (double& v : out.values) v /= c;
    return out;
}

std::string MomentVector::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    for (int k = 1; k <= order(); ++k) {
        os << k << ',' << values[static_cast<std::size_t>(k - 1)] << ','
           << (scaling == Scaling::Scaled ? "scaled" : "raw") << ',' << c << '\n';
    }
    return os.str();
}

MomentVector MomentVector::from_csv(const std::string& text) {
    MomentVector out;
    out.values.clear();
    std::istringstream in(text);
    std::string line;
    std::map<int, double> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string order_s, value_s, scaling_s, c_s;
        if (!std::getline(ls, order_s, ',') || !std::getline(ls, value_s, ',') ||
            !std::getline(ls, scaling_s, ',') || !std::getline(ls, c_s, ',')) {
            throw domain_error("malformed moment CSV row: " + line);
        }
        rows[std::stoi(order_s)] = std::stod(value_s);
        out.scaling = (scaling_s == "raw") ? Scaling::Raw : Scaling::Scaled;
        out.c = std::stod(c_s);
    }
    for (auto& [k, v] : rows) {
        if (k != static_cast<int>(out.values.size()) + 1) throw domain_error("moment CSV orders must be 1..k");
        out.values.push_back(v);
    }
    return out;
}

DiagonalSpectrum DiagonalSpectrum::identity() {
    DiagonalSpectrum s;
    s.identity_ = true;
    return s;
}

DiagonalSpectrum DiagonalSpectrum::from_moments(std::vector<double> moments) {
    DiagonalSpectrum s;
    s.moments_ = std::move(moments);
    return s;
}

DiagonalSpectrum DiagonalSpectrum::from_eigenvalues(std::vector<double> eigenvalues) {
    DiagonalSpectrum s;
    s.eigenvalues_ = std::move(eigenvalues);
    return s;
}

DiagonalSpectrum DiagonalSpectrum::from_joint(std::function<double(const std::vector<int>&)> joint) {
    DiagonalSpectrum s;
    s.joint_ = std::move(joint);
    return s;
}

double DiagonalSpectrum::moment(int k) const {
    if (k < 1) throw domain_error("spectrum moment order must be positive");
    if (identity_) return 1.0;
    if (!eigenvalues_.empty()) {
        NeumaierSum acc;
        for (double ev : eigenvalues_) acc.add(std::pow(ev, k));
        return acc.value() / static_cast<double>(eigenvalues_.size());
    }
    if (!moments_.empty()) {
        if (k > static_cast<int>(moments_.size())) throw domain_error("spectrum moment order exceeds supplied list");
        return moments_[static_cast<std::size_t>(k - 1)];
    }
    if (joint_) {
        std::vector<int> positions(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) positions[static_cast<std::size_t>(i)] = i + 1;
        return joint_(positions);
    }
    return 1.0;
}

double DiagonalSpectrum::block_moment(const std::vector<int>& positions) const {
    if (joint_) return joint_(positions);
    return moment(static_cast<int>(positions.size()));
}

double DiagonalSpectrum::partition_product(const SetPartition& rho) const {
    double prod = 1.0;
    for (const auto& block : rho.blocks()) prod *= block_moment(block);
    return prod;
}

CoeffProvider::CoeffProvider(PhaseDistribution phase, Policy policy, McOptions mc, CoefficientCache* cache)
    : phase_(std::move(phase)), policy_(policy), mc_(mc), cache_(cache) {}

double CoeffProvider::block_count_integral(int k) const {
    if (k < 1) throw domain_error("I_k needs k >= 1");
    if (static_cast<int>(ik_cache_.size()) < k) ik_cache_.resize(static_cast<std::size_t>(k), 0.0);
    double& slot = ik_cache_[static_cast<std::size_t>(k - 1)];
    if (slot == 0.0) slot = density_power_integral(phase_, k);
    return slot;
}

ExpansionCoefficient CoeffProvider::uniform_coefficient(const SetPartition& rho) const {
    if (auto exact = coeff_uniform_exact(rho)) return *exact;
    if (cache_) {
        if (auto hit = cache_->get(rho)) {
            if (hit->kind != ExpansionCoefficient::Kind::McEstimate || hit->samples >= mc_.samples) return *hit;
        }
    }
    if (policy_ == Policy::ExactOnly) throw coefficient_unavailable(rho.to_text());

    // Stable per-partition seed so the table does not depend on evaluation order.
    std::uint64_t h = 1469598103934665603ULL;
    for (char ch : rho.to_text()) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ULL;
    McOptions opt = mc_;
    opt.seed = mc_.seed ^ h;
    ExpansionCoefficient est = coeff_uniform_mc(rho, opt);
    if (cache_) cache_->put(rho, est);
    return est;
}

ExpansionCoefficient CoeffProvider::coefficient(const SetPartition& rho) const {
    ExpansionCoefficient base = uniform_coefficient(rho);
    if (phase_.kind() == PhaseDistribution::Kind::Uniform) return base;
    if (!phase_.is_continuous_type()) {
        throw domain_error("expansion coefficients exist only for continuous phase distributions");
    }
    double ik = block_count_integral(rho.block_count());
    ExpansionCoefficient out = base;
    out.value = base.value * ik;
    out.stderr_value = base.stderr_value * ik;
    if (out.exact && ik != 1.0) out.exact.reset();
    return out;
}

double mixed_moment_asymptotic(int n, double c, const CoeffProvider& provider, const DiagonalSpectrum& spectrum) {
    if (n < 1 || n > 8) throw size_error("mixed_moment_asymptotic supports 1 <= n <= 8");
    if (c <= 0) throw domain_error("aspect ratio c must be positive");
    NeumaierSum acc;
    for_each_partition(n, [&](const SetPartition& rho) {
        ExpansionCoefficient k = provider.coefficient(rho);
        acc.add(k.value * std::pow(c, rho.block_count() - 1) * spectrum.partition_product(rho));
        return true;
    });
    return acc.value();
}

namespace {

double dval(const std::vector<double>& d, int k) {
    if (k > static_cast<int>(d.size())) throw domain_error("moment formulas need d_1..d_" + std::to_string(k));
    return d[static_cast<std::size_t>(k - 1)];
}

} // namespace

std::vector<double> moments_uniform_first7(const std::vector<double>& d, int order) {
    if (order < 1 || order > 7) throw size_error("moments_uniform_first7 supports order <= 7");
    std::vector<double> m;
    auto dk = [&](int k) { return dval(d, k); };
    const double d1 = dk(1);
    m.push_back(d1);
    if (order >= 2) m.push_back(dk(2) + d1 * d1);
    if (order >= 3) m.push_back(dk(3) + 3 * dk(2) * d1 + std::pow(d1, 3));
    if (order >= 4) {
        m.push_back(dk(4) + 4 * dk(3) * d1 + 8.0 / 3.0 * dk(2) * dk(2) + 6 * dk(2) * d1 * d1 + std::pow(d1, 4));
    }
    if (order >= 5) {
        m.push_back(dk(5) + 5 * dk(4) * d1 + 25.0 / 3.0 * dk(3) * dk(2) + 10 * dk(3) * d1 * d1 +
                    40.0 / 3.0 * dk(2) * dk(2) * d1 + 10 * dk(2) * std::pow(d1, 3) + std::pow(d1, 5));
    }
    if (order >= 6) {
        m.push_back(dk(6) + 6 * dk(5) * d1 + 12 * dk(4) * dk(2) + 15 * dk(4) * d1 * d1 +
                    151.0 / 20.0 * dk(3) * dk(3) + 50 * dk(3) * dk(2) * d1 + 20 * dk(3) * std::pow(d1, 3) +
                    11 * std::pow(dk(2), 3) + 40 * dk(2) * dk(2) * d1 * d1 + 15 * dk(2) * std::pow(d1, 4) +
                    std::pow(d1, 6));
    }
    if (order >= 7) {
        m.push_back(dk(7) + 7 * dk(6) * d1 + 49.0 / 3.0 * dk(5) * dk(2) + 21 * dk(5) * d1 * d1 +
                    497.0 / 20.0 * dk(4) * dk(3) + 84 * dk(4) * dk(2) * d1 + 35 * dk(4) * std::pow(d1, 3) +
                    1057.0 / 20.0 * dk(3) * dk(3) * d1 + 693.0 / 10.0 * dk(3) * dk(2) * dk(2) +
                    175 * dk(3) * dk(2) * d1 * d1 + 35 * dk(3) * std::pow(d1, 4) + 77 * std::pow(dk(2), 3) * d1 +
                    280.0 / 3.0 * dk(2) * dk(2) * std::pow(d1, 3) + 21 * dk(2) * std::pow(d1, 5) +
                    std::pow(d1, 7));
    }
    return m;
}

std::vector<double> moments_uniform_exact(const std::vector<double>& d, int N, int order) {
    if (order < 1 || order > 4) throw size_error("moments_uniform_exact supports order <= 4");
    if (N < 1) throw domain_error("N must be positive");
    const double rN = 1.0 / static_cast<double>(N);
    auto dk = [&](int k) { return dval(d, k); };
    std::vector<double> m;
    const double d1 = dk(1);
    m.push_back(d1);
    if (order >= 2) m.push_back((1 - rN) * dk(2) + d1 * d1);
    if (order >= 3) {
        m.push_back((1 - 3 * rN + 2 * rN * rN) * dk(3) + 3 * (1 - rN) * d1 * dk(2) + std::pow(d1, 3));
    }
    if (order >= 4) {
        m.push_back((1 - 20.0 / 3.0 * rN + 12 * rN * rN - 19.0 / 3.0 * rN * rN * rN) * dk(4) +
                    (4 - 12 * rN + 8 * rN * rN) * dk(3) * d1 +
                    (8.0 / 3.0 - 6 * rN + 10.0 / 3.0 * rN * rN) * dk(2) * dk(2) +
                    6 * (1 - rN) * dk(2) * d1 * d1 + std::pow(d1, 4));
    }
    return m;
}

SecondOrderMoment second_order_m22(const std::vector<double>& d) {
    auto dk = [&](int k) { return dval(d, k); };
    SecondOrderMoment out;
    out.i = 2;
    out.j = 2;
    out.value = dk(4) + 4 * dk(3) * dk(1) + 4.0 / 3.0 * dk(2) * dk(2) + 4 * dk(2) * dk(1) * dk(1);
    return out;
}

SecondOrderMoment second_order_moment(int i, int j, const std::vector<double>& d) {
    if (i < 1 || j < 1) throw domain_error("second-order moment orders must be positive");
    if (i == 1 || j == 1) return {i, j, 0.0};
    if (i == 2 && j == 2) return second_order_m22(d);
    throw size_error("second-order moments beyond (2,2) have no closed form here");
}

double moments_atomic(int n, double c, const std::vector<double>& masses,
                      const std::vector<double>& factor_traces) {
    if (n < 1) throw domain_error("moment order must be positive");
    if (static_cast<int>(factor_traces.size()) != n) {
        throw domain_error("moments_atomic needs one tr_L(D_i) per factor");
    }
    double mass_sum = 0.0;
    double pn = 0.0;
    for (double p : masses) {
        if (p <= 0) throw domain_error("atomic masses must be positive");
        mass_sum += p;
        pn += std::pow(p, n);
    }
    if (std::abs(mass_sum - 1.0) > 1e-9) throw domain_error("atomic masses must sum to 1");
    double prod = 1.0;
    for (double t : factor_traces) prod *= t;
    return std::pow(c, n - 1) * pn * prod;
}

namespace {

// One-sided normalizer of |t - x|^{-(1-s)} on [0,1]:
// int_0^1 |t-x|^{s-1} dt = (x^s + (1-x)^s)/s.
double edge_normalizer(double x, double s) { return (std::pow(x, s) + std::pow(1.0 - x, s)) / s; }

// Draw t ~ |t - x|^{s-1} / Z on [0,1].
double sample_edge(double x, double s, Rng& rng) {
    double left = std::pow(x, s);
    double right = std::pow(1.0 - x, s);
    double u = rng.uniform() * (left + right);
    double v = rng.uniform();
    if (u < left) {
        return x - x * std::pow(v, 1.0 / s);
    }
    return x + (1.0 - x) * std::pow(v, 1.0 / s);
}

} // namespace

QnEstimate compute_q_n(int n, double s, double mass_power_sum, std::int64_t samples, std::uint64_t seed,
                       int workers) {
    if (n < 2) throw domain_error("compute_q_n requires n >= 2 (the cyclic integrand degenerates at n = 1)");
    if (n > 6) throw size_error("compute_q_n supports n <= 6");
    if (s <= 0.0 || s >= 1.0) throw domain_error("compute_q_n requires 0 < s < 1");
    if (samples < 1) throw domain_error("compute_q_n needs samples >= 1");

    // Cycle edges (k, k+1), (n, 1); for n = 2 the two edges coincide, so the
    // integrand carries the factor once. Importance sampling walks the chain
    // and reweights the closing edge.
    constexpr std::int64_t kChunk = 1 << 13;
    const std::int64_t nchunks = (samples + kChunk - 1) / kChunk;
    std::vector<double> sums(static_cast<std::size_t>(nchunks), 0.0);
    std::vector<double> sums_sq(static_cast<std::size_t>(nchunks), 0.0);

    auto run_chunk = [&](std::int64_t chunk) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(chunk));
        std::int64_t count = std::min(kChunk, samples - chunk * kChunk);
        double sum = 0.0, sum_sq = 0.0;
        for (std::int64_t it = 0; it < count; ++it) {
            double x1 = rng.uniform();
            double w = 1.0;
            double prev = x1;
            for (int k = 2; k <= n; ++k) {
                w *= edge_normalizer(prev, s);
                prev = sample_edge(prev, s, rng);
            }
            if (n > 2) {
                double gap = std::abs(prev - x1);
                if (gap <= 0.0) continue;  // measure-zero closing coincidence
                w *= std::pow(gap, s - 1.0);
            }
            sum += w;
            sum_sq += w * w;
        }
        sums[static_cast<std::size_t>(chunk)] = sum;
        sums_sq[static_cast<std::size_t>(chunk)] = sum_sq;
    };

    workers = std::max(1, workers);
    if (workers == 1 || nchunks == 1) {
        for (std::int64_t chunk = 0; chunk < nchunks; ++chunk) run_chunk(chunk);
    } else {
        std::atomic<std::int64_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::int64_t chunk = next.fetch_add(1); chunk < nchunks; chunk = next.fetch_add(1)) {
                    run_chunk(chunk);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    NeumaierSum total, total_sq;
    for (std::int64_t chunk = 0; chunk < nchunks; ++chunk) {
        total.add(sums[static_cast<std::size_t>(chunk)]);
        total_sq.add(sums_sq[static_cast<std::size_t>(chunk)]);
    }
    QnEstimate out;
    out.samples = samples;
    out.integral = total.value() / static_cast<double>(samples);
    double var = std::max(0.0, total_sq.value() / static_cast<double>(samples) - out.integral * out.integral);
    out.integral_stderr = std::sqrt(var / static_cast<double>(samples));
    const double gamma_factor = 2.0 * std::tgamma(1.0 - s) * std::cos((1.0 - s) * kPi / 2.0);
    out.value = std::pow(gamma_factor, n) * mass_power_sum * out.integral;
    return out;
}

double moments_power_singular(int n, double c, const QnEstimate& qn, const std::vector<double>& factor_traces) {
    if (static_cast<int>(factor_traces.size()) != n) {
        throw domain_error("moments_power_singular needs one tr_L(D_i) per factor");
    }
    double prod = 1.0;
    for (double t : factor_traces) prod *= t;
    return std::pow(c, n - 1) * qn.value * prod;
}

double mixed_moments_two_vandermonde(int n, double c, const std::vector<double>& I) {
    if (n < 1 || n > 3) throw size_error("mixed_moments_two_vandermonde supports n <= 3");
    auto ik = [&](int k) {
        if (k - 2 >= static_cast<int>(I.size())) throw domain_error("need I_2..I_" + std::to_string(2 * n));
        return I[static_cast<std::size_t>(k - 2)];
    };
    switch (n) {
        case 1:
            return c * ik(2);
        case 2:
            return 2.0 / 3.0 * c * ik(2) + 2 * c * c * ik(3) + c * c * c * ik(4);
        default:
            return 11.0 / 20.0 * c * ik(2) + 4 * c * c * ik(3) + 9 * std::pow(c, 3) * ik(4) +
                   6 * std::pow(c, 4) * ik(5) + std::pow(c, 5) * ik(6);
    }
}

MultiVandermondeResult mixed_moments_multi_vandermonde(const std::vector<int>& word, double c,
                                                       const std::vector<PhaseDistribution>& phases,
                                                       const DiagonalSpectrum& spectrum,
                                                       const CoeffProvider& uniform_provider) {
    const int n = static_cast<int>(word.size());
    if (n < 1 || n > 8) throw size_error("mixed_moments_multi_vandermonde supports word lengths <= 8");
    int nlabels = 0;
    for (int label : word) {
        if (label < 1 || label > static_cast<int>(phases.size())) {
            throw domain_error("word labels must index the supplied phase list");
        }
        nlabels = std::max(nlabels, label);
    }
    for (const auto& ph : phases) {
        if (!ph.is_continuous_type()) {
            throw domain_error("independent-Vandermonde moments need continuous phase distributions");
        }
    }

    // Strictly alternating two-label word of odd length: the trace vanishes.
    if (n % 2 == 1 && nlabels >= 2) {
        bool alternating = true;
        for (int k = 0; k < n; ++k) {
            if (word[static_cast<std::size_t>(k)] != word[static_cast<std::size_t>(k % 2)]) alternating = false;
        }
        if (alternating && word[0] != word[1]) return {0.0, true};
    }

    // sigma groups positions with equal matrix labels
    std::map<int, std::vector<int>> label_positions;
    for (int k = 1; k <= n; ++k) label_positions[word[static_cast<std::size_t>(k - 1)]].push_back(k);
    std::vector<std::vector<int>> sigma_blocks;
    for (auto& [label, positions] : label_positions) sigma_blocks.push_back(positions);
    SetPartition sigma(n, sigma_blocks);

    NeumaierSum acc;
    for_each_partition(n, [&](const SetPartition& rho) {
        if (!refinement_leq(rho, sigma)) return true;
        ExpansionCoefficient ku = uniform_provider.uniform_coefficient(rho);

        // blocks of rho per matrix label
        std::map<int, int> blocks_per_label;
        for (const auto& block : rho.blocks()) {
            blocks_per_label[word[static_cast<std::size_t>(block.front() - 1)]] += 1;
        }
        auto integrand = [&](double x) {
            double prod = 1.0;
            for (auto [label, count] : blocks_per_label) {
                prod *= std::pow(phases[static_cast<std::size_t>(label - 1)].density_at(x), count);
            }
            return prod;
        };
        std::vector<double> cuts;
        for (auto [label, count] : blocks_per_label) {
            const auto& brk = phases[static_cast<std::size_t>(label - 1)].breakpoints();
            cuts.insert(cuts.end(), brk.begin(), brk.end());
        }
        double integral = integrate_piecewise(integrand, 0.0, kTwoPi, cuts);
        double weight = std::pow(kTwoPi, rho.block_count() - 1) * integral;

        acc.add(ku.value * std::pow(c, rho.block_count() - 1) * spectrum.partition_product(rho) * weight);
        return true;
    });
    return {acc.value(), false};
}

namespace {

// Stirling numbers of the second kind, S(n,k).
std::int64_t stirling2(int n, int k) {
    static std::map<std::pair<int, int>, std::int64_t> memo;
    if (k < 0 || k > n) return 0;
    if (n == 0 && k == 0) return 1;
    if (n == 0 || k == 0) return 0;
    auto key = std::make_pair(n, k);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::int64_t v = stirling2(n - 1, k - 1) + static_cast<std::int64_t>(k) * stirling2(n - 1, k);
    memo[key] = v;
    return v;
}

// Narayana numbers: noncrossing partitions of n with k blocks.
std::int64_t narayana(int n, int k) {
    Rational r = binomial_rational(n, k) * binomial_rational(n, k - 1) / Rational(n);
    return r.num();
}

} // namespace

std::pair<double, double> poisson_bounds(int n, double c) {
    if (n < 1 || n > 12) throw size_error("poisson_bounds supports n <= 12");
    if (c <= 0) throw domain_error("aspect ratio c must be positive");
    NeumaierSum fp, p;
    for (int k = 1; k <= n; ++k) {
        fp.add(static_cast<double>(narayana(n, k)) * std::pow(c, k - 1));
        p.add(static_cast<double>(stirling2(n, k)) * std::pow(c, k));
    }
    return {fp.value(), p.value() / c};
}

bool poisson_sandwich_holds(int n, double c) {
    auto [fp, pb] = poisson_bounds(n, c);
    CoeffProvider provider;  // uniform, exact table
    double vn = mixed_moment_asymptotic(n, c, provider, DiagonalSpectrum::identity());
    const double tol = 1e-9 * std::max(1.0, pb);
    return fp <= vn + tol && vn <= pb + tol;
}

double mp_atom_mass(double c) { return std::max(0.0, 1.0 - 1.0 / c); }

void mp_support(double c, double* a, double* b) {
    double sq = std::sqrt(c);
    if (a) *a = (1.0 - sq) * (1.0 - sq);
    if (b) *b = (1.0 + sq) * (1.0 + sq);
}

double mp_density(double c, double x) {
    if (c <= 0) throw domain_error("aspect ratio c must be positive");
    double a, b;
    mp_support(c, &a, &b);
    if (x <= a || x >= b || x <= 0.0) return 0.0;
    return std::sqrt((x - a) * (b - x)) / (2.0 * kPi * c * x);
}

std::vector<double> gaussian_moments_forward(const std::vector<double>& d, int order) {
    if (order < 1 || order > 12) throw size_error("gaussian_moments_forward supports order <= 12");
    std::vector<double> out;
    for (int n = 1; n <= order; ++n) {
        NeumaierSum acc;
        for_each_partition(n, [&](const SetPartition& rho) {
            if (!is_noncrossing(rho)) return true;
            double prod = 1.0;
            for (const auto& block : rho.blocks()) prod *= dval(d, static_cast<int>(block.size()));
            acc.add(prod);
            return true;
        });
        out.push_back(acc.value());
    }
    return out;
}

double gaussian_second_order_11(double c, double d2) { return c * d2; }

double gaussian_exact_m3(double d1, double d2, double d3, int N) {
    if (N < 1) throw domain_error("N must be positive");
    double rN2 = 1.0 / (static_cast<double>(N) * static_cast<double>(N));
    return (1.0 + rN2) * d3 + 3.0 * d1 * d2 + d1 * d1 * d1;
}

double gaussian_asymptotic_capacity(double rho_snr) {
    if (rho_snr < 0) throw domain_error("snr must be nonnegative");
    if (rho_snr == 0) return 0.0;
    double root = std::sqrt(4.0 * rho_snr + 1.0) - 1.0;
    return 2.0 * std::log2(1.0 + rho_snr - 0.25 * root * root) -
           std::log2(std::exp(1.0)) / (4.0 * rho_snr) * root * root;
}

bool moment_growth_check(int k) {
    if (k < 1 || k > 6) throw size_error("moment_growth_check supports k <= 6");
    // Uniform phase, c = 1: V_2 = 2, V_4 = 44/3, V_6 = 3571/20.
    const double even_moments[] = {2.0, 44.0 / 3.0, 3571.0 / 20.0};
    int count = std::min(k, 3);
    double prev = 0.0;
    for (int n = 1; n <= count; ++n) {
        double root = std::pow(even_moments[n - 1], 1.0 / static_cast<double>(n));
        if (root <= prev) return false;
        prev = root;
    }
    return true;
}

} // namespace vdm
