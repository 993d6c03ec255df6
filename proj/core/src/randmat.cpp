#include "vdm/randmat.hpp"

#include "vdm/errors.hpp"
#include "vdm/moments.hpp"
#include "vdm/summation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

namespace vdm {

void SimConfig::validate() const {
    if (N < 1 || L < 1 || K < 1) throw domain_error("simulation dimensions must be positive");
    if (sigma < 0) throw domain_error("noise level must be nonnegative");
    if (samples < 1) throw domain_error("sample count must be >= 1");
    if (!powers.empty() && static_cast<int>(powers.size()) != L) {
        throw domain_error("power diagonal must have length L");
    }
}

std::vector<double> SimConfig::power_diagonal() const {
    if (!powers.empty()) return powers;
    return std::vector<double>(static_cast<std::size_t>(L), 1.0);
}

ComplexMatrix sample_vandermonde(int N, int L, const PhaseDistribution& omega, Rng& rng) {
    if (N < 1 || L < 1) throw domain_error("matrix dimensions must be positive");
    ComplexMatrix v(N, L);
    const double norm = 1.0 / std::sqrt(static_cast<double>(N));
    for (int c = 0; c < L; ++c) {
        double w = omega.sample(rng);
        // entries evaluated directly so every one has unit modulus; a
        // geometric recurrence drifts off the circle over hundreds of rows
        for (int r = 0; r < N; ++r) {
            double angle = -static_cast<double>(r) * w;
            v.at(r, c) = norm * cplx(std::cos(angle), std::sin(angle));
        }
    }
    return v;
}

ComplexMatrix sample_generalized_vandermonde(int N, int L, const PhaseDistribution& omega,
                                             const PowerDistribution& power, Rng& rng) {
    if (N < 1 || L < 1) throw domain_error("matrix dimensions must be positive");
    // Row exponents: deterministic floor(N f(r/N)) or random N*lambda_r.
    std::vector<double> exponents(static_cast<std::size_t>(N));
    if (power.has_deterministic_f()) {
        for (int r = 0; r < N; ++r) {
            exponents[static_cast<std::size_t>(r)] =
                std::floor(static_cast<double>(N) * power.f_at(static_cast<double>(r) / N));
        }
    } else {
        for (int r = 0; r < N; ++r) exponents[static_cast<std::size_t>(r)] = static_cast<double>(N) * power.sample(rng);
    }
    ComplexMatrix v(N, L);
    const double norm = 1.0 / std::sqrt(static_cast<double>(N));
    for (int c = 0; c < L; ++c) {
        double w = omega.sample(rng);
        for (int r = 0; r < N; ++r) {
            double angle = -exponents[static_cast<std::size_t>(r)] * w;
            v.at(r, c) = norm * cplx(std::cos(angle), std::sin(angle));
        }
    }
    return v;
}

ComplexMatrix sample_complex_gaussian(int rows, int cols, Rng& rng) {
    ComplexMatrix m(rows, cols);
    const double scale = 1.0 / std::sqrt(2.0);  // unit variance per complex entry
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m.at(r, c) = cplx(rng.normal() * scale, rng.normal() * scale);
    }
    return m;
}

std::vector<double> gram_trace_moments(const ComplexMatrix& v, const std::vector<double>& diag, int k) {
    if (k < 1 || k > 7) throw size_error("gram_trace_moments supports 1 <= k <= 7");
    const int L = v.cols();
    if (!diag.empty() && static_cast<int>(diag.size()) != L) {
        throw domain_error("diagonal length must match the column count");
    }

    ComplexMatrix m = v.gram();  // L x L, O(L^2 N)
    if (!diag.empty()) {
        // A = D M: scale rows of M by diag
        for (int r = 0; r < L; ++r) {
            for (int c = 0; c < L; ++c) m.at(r, c) *= diag[static_cast<std::size_t>(r)];
        }
    }

    // Power ladder: traces up to 7 need A^2, A^3 and A^4 = (A^2)^2 only;
    // odd/even traces come from Frobenius pairings tr(A^a A^b).
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k));
    const double inv_l = 1.0 / static_cast<double>(L);

    out.push_back(m.trace_real() * inv_l);
    if (k >= 2) {
        ComplexMatrix m2 = m.multiply(m);
        out.push_back(m2.trace_real() * inv_l);
        if (k >= 3) {
            ComplexMatrix m3 = m2.multiply(m);
            out.push_back(m3.trace_real() * inv_l);
            // tr(A^{a+b}) = sum_ij (A^a)_ji (A^b)_ij = <(A^a)^H, A^b>_F
            if (k >= 4) out.push_back(m2.adjoint().frobenius_inner(m2) * inv_l);
            if (k >= 5) out.push_back(m2.adjoint().frobenius_inner(m3) * inv_l);
            if (k >= 6) out.push_back(m3.adjoint().frobenius_inner(m3) * inv_l);
            if (k >= 7) {
                ComplexMatrix m4 = m2.multiply(m2);
                out.push_back(m3.adjoint().frobenius_inner(m4) * inv_l);
            }
        }
    }
    return out;
}

namespace {

// tr(W^j) for j = 1..order where W = (1/K) Y Y^H, via G = Y^H Y (K x K):
// tr(W^j) = tr(G^j) / K^j.
std::vector<double> covariance_traces_from_y(const ComplexMatrix& y, int K, int normalize_dim, int order) {
    ComplexMatrix g = y.gram();  // K x K
    std::vector<double> traces;
    ComplexMatrix cur = g;
    for (int j = 1; j <= order; ++j) {
        traces.push_back(cur.trace_real() / std::pow(static_cast<double>(K), j) /
                         static_cast<double>(normalize_dim));
        if (j < order) cur = cur.multiply(g);
    }
    return traces;
}

} // namespace

ComplexMatrix sample_observation_covariance(const SimConfig& cfg, bool transposed, Rng& rng) {
    cfg.validate();
    ComplexMatrix v = sample_vandermonde(cfg.N, cfg.L, cfg.phase, rng);

    ComplexMatrix y;
    if (!transposed) {
        // Y = V P^{1/2} S + noise, N x K
        ComplexMatrix s = sample_complex_gaussian(cfg.L, cfg.K, rng);
        std::vector<double> sqrt_p = cfg.power_diagonal();
        for (double& x : sqrt_p) x = std::sqrt(x);
        for (int r = 0; r < cfg.L; ++r) {
            for (int c = 0; c < cfg.K; ++c) s.at(r, c) *= sqrt_p[static_cast<std::size_t>(r)];
        }
        y = v.multiply(s);
    } else {
        // Y = V^T S + noise, L x K (no power matrix in the transposed model)
        ComplexMatrix s = sample_complex_gaussian(cfg.N, cfg.K, rng);
        ComplexMatrix vt(cfg.L, cfg.N);
        for (int r = 0; r < cfg.N; ++r) {
            for (int c = 0; c < cfg.L; ++c) vt.at(c, r) = v.at(r, c);
        }
        y = vt.multiply(s);
    }
    if (cfg.sigma > 0) {
        ComplexMatrix noise = sample_complex_gaussian(y.rows(), y.cols(), rng);
        for (int r = 0; r < y.rows(); ++r) {
            for (int c = 0; c < y.cols(); ++c) y.at(r, c) += cfg.sigma * noise.at(r, c);
        }
    }

    ComplexMatrix yh = y.adjoint();
    ComplexMatrix w = y.multiply(yh);
    w.scale(1.0 / static_cast<double>(cfg.K));
    return w;
}

std::vector<double> sample_covariance_trace_moments(const SimConfig& cfg, bool transposed, int order, Rng& rng) {
    cfg.validate();
    ComplexMatrix v = sample_vandermonde(cfg.N, cfg.L, cfg.phase, rng);
    ComplexMatrix y;
    int normalize_dim;
    if (!transposed) {
        ComplexMatrix s = sample_complex_gaussian(cfg.L, cfg.K, rng);
        std::vector<double> sqrt_p = cfg.power_diagonal();
        for (double& x : sqrt_p) x = std::sqrt(x);
        for (int r = 0; r < cfg.L; ++r) {
            for (int c = 0; c < cfg.K; ++c) s.at(r, c) *= sqrt_p[static_cast<std::size_t>(r)];
        }
        y = v.multiply(s);
        normalize_dim = cfg.N;
    } else {
        ComplexMatrix s = sample_complex_gaussian(cfg.N, cfg.K, rng);
        ComplexMatrix vt(cfg.L, cfg.N);
        for (int r = 0; r < cfg.N; ++r) {
            for (int c = 0; c < cfg.L; ++c) vt.at(c, r) = v.at(r, c);
        }
        y = vt.multiply(s);
        normalize_dim = cfg.L;
    }
    if (cfg.sigma > 0) {
        ComplexMatrix noise = sample_complex_gaussian(y.rows(), y.cols(), rng);
        for (int r = 0; r < y.rows(); ++r) {
            for (int c = 0; c < y.cols(); ++c) y.at(r, c) += cfg.sigma * noise.at(r, c);
        }
    }
    return covariance_traces_from_y(y, cfg.K, normalize_dim, order);
}

namespace {

// Deterministic sample-parallel averaging: per-sample RNG streams derived
// from (seed, sample index), partial sums per fixed chunk, combined in chunk
// order whatever the worker count.
MomentStats averaged_stats(std::int64_t samples, int order, int workers, std::uint64_t seed,
                           const std::function<std::vector<double>(Rng&)>& one_sample) {
    constexpr std::int64_t kChunk = 256;
    const std::int64_t nchunks = (samples + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> sums(static_cast<std::size_t>(nchunks));
    std::vector<std::vector<double>> sums_sq(static_cast<std::size_t>(nchunks));

    auto run_chunk = [&](std::int64_t chunk) {
        std::vector<double> sum(static_cast<std::size_t>(order), 0.0);
        std::vector<double> sum_sq(static_cast<std::size_t>(order), 0.0);
        std::int64_t begin = chunk * kChunk;
        std::int64_t end = std::min(samples, begin + kChunk);
        for (std::int64_t s = begin; s < end; ++s) {
            Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s));
            std::vector<double> vals = one_sample(rng);
            for (int j = 0; j < order; ++j) {
                sum[static_cast<std::size_t>(j)] += vals[static_cast<std::size_t>(j)];
                sum_sq[static_cast<std::size_t>(j)] += vals[static_cast<std::size_t>(j)] * vals[static_cast<std::size_t>(j)];
            }
        }
        sums[static_cast<std::size_t>(chunk)] = std::move(sum);
        sums_sq[static_cast<std::size_t>(chunk)] = std::move(sum_sq);
    };

    workers = std::max(1, workers);
    if (workers == 1 || nchunks == 1) {
        for (std::int64_t chunk = 0; chunk < nchunks; ++chunk) run_chunk(chunk);
    } else {
        std::atomic<std::int64_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::int64_t c = next.fetch_add(1); c < nchunks; c = next.fetch_add(1)) run_chunk(c);
            });
        }
        for (auto& t : pool) t.join();
    }

    MomentStats stats;
    stats.samples = samples;
    stats.mean.assign(static_cast<std::size_t>(order), 0.0);
    stats.stderr_of_mean.assign(static_cast<std::size_t>(order), 0.0);
    for (int j = 0; j < order; ++j) {
        NeumaierSum total, total_sq;
        for (std::int64_t chunk = 0; chunk < nchunks; ++chunk) {
            total.add(sums[static_cast<std::size_t>(chunk)][static_cast<std::size_t>(j)]);
            total_sq.add(sums_sq[static_cast<std::size_t>(chunk)][static_cast<std::size_t>(j)]);
        }
        double mean = total.value() / static_cast<double>(samples);
        double var = std::max(0.0, total_sq.value() / static_cast<double>(samples) - mean * mean);
        stats.mean[static_cast<std::size_t>(j)] = mean;
        stats.stderr_of_mean[static_cast<std::size_t>(j)] = std::sqrt(var / static_cast<double>(samples));
    }
    return stats;
}

} // namespace

MomentStats averaged_gram_moments(const SimConfig& cfg, int order) {
    cfg.validate();
    std::vector<double> diag = cfg.powers;  // empty = identity
    return averaged_stats(cfg.samples, order, cfg.workers, cfg.seed, [&](Rng& rng) {
        ComplexMatrix v = sample_vandermonde(cfg.N, cfg.L, cfg.phase, rng);
        return gram_trace_moments(v, diag, order);
    });
}

MomentStats averaged_covariance_moments(const SimConfig& cfg, bool transposed, int order) {
    cfg.validate();
    return averaged_stats(cfg.samples, order, cfg.workers, cfg.seed, [&](Rng& rng) {
        return sample_covariance_trace_moments(cfg, transposed, order, rng);
    });
}

SecondOrderStats sampled_second_order(const SimConfig& cfg, int i, int j, int batch_count) {
    cfg.validate();
    if (batch_count < 2) throw domain_error("sampled_second_order needs at least 2 batches");
    const std::int64_t per_batch = cfg.samples / batch_count;
    if (per_batch < 2) throw domain_error("sampled_second_order needs >= 2 samples per batch");

    std::vector<double> diag = cfg.powers;
    const int order = std::max(i, j);
    std::vector<double> batch_values(static_cast<std::size_t>(batch_count), 0.0);

    auto run_batch = [&](int b) {
        NeumaierSum sum_i, sum_j, sum_ij;
        for (std::int64_t s = 0; s < per_batch; ++s) {
            Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(b) * 1000003ULL + static_cast<std::uint64_t>(s));
            ComplexMatrix v = sample_vandermonde(cfg.N, cfg.L, cfg.phase, rng);
            std::vector<double> tr = gram_trace_moments(v, diag, order);
            double ti = tr[static_cast<std::size_t>(i - 1)];
            double tj = tr[static_cast<std::size_t>(j - 1)];
            sum_i.add(ti);
            sum_j.add(tj);
            sum_ij.add(ti * tj);
        }
        double n = static_cast<double>(per_batch);
        double cov = sum_ij.value() / n - (sum_i.value() / n) * (sum_j.value() / n);
        batch_values[static_cast<std::size_t>(b)] = static_cast<double>(cfg.L) * cov;
    };

    int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        for (int b = 0; b < batch_count; ++b) run_batch(b);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int b = next.fetch_add(1); b < batch_count; b = next.fetch_add(1)) run_batch(b);
            });
        }
        for (auto& t : pool) t.join();
    }

    NeumaierSum total, total_sq;
    for (double v : batch_values) {
        total.add(v);
        total_sq.add(v * v);
    }
    SecondOrderStats out;
    double n = static_cast<double>(batch_count);
    out.value = total.value() / n;
    double var = std::max(0.0, total_sq.value() / n - out.value * out.value);
    out.stderr_value = std::sqrt(var / n);
    return out;
}

std::vector<MseRow> mse_convergence_study(const std::vector<int>& sizes, std::int64_t samples, int order,
                                          const std::string& kind, std::uint64_t seed, int workers) {
    if (order < 1 || order > 4) throw size_error("mse study supports order <= 4");
    const bool gaussian = (kind == "gaussian");
    if (!gaussian && kind != "vandermonde") throw domain_error("mse study kind must be vandermonde or gaussian");

    std::vector<MseRow> rows;
    for (int n : sizes) {
        if (n < 1) throw domain_error("matrix sizes must be positive");
        MseRow row;
        row.N = n;
        row.L = n;  // square case, c = 1
        row.samples = samples;

        SimConfig cfg;
        cfg.N = n;
        cfg.L = n;
        cfg.samples = samples;
        cfg.seed = seed + static_cast<std::uint64_t>(n);
        cfg.workers = workers;

        MomentStats stats = gaussian
            ? averaged_stats(samples, order, workers, cfg.seed,
                             [&](Rng& rng) {
                                 // (1/N) X X^H with X (L x N): Gram of X^H/sqrt(N)
                                 ComplexMatrix x = sample_complex_gaussian(n, n, rng);
                                 x.scale(1.0 / std::sqrt(static_cast<double>(n)));
                                 ComplexMatrix xh = x.adjoint();
                                 return gram_trace_moments(xh, {}, order);
                             })
            : averaged_gram_moments(cfg, order);

        // d_j = c = 1 for the identity spectrum at L = N
        std::vector<double> d(static_cast<std::size_t>(order), 1.0);
        std::vector<double> exact;
        std::vector<double> asymptotic;
        if (gaussian) {
            asymptotic = gaussian_moments_forward(d, order);
            exact = asymptotic;
            if (order >= 3) exact[2] = gaussian_exact_m3(1.0, 1.0, 1.0, n);
        } else {
            exact = moments_uniform_exact(d, n, order);
            asymptotic = moments_uniform_first7(d, order);
        }

        NeumaierSum mse_est, mse_exact;
        for (int j = 0; j < order; ++j) {
            double de = stats.mean[static_cast<std::size_t>(j)] - exact[static_cast<std::size_t>(j)];
            double da = exact[static_cast<std::size_t>(j)] - asymptotic[static_cast<std::size_t>(j)];
            mse_est.add(de * de);
            mse_exact.add(da * da);
        }
        row.mse_estimated_vs_exact = mse_est.value();
        row.mse_exact_vs_asymptotic = mse_exact.value();
        rows.push_back(row);
    }
    return rows;
}

std::string mse_rows_to_csv(const std::vector<MseRow>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "N,L,samples,mse_estimated_vs_exact,mse_exact_vs_asymptotic\n";
    for (const auto& r : rows) {
        os << r.N << ',' << r.L << ',' << r.samples << ',' << r.mse_estimated_vs_exact << ','
           << r.mse_exact_vs_asymptotic << '\n';
    }
    return os.str();
}

Histogram eigenvalue_histogram(const ComplexMatrix& hermitian, int bins, double lo, double hi) {
    return mean_eigenvalue_histogram({hermitian}, bins, lo, hi);
}

Histogram mean_eigenvalue_histogram(const std::vector<ComplexMatrix>& hermitians, int bins, double lo, double hi) {
    if (bins < 1 || !(hi > lo)) throw domain_error("histogram needs bins >= 1 and hi > lo");
    if (hermitians.empty()) throw domain_error("histogram needs at least one matrix");
    Histogram h;
    h.bin_left.resize(static_cast<std::size_t>(bins));
    h.bin_right.resize(static_cast<std::size_t>(bins));
    h.mass.assign(static_cast<std::size_t>(bins), 0.0);
    const double width = (hi - lo) / bins;
    for (int b = 0; b < bins; ++b) {
        h.bin_left[static_cast<std::size_t>(b)] = lo + b * width;
        h.bin_right[static_cast<std::size_t>(b)] = lo + (b + 1) * width;
    }
    std::int64_t total = 0;
    for (const auto& m : hermitians) {
        std::vector<double> eig = hermitian_eigenvalues(m);
        for (double ev : eig) {
            int b = static_cast<int>(std::floor((ev - lo) / width));
            b = std::clamp(b, 0, bins - 1);  // clamp outliers into the end bins to keep mass 1
            h.mass[static_cast<std::size_t>(b)] += 1.0;
            ++total;
        }
    }
    for (double& m : h.mass) m /= static_cast<double>(total);
    return h;
}

std::string Histogram::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "bin_left,bin_right,mass\n";
    for (std::size_t i = 0; i < mass.size(); ++i) {
        os << bin_left[i] << ',' << bin_right[i] << ',' << mass[i] << '\n';
    }
    return os.str();
}

double Histogram::total_mass() const {
    NeumaierSum acc;
    for (double m : mass) acc.add(m);
    return acc.value();
}

double capacity_realization(const ComplexMatrix& hermitian, double rho_snr) {
    if (rho_snr < 0) throw domain_error("snr must be nonnegative");
    if (rho_snr == 0) return 0.0;
    std::vector<double> eig = hermitian_eigenvalues(hermitian);
    NeumaierSum acc;
    for (double ev : eig) acc.add(std::log2(1.0 + rho_snr * std::max(ev, 0.0)));
    return acc.value() / static_cast<double>(eig.size());
}

} // namespace vdm
