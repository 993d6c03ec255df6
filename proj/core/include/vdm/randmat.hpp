#pragma once

#include "vdm/matrix.hpp"
#include "vdm/phase.hpp"
#include "vdm/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vdm {

// Simulation configuration for the observation model Y = V P^{1/2} S + noise
// (or Y = V^T S + noise for the transposed model).
struct SimConfig {
    int N = 0;                 // receive dimension / rows of V
    int L = 0;                 // source dimension / columns of V
    int K = 1;                 // observations per covariance sample
    double sigma = 0.0;        // noise std; entries have E|n|^2 = sigma^2
    PhaseDistribution phase = PhaseDistribution::uniform();
    std::vector<double> powers;  // diagonal of P; empty means P = I
    std::int64_t samples = 1;
    std::uint64_t seed = 1;
    int workers = 1;

    void validate() const;
    std::vector<double> power_diagonal() const;  // length L
};

// V(r,c) = exp(-j r omega_c)/sqrt(N), omega_c iid from the phase law.
ComplexMatrix sample_vandermonde(int N, int L, const PhaseDistribution& omega, Rng& rng);
// Row exponent r replaced by floor(N f(r/N)) (deterministic power law) or
// N lambda_r (random exponents).
ComplexMatrix sample_generalized_vandermonde(int N, int L, const PhaseDistribution& omega,
                                             const PowerDistribution& power, Rng& rng);
// iid standard complex Gaussian entries (unit variance per entry).
ComplexMatrix sample_complex_gaussian(int rows, int cols, Rng& rng);

// tr_L((D V^H V)^j) for j = 1..k from one realization; D diagonal (empty =
// identity). Forms the Gram matrix once, then the power ladder; traces use
// compensated accumulation, never an eigendecomposition. k <= 7.
std::vector<double> gram_trace_moments(const ComplexMatrix& v, const std::vector<double>& diag, int k);

// One observation covariance W = (1/K) Y Y^H (N x N; L x L when transposed).
ComplexMatrix sample_observation_covariance(const SimConfig& cfg, bool transposed, Rng& rng);
// tr(W^j), j = 1..order, via the K x K Gram of Y (never forms W).
std::vector<double> sample_covariance_trace_moments(const SimConfig& cfg, bool transposed, int order, Rng& rng);

// Mean and standard error per statistic over cfg.samples independent
// realizations, deterministically chunked across workers.
struct MomentStats {
    std::vector<double> mean;
    std::vector<double> stderr_of_mean;
    std::int64_t samples = 0;
};
MomentStats averaged_gram_moments(const SimConfig& cfg, int order);
MomentStats averaged_covariance_moments(const SimConfig& cfg, bool transposed, int order);

// L * sample covariance of (tr_L T^i, tr_L T^j), T = D V^H V, via batch
// means: the estimate and its standard error over batch_count groups.
struct SecondOrderStats {
    double value = 0.0;
    double stderr_value = 0.0;
};
SecondOrderStats sampled_second_order(const SimConfig& cfg, int i, int j, int batch_count);

// MSE study of the first `order` moments: estimated-vs-exact and
// exact-vs-asymptotic, per config row.
struct MseRow {
    int N = 0;
    int L = 0;
    std::int64_t samples = 0;
    double mse_estimated_vs_exact = 0.0;
    double mse_exact_vs_asymptotic = 0.0;
};
// kind: "vandermonde" (uniform phase) or "gaussian".
std::vector<MseRow> mse_convergence_study(const std::vector<int>& sizes, std::int64_t samples, int order,
                                          const std::string& kind, std::uint64_t seed, int workers = 1);
std::string mse_rows_to_csv(const std::vector<MseRow>& rows);

// Mean empirical eigenvalue histogram over matrix samples.
struct Histogram {
    std::vector<double> bin_left;
    std::vector<double> bin_right;
    std::vector<double> mass;  // sums to 1 (out-of-range eigenvalues clamp to the end bins)

    std::string to_csv() const;
    double total_mass() const;
};
Histogram eigenvalue_histogram(const ComplexMatrix& hermitian, int bins, double lo, double hi);
Histogram mean_eigenvalue_histogram(const std::vector<ComplexMatrix>& hermitians, int bins, double lo, double hi);

// (1/N) log2 det(I + rho M) for Hermitian PSD M via eigenvalues.
double capacity_realization(const ComplexMatrix& hermitian, double rho_snr);

} // namespace vdm
