#pragma once

#include "vdm/moments.hpp"

#include <array>
#include <functional>
#include <vector>

namespace vdm {

// Dimensions of the observation model and the three deconvolution-stage
// aspect ratios. c3 = c1 c2 always; all three are kept because the stages
// use them independently.
struct SystemDims {
    int N = 0;  // receive dimension
    int L = 0;  // source dimension
    int K = 0;  // observations

    double c1() const { return static_cast<double>(N) / K; }
    double c2() const { return static_cast<double>(L) / N; }
    double c3() const { return static_cast<double>(L) / K; }
    void validate() const;
};

// Observed sample-covariance moments W_i = tr(W^i) plus the known noise std.
struct CovarianceMoments {
    std::array<double, 3> w{0.0, 0.0, 0.0};
    double sigma = 0.0;
    void validate() const;  // W_1 >= 0 and W_2 >= W_1^2 (PSD trace powers)
};

// Outcome of the power-recovery pipeline.
struct PowerEstimate {
    std::vector<double> moments;     // recovered P_1..P_r
    std::vector<double> roots;       // distinct power levels, ascending
    double residual = 0.0;           // max Newton-Girard reconstruction error
    bool negative_moment_flag = false;
};

// Forward uniform/continuous-phase Vandermonde moment map on scaled moments
// and its exact triangular inverse. Orders up to 7.
MomentVector vandermonde_forward(const MomentVector& d, const CoeffProvider& provider);
MomentVector vandermonde_deconvolve(const MomentVector& m, const CoeffProvider& provider);

// Gaussian (Wishart) counterparts: the free moment-cumulant map over
// noncrossing partitions. Orders up to 7.
MomentVector gaussian_forward(const MomentVector& d);
MomentVector gaussian_deconvolve(const MomentVector& m);

// Expected sample-covariance moments from the power moments P_1..P_3:
// asymptotic (continuous phase, needs I2/I3) and exact (uniform phase, any
// N, L, K). Both equal the three-stage convolution chain; the stage
// composition is exposed for the consistency tests.
std::array<double, 3> predict_W_moments_asymptotic(const std::array<double, 3>& P, double sigma,
                                                   const SystemDims& dims, double I2, double I3);
std::array<double, 3> predict_W_moments_exact_uniform(const std::array<double, 3>& P, double sigma,
                                                      const SystemDims& dims);
std::array<double, 3> predict_W_via_stages_asymptotic(const std::array<double, 3>& P, double sigma,
                                                      const SystemDims& dims, double I2, double I3);
std::array<double, 3> predict_W_via_stages_exact_uniform(const std::array<double, 3>& P, double sigma,
                                                         const SystemDims& dims);

// Inversion of the W map order by order (each W_n is affine in P_n given the
// lower ones). Negative recovered moments are flagged, never clamped here.
struct PMomentEstimate {
    std::array<double, 3> P{0.0, 0.0, 0.0};
    bool negative_flag = false;
};
PMomentEstimate estimate_P_moments_asymptotic(const CovarianceMoments& what, const SystemDims& dims,
                                              double I2, double I3);
PMomentEstimate estimate_P_moments_exact_uniform(const CovarianceMoments& what, const SystemDims& dims);

// Power sums -> distinct values via Newton-Girard and polynomial roots.
// moments are normalized traces P_k = tr_L(P^k); the multiset recovered has
// r elements. Closed forms for r <= 3, root iteration for r = 4.
std::vector<double> newton_girard_roots(const std::vector<double>& moments, int r);

// Atomic-phase mass recovery: power sums p^{(1)}..p^{(r)} (p^{(1)} must be 1
// within 1e-6) to the masses themselves.
struct MassEstimate {
    std::vector<double> masses;
    bool negative_flag = false;
};
MassEstimate atomic_masses_from_power_sums(const std::vector<double>& power_sums, int r);

// Least-squares grid search over a scalar parameter: the forward model maps
// a candidate to predicted (W_1,W_2,W_3); score is the squared deviation
// from the observed moments. Ties break toward the smaller parameter.
struct GridSearchResult {
    double best = 0.0;
    double best_error = 0.0;
    std::vector<double> grid;
    std::vector<double> errors;
};
GridSearchResult grid_search_estimate(const std::vector<double>& grid, const CovarianceMoments& what,
                                      const std::function<std::array<double, 3>(double)>& forward);

// Transposed observation model r = V^T s + n: expected tr(W^{1..3}) and the
// inversion for the sampling support. One-sided-uniform phase on [0,alpha]
// has I2 = 2pi/alpha and I3 = (2pi/alpha)^2, so alpha follows from I2 with
// I3 as a consistency check.
std::array<double, 3> sampling_dist_moments(double sigma, const SystemDims& dims, double I2, double I3);

struct AlphaEstimate {
    double alpha = 0.0;
    double I2 = 0.0;
    double I3_from_w3 = 0.0;    // inverted from the W_3 equation
    double I3_consistency = 0.0;  // (2pi/alpha)^2 implied by the recovered I2
};
AlphaEstimate estimate_alpha(const CovarianceMoments& what, const SystemDims& dims);

} // namespace vdm
