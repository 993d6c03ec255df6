#pragma once

#include "vdm/coeff_cache.hpp"
#include "vdm/coeffs.hpp"
#include "vdm/partition.hpp"
#include "vdm/phase.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vdm {

// Moment vector with its scaling tag. Scaled moments absorb the aspect
// ratio: m_n = c M_n and d_n = c D_n.
struct MomentVector {
    enum class Scaling { Raw, Scaled };

    std::vector<double> values;  // values[k-1] = k-th moment
    Scaling scaling = Scaling::Scaled;
    double c = 1.0;

    int order() const { return static_cast<int>(values.size()); }
    MomentVector to_scaled() const;
    MomentVector to_raw() const;

    // CSV rows "order,value,scaling,c", one per moment.
    std::string to_csv() const;
    static MomentVector from_csv(const std::string& text);
};

// Limit distribution of the diagonal-matrix ensemble: either plain moments
// D_1..D_k, eigenvalues (from which moments are exact), or a joint-moment
// callable for words with distinct diagonal matrices.
class DiagonalSpectrum {
public:
    static DiagonalSpectrum identity();
    static DiagonalSpectrum from_moments(std::vector<double> moments);
    static DiagonalSpectrum from_eigenvalues(std::vector<double> eigenvalues);
    // callable receives the sorted positions of a block and returns the
    // joint moment lim tr_L(D_{w_1} ... D_{w_s})
    static DiagonalSpectrum from_joint(std::function<double(const std::vector<int>&)> joint);

    double moment(int k) const;
    double block_moment(const std::vector<int>& positions) const;
    double partition_product(const SetPartition& rho) const;  // D_rho

private:
    std::vector<double> moments_;
    std::vector<double> eigenvalues_;
    std::function<double(const std::vector<int>&)> joint_;
    bool identity_ = false;
};

// Sources expansion coefficients for a given phase distribution: exact table
// first, optional MC fallback on explicit opt-in, optional persistent cache.
// MC estimates are seeded per partition, so a fixed master seed reproduces
// the full table regardless of evaluation order.
class CoeffProvider {
public:
    enum class Policy { ExactOnly, ExactThenMc };

    explicit CoeffProvider(PhaseDistribution phase = PhaseDistribution::uniform(),
                           Policy policy = Policy::ExactOnly, McOptions mc = {},
                           CoefficientCache* cache = nullptr);

    // K_{rho,u}; throws coefficient_unavailable under ExactOnly when unknown.
    ExpansionCoefficient uniform_coefficient(const SetPartition& rho) const;
    // K_{rho,omega} = K_{rho,u} * I_{|rho|}.
    ExpansionCoefficient coefficient(const SetPartition& rho) const;

    const PhaseDistribution& phase() const { return phase_; }
    double block_count_integral(int k) const;  // I_k, cached

private:
    PhaseDistribution phase_;
    Policy policy_;
    McOptions mc_;
    CoefficientCache* cache_ = nullptr;
    mutable std::vector<double> ik_cache_;
};

// sum over P(n) of K_{rho,omega} c^{|rho|-1} D_rho. n <= 8.
double mixed_moment_asymptotic(int n, double c, const CoeffProvider& provider,
                               const DiagonalSpectrum& spectrum);

// Closed-form uniform-phase scaled moments m_1..m_order from d_1..d_order,
// order <= 7, as explicit polynomials.
std::vector<double> moments_uniform_first7(const std::vector<double>& d, int order = 7);

// Exact finite-size uniform-phase scaled moments m_1..m_4 (order <= 4).
std::vector<double> moments_uniform_exact(const std::vector<double>& d, int N, int order = 4);

struct SecondOrderMoment {
    int i = 0;
    int j = 0;
    double value = 0.0;  // limit of L * C_{i,j}, scaled by c
};

// m_{2,2} = d4 + 4 d3 d1 + (4/3) d2^2 + 4 d2 d1^2.
SecondOrderMoment second_order_m22(const std::vector<double>& d);
// C_{1,n} and C_{n,1} vanish; only (2,2) has a closed form here.
SecondOrderMoment second_order_moment(int i, int j, const std::vector<double>& d);

// Atomic phase: limit of E[Tr(D_1 (1/N) V^H V ...)] = c^{n-1} p^{(n)} prod tr_L(D_i).
double moments_atomic(int n, double c, const std::vector<double>& masses,
                      const std::vector<double>& factor_traces);

// q^{(n)} for power-law singular densities; requires n >= 2 (the cyclic
// integrand degenerates at n = 1), n <= 6, 0 < s < 1.
struct QnEstimate {
    double value = 0.0;          // q^{(n)}
    double integral = 0.0;       // MC estimate of the cycle integral
    double integral_stderr = 0.0;
    std::int64_t samples = 0;
};
QnEstimate compute_q_n(int n, double s, double mass_power_sum, std::int64_t samples, std::uint64_t seed,
                       int workers = 1);
// Singular-phase analogue of moments_atomic with q^{(n)} in place of p^{(n)}.
double moments_power_singular(int n, double c, const QnEstimate& qn, const std::vector<double>& factor_traces);

// First three moments of (V1^H V2 V2^H V1)^n for two independent Vandermonde
// matrices with a common continuous phase: closed combinations of I_2..I_6
// with aspect-ratio powers.
double mixed_moments_two_vandermonde(int n, double c, const std::vector<double>& I);

struct MultiVandermondeResult {
    double value = 0.0;
    bool forced_zero = false;  // odd strict alternation: trace vanishes
};
// General independent-Vandermonde mixed moment: sum over rho <= sigma of
// c^{|rho|-1} D_rho K_{rho,u} (2pi)^{|rho|-1} int prod_i p_i^{(blocks in S_i)}.
// word[k-1] is the matrix label at position k; phases are indexed by label.
MultiVandermondeResult mixed_moments_multi_vandermonde(const std::vector<int>& word, double c,
                                                       const std::vector<PhaseDistribution>& phases,
                                                       const DiagonalSpectrum& spectrum,
                                                       const CoeffProvider& uniform_provider);

// Marcenko-Pastur (free Poisson) and classical Poisson moment bounds:
// fp_n = sum_{NC(n)} c^{|rho|-1}, p_n = (1/c) sum_{P(n)} c^{|rho|}.
std::pair<double, double> poisson_bounds(int n, double c);
// fp_n <= V_n <= p_n for the uniform-phase Vandermonde moment V_n.
bool poisson_sandwich_holds(int n, double c);

// Marcenko-Pastur density (continuous part; the atom at zero has mass
// (1-1/c)^+ and is exposed separately).
double mp_density(double c, double x);
double mp_atom_mass(double c);
void mp_support(double c, double* a, double* b);

// Gaussian (Wishart) reference formulas.
std::vector<double> gaussian_moments_forward(const std::vector<double>& d, int order);
double gaussian_second_order_11(double c, double d2);            // lim L^2 C_{1,1} = c d2
double gaussian_exact_m3(double d1, double d2, double d3, int N);  // (1 + N^-2) d3 + 3 d1 d2 + d1^3
double gaussian_asymptotic_capacity(double rho_snr);             // bits/s/Hz, c = 1

// Necessary growth signature of unbounded support: (V_{2n})^{1/n} increasing
// over the available even uniform-phase moments. k caps how many are used.
bool moment_growth_check(int k);

} // namespace vdm
