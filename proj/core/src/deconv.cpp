#include "vdm/deconv.hpp"

#include "vdm/errors.hpp"
#include "vdm/summation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace vdm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void SystemDims::validate() const {
    if (N < 1 || L < 1 || K < 1) throw domain_error("system dimensions must be positive");
}

void CovarianceMoments::validate() const {
    if (w[0] < 0.0) throw domain_error("W_1 must be nonnegative");
    if (w[1] < w[0] * w[0] - 1e-9) throw domain_error("W_2 < W_1^2 violates PSD trace inequality");
    if (sigma < 0.0) throw domain_error("noise level must be nonnegative");
}

MomentVector vandermonde_forward(const MomentVector& d_in, const CoeffProvider& provider) {
    if (d_in.scaling != MomentVector::Scaling::Scaled) {
        throw domain_error("vandermonde_forward expects scaled moments; call to_scaled() first");
    }
    const int order = d_in.order();
    if (order < 1 || order > 7) throw size_error("vandermonde moment map supports orders 1..7");

    MomentVector m = d_in;
    for (int n = 1; n <= order; ++n) {
        NeumaierSum acc;
        for_each_partition(n, [&](const SetPartition& rho) {
            double prod = provider.coefficient(rho).value;
            for (const auto& block : rho.blocks()) prod *= d_in.values[block.size() - 1];
            acc.add(prod);
            return true;
        });
        m.values[static_cast<std::size_t>(n - 1)] = acc.value();
    }
    return m;
}

MomentVector vandermonde_deconvolve(const MomentVector& m_in, const CoeffProvider& provider) {
    if (m_in.scaling != MomentVector::Scaling::Scaled) {
        throw domain_error("vandermonde_deconvolve expects scaled moments; call to_scaled() first");
    }
    const int order = m_in.order();
    if (order < 1 || order > 7) throw size_error("vandermonde moment map supports orders 1..7");

    // Triangular: m_n = K_{1_n} I_1 d_n + (terms in d_1..d_{n-1});
    // K_{1_n,omega} = 1 for every continuous phase.
    MomentVector d = m_in;
    for (int n = 1; n <= order; ++n) {
        NeumaierSum lower;
        for_each_partition(n, [&](const SetPartition& rho) {
            if (rho.block_count() == 1) return true;
            double prod = provider.coefficient(rho).value;
            for (const auto& block : rho.blocks()) prod *= d.values[block.size() - 1];
            lower.add(prod);
            return true;
        });
        double k_top = provider.coefficient(SetPartition::one_block(n)).value;
        d.values[static_cast<std::size_t>(n - 1)] =
            (m_in.values[static_cast<std::size_t>(n - 1)] - lower.value()) / k_top;
    }
    return d;
}

MomentVector gaussian_forward(const MomentVector& d_in) {
    if (d_in.scaling != MomentVector::Scaling::Scaled) {
        throw domain_error("gaussian_forward expects scaled moments");
    }
    MomentVector m = d_in;
    m.values = gaussian_moments_forward(d_in.values, d_in.order());
    return m;
}

MomentVector gaussian_deconvolve(const MomentVector& m_in) {
    if (m_in.scaling != MomentVector::Scaling::Scaled) {
        throw domain_error("gaussian_deconvolve expects scaled moments");
    }
    const int order = m_in.order();
    if (order < 1 || order > 7) throw size_error("gaussian moment map supports orders 1..7");
    MomentVector d = m_in;
    for (int n = 1; n <= order; ++n) {
        NeumaierSum lower;
        for_each_partition(n, [&](const SetPartition& rho) {
            if (!is_noncrossing(rho) || rho.block_count() == 1) return true;
            double prod = 1.0;
            for (const auto& block : rho.blocks()) prod *= d.values[block.size() - 1];
            lower.add(prod);
            return true;
        });
        d.values[static_cast<std::size_t>(n - 1)] = m_in.values[static_cast<std::size_t>(n - 1)] - lower.value();
    }
    return d;
}

namespace {

struct StageTMoments {
    double t1 = 0.0;      // E[tr T]
    double t2 = 0.0;      // E[tr T^2]
    double t3 = 0.0;      // E[tr T^3]
    double t1_sq = 0.0;   // E[(tr T)^2]
    double t1_cu = 0.0;   // E[(tr T)^3]
    double t1_t2 = 0.0;   // E[tr T tr T^2]
};

// T = P V^H V moments from the power moments: exact uniform-phase stage.
StageTMoments t_stage_exact_uniform(const std::array<double, 3>& P, double c2, int N) {
    const double rn = 1.0 / static_cast<double>(N);
    StageTMoments t;
    t.t1 = P[0];
    t.t2 = (1 - rn) * P[1] + c2 * P[0] * P[0];
    t.t3 = (1 - 3 * rn + 2 * rn * rn) * P[2] + 3 * (1 - rn) * c2 * P[0] * P[1] + c2 * c2 * std::pow(P[0], 3);
    // tr T = tr_L(P) holds per realization (the Gram diagonal is identically 1)
    t.t1_sq = P[0] * P[0];
    t.t1_cu = std::pow(P[0], 3);
    t.t1_t2 = (1 - rn) * P[0] * P[1] + c2 * std::pow(P[0], 3);
    return t;
}

// Asymptotic stage for a continuous phase distribution.
StageTMoments t_stage_asymptotic(const std::array<double, 3>& P, double c2, double I2, double I3) {
    StageTMoments t;
    t.t1 = P[0];
    t.t2 = P[1] + c2 * I2 * P[0] * P[0];
    t.t3 = P[2] + 3 * c2 * I2 * P[0] * P[1] + c2 * c2 * I3 * std::pow(P[0], 3);
    t.t1_sq = P[0] * P[0];
    t.t1_cu = std::pow(P[0], 3);
    t.t1_t2 = P[0] * P[1] + c2 * I2 * std::pow(P[0], 3);
    return t;
}

// Gaussian observation stage: W moments from the T moments. The finite-size
// 1/K^2 and 1/(KL) terms are dropped in the asymptotic variant.
std::array<double, 3> w_stage(const StageTMoments& t, double sigma, double c1, double c2, double c3,
                              double inv_k2, double inv_kl) {
    const double s2 = sigma * sigma;
    const double s4 = s2 * s2;
    const double s6 = s4 * s2;
    std::array<double, 3> w{};
    w[0] = c2 * t.t1 + s2;
    w[1] = c2 * t.t2 + c2 * c3 * t.t1_sq + 2 * s2 * (c2 + c3) * t.t1 + s4 * (1 + c1);
    w[2] = c2 * (1 + inv_k2) * t.t3 + 3 * c2 * c3 * t.t1_t2 + c2 * c3 * c3 * t.t1_cu +
           3 * s2 * ((1 + c1) * c2 + c1 * c2 * c2 * inv_kl) * t.t2 + 3 * s2 * c3 * (c3 + 2 * c2) * t.t1_sq +
           3 * s4 * (c1 * c1 + 3 * c1 + 1 + inv_k2) * c2 * t.t1 + s6 * (c1 * c1 + 3 * c1 + 1 + inv_k2);
    return w;
}

} // namespace

std::array<double, 3> predict_W_via_stages_asymptotic(const std::array<double, 3>& P, double sigma,
                                                      const SystemDims& dims, double I2, double I3) {
    dims.validate();
    StageTMoments t = t_stage_asymptotic(P, dims.c2(), I2, I3);
    return w_stage(t, sigma, dims.c1(), dims.c2(), dims.c3(), 0.0, 0.0);
}

std::array<double, 3> predict_W_via_stages_exact_uniform(const std::array<double, 3>& P, double sigma,
                                                         const SystemDims& dims) {
    dims.validate();
    StageTMoments t = t_stage_exact_uniform(P, dims.c2(), dims.N);
    double inv_k2 = 1.0 / (static_cast<double>(dims.K) * dims.K);
    double inv_kl = 1.0 / (static_cast<double>(dims.K) * dims.L);
    return w_stage(t, sigma, dims.c1(), dims.c2(), dims.c3(), inv_k2, inv_kl);
}

std::array<double, 3> predict_W_moments_asymptotic(const std::array<double, 3>& P, double sigma,
                                                   const SystemDims& dims, double I2, double I3) {
    dims.validate();
    const double c1 = dims.c1(), c2 = dims.c2(), c3 = dims.c3();
    const double s2 = sigma * sigma, s4 = s2 * s2, s6 = s4 * s2;
    std::array<double, 3> w{};
    w[0] = c2 * P[0] + s2;
    w[1] = c2 * P[1] + (c2 * c2 * I2 + c2 * c3) * P[0] * P[0] + 2 * s2 * (c2 + c3) * P[0] + s4 * (1 + c1);
    w[2] = c2 * P[2] + (3 * c2 * c2 * I2 + 3 * c2 * c3) * P[0] * P[1] +
           (std::pow(c2, 3) * I3 + 3 * c2 * c2 * c3 * I2 + c2 * c3 * c3) * std::pow(P[0], 3) +
           3 * s2 * (1 + c1) * c2 * P[1] +
           3 * s2 * ((1 + c1) * c2 * c2 * I2 + c3 * (c3 + 2 * c2)) * P[0] * P[0] +
           3 * s4 * (c1 * c1 + 3 * c1 + 1) * c2 * P[0] + s6 * (c1 * c1 + 3 * c1 + 1);
    return w;
}

std::array<double, 3> predict_W_moments_exact_uniform(const std::array<double, 3>& P, double sigma,
                                                      const SystemDims& dims) {
    dims.validate();
    const double c1 = dims.c1(), c2 = dims.c2(), c3 = dims.c3();
    const double s2 = sigma * sigma, s4 = s2 * s2, s6 = s4 * s2;
    const double rn = 1.0 / static_cast<double>(dims.N);
    const double k2 = 1.0 / (static_cast<double>(dims.K) * dims.K);
    const double kl = 1.0 / (static_cast<double>(dims.K) * dims.L);
    std::array<double, 3> w{};
    w[0] = c2 * P[0] + s2;
    w[1] = c2 * (1 - rn) * P[1] + c2 * (c2 + c3) * P[0] * P[0] + 2 * s2 * (c2 + c3) * P[0] + s4 * (1 + c1);
    w[2] = c2 * (1 + k2) * (1 - 3 * rn + 2 * rn * rn) * P[2] +
           (1 - rn) * (3 * c2 * c2 * (1 + k2) + 3 * c2 * c3) * P[0] * P[1] +
           (std::pow(c2, 3) * (1 + k2) + 3 * c2 * c2 * c3 + c2 * c3 * c3) * std::pow(P[0], 3) +
           3 * s2 * ((1 + c1) * c2 + c1 * c2 * c2 * kl) * (1 - rn) * P[1] +
           3 * s2 * (c1 * std::pow(c2, 3) * kl + c2 * c2 + c3 * c3 + 3 * c2 * c3) * P[0] * P[0] +
           3 * s4 * (c1 * c1 + 3 * c1 + 1 + k2) * c2 * P[0] + s6 * (c1 * c1 + 3 * c1 + 1 + k2);
    return w;
}

namespace {

PMomentEstimate invert_w_map(const CovarianceMoments& what, const SystemDims& dims,
                             const std::function<std::array<double, 3>(const std::array<double, 3>&)>& forward,
                             double p2_coeff, double p3_coeff) {
    what.validate();
    const double c2 = dims.c2();
    const double s2 = what.sigma * what.sigma;
    PMomentEstimate est;
    est.P[0] = (what.w[0] - s2) / c2;
    // W_2 is affine in P_2 given P_1; W_3 affine in P_3 given P_1, P_2.
    std::array<double, 3> probe{est.P[0], 0.0, 0.0};
    est.P[1] = (what.w[1] - forward(probe)[1]) / p2_coeff;
    probe[1] = est.P[1];
    est.P[2] = (what.w[2] - forward(probe)[2]) / p3_coeff;
    est.negative_flag = est.P[1] < 0.0 || est.P[2] < 0.0;
    return est;
}

} // namespace

PMomentEstimate estimate_P_moments_asymptotic(const CovarianceMoments& what, const SystemDims& dims,
                                              double I2, double I3) {
    dims.validate();
    const double c2 = dims.c2();
    return invert_w_map(
        what, dims,
        [&](const std::array<double, 3>& p) { return predict_W_moments_asymptotic(p, what.sigma, dims, I2, I3); },
        c2, c2);
}

PMomentEstimate estimate_P_moments_exact_uniform(const CovarianceMoments& what, const SystemDims& dims) {
    dims.validate();
    const double c2 = dims.c2();
    const double rn = 1.0 / static_cast<double>(dims.N);
    const double k2 = 1.0 / (static_cast<double>(dims.K) * dims.K);
    return invert_w_map(
        what, dims,
        [&](const std::array<double, 3>& p) { return predict_W_moments_exact_uniform(p, what.sigma, dims); },
        c2 * (1 - rn), c2 * (1 + k2) * (1 - 3 * rn + 2 * rn * rn));
}

std::vector<double> newton_girard_roots(const std::vector<double>& moments, int r) {
    if (r < 1 || r > 4) throw size_error("newton_girard_roots supports 1 <= r <= 4");
    if (static_cast<int>(moments.size()) < r) throw domain_error("need moments P_1..P_r");

    // power sums of the r-element multiset from the normalized moments
    std::vector<double> p(static_cast<std::size_t>(r));
    for (int k = 1; k <= r; ++k) p[static_cast<std::size_t>(k - 1)] = static_cast<double>(r) * moments[static_cast<std::size_t>(k - 1)];

    // Newton identities: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i.
    std::vector<double> e(static_cast<std::size_t>(r) + 1, 0.0);
    e[0] = 1.0;
    for (int k = 1; k <= r; ++k) {
        double acc = 0.0;
        double sign = 1.0;
        for (int i = 1; i <= k; ++i) {
            acc += sign * e[static_cast<std::size_t>(k - i)] * p[static_cast<std::size_t>(i - 1)];
            sign = -sign;
        }
        e[static_cast<std::size_t>(k)] = acc / k;
    }

    // roots of x^r - e1 x^{r-1} + e2 x^{r-2} - ...
    std::vector<std::complex<double>> roots;
    const double scale = std::max({1.0, std::abs(e[1]), std::sqrt(std::abs(e[2]))});
    if (r == 1) {
        roots = {e[1]};
    } else if (r == 2) {
        std::complex<double> disc = std::sqrt(std::complex<double>(e[1] * e[1] - 4 * e[2], 0.0));
        roots = {(e[1] + disc) / 2.0, (e[1] - disc) / 2.0};
    } else if (r == 3) {
        // x^3 - e1 x^2 + e2 x - e3: depressed via x = y + e1/3 to
        // y^3 + pp y + qq = 0
        double a = e[1], b = e[2], c = e[3];
        double pp = b - a * a / 3.0;
        double qq = -2.0 * a * a * a / 27.0 + a * b / 3.0 - c;
        std::complex<double> inner = std::sqrt(std::complex<double>(qq * qq / 4.0 + pp * pp * pp / 27.0, 0.0));
        std::complex<double> u = std::pow(-qq / 2.0 + inner, 1.0 / 3.0);
        if (std::abs(u) < 1e-30) u = std::pow(-qq / 2.0 - inner, 1.0 / 3.0);
        std::complex<double> omega(-0.5, std::sqrt(3.0) / 2.0);
        for (int k = 0; k < 3; ++k) {
            std::complex<double> uk = u * std::pow(omega, k);
            std::complex<double> y = (std::abs(uk) < 1e-30) ? 0.0 : uk - pp / (3.0 * uk);
            roots.push_back(y + a / 3.0);
        }
    } else {
        // Durand-Kerner iteration on the monic quartic; deterministic start.
        std::vector<std::complex<double>> z(4);
        std::complex<double> seed(0.4, 0.9);
        z[0] = scale * seed;
        for (int k = 1; k < 4; ++k) z[static_cast<std::size_t>(k)] = z[static_cast<std::size_t>(k - 1)] * seed;
        auto poly = [&](std::complex<double> x) {
            return ((((x - e[1]) * x + e[2]) * x - e[3]) * x + e[4]);
        };
        for (int iter = 0; iter < 200; ++iter) {
            double shift = 0.0;
            for (int k = 0; k < 4; ++k) {
                std::complex<double> denom(1.0, 0.0);
                for (int m = 0; m < 4; ++m) {
                    if (m != k) denom *= z[static_cast<std::size_t>(k)] - z[static_cast<std::size_t>(m)];
                }
                std::complex<double> delta = poly(z[static_cast<std::size_t>(k)]) / denom;
                z[static_cast<std::size_t>(k)] -= delta;
                shift = std::max(shift, std::abs(delta));
            }
            if (shift < 1e-14 * scale) break;
        }
        roots = z;
    }

    std::vector<double> out;
    for (const auto& z : roots) {
        if (std::abs(z.imag()) > 1e-6 * std::max(scale, std::abs(z))) {
            throw estimation_noise_error("complex roots beyond tolerance; the moment estimates are too noisy");
        }
        out.push_back(z.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

MassEstimate atomic_masses_from_power_sums(const std::vector<double>& power_sums, int r) {
    if (r < 1 || r > 4) throw size_error("atomic_masses_from_power_sums supports 1 <= r <= 4");
    if (static_cast<int>(power_sums.size()) < r) throw domain_error("need power sums p^(1)..p^(r)");
    if (std::abs(power_sums[0] - 1.0) > 1e-6) {
        throw domain_error("mass power sums must be normalized: p^(1) = 1");
    }
    // Same machinery; the power sums are of the masses themselves, so no
    // r-scaling of the inputs.
    std::vector<double> normalized(power_sums.begin(), power_sums.begin() + r);
    for (double& v : normalized) v /= static_cast<double>(r);
    MassEstimate est;
    est.masses = newton_girard_roots(normalized, r);
    for (double m : est.masses) {
        if (m < 0.0) est.negative_flag = true;
    }
    return est;
}

GridSearchResult grid_search_estimate(const std::vector<double>& grid, const CovarianceMoments& what,
                                      const std::function<std::array<double, 3>(double)>& forward) {
    if (grid.empty()) throw domain_error("grid search needs a nonempty grid");
    GridSearchResult result;
    result.grid = grid;
    result.errors.reserve(grid.size());
    bool first = true;
    for (double candidate : grid) {
        std::array<double, 3> w = forward(candidate);
        double err = 0.0;
        for (int i = 0; i < 3; ++i) {
            double d = w[static_cast<std::size_t>(i)] - what.w[static_cast<std::size_t>(i)];
            err += d * d;
        }
        result.errors.push_back(err);
        // documented tie-break: the smallest parameter value wins
        if (first || err < result.best_error || (err == result.best_error && candidate < result.best)) {
            first = false;
            result.best = candidate;
            result.best_error = err;
        }
    }
    return result;
}

std::array<double, 3> sampling_dist_moments(double sigma, const SystemDims& dims, double I2, double I3) {
    dims.validate();
    // Transposed model: the stage chain applies with c1 and c3 interchanged
    // and c2 inverted; T = V V^H, whose normalized trace powers are c2 times
    // the V^H V ones. No power matrix is present (P = I).
    const double c2 = dims.c2(), c3 = dims.c3();
    const double c1p = c3, c2p = 1.0 / c2, c3p = dims.c1();
    StageTMoments t;
    t.t1 = c2;  // tr_N((V V^H)^k) = c2 tr_L((V^H V)^k); the first is exactly c2
    t.t2 = c2 + I2 * c2 * c2;
    t.t3 = c2 + 3 * I2 * c2 * c2 + I3 * std::pow(c2, 3);
    t.t1_sq = c2 * c2;
    t.t1_cu = std::pow(c2, 3);
    t.t1_t2 = t.t1 * t.t2;  // tr T is deterministic
    return w_stage(t, sigma, c1p, c2p, c3p, 0.0, 0.0);
}

AlphaEstimate estimate_alpha(const CovarianceMoments& what, const SystemDims& dims) {
    dims.validate();
    what.validate();
    const double c2 = dims.c2(), c3 = dims.c3();
    const double s2 = what.sigma * what.sigma;
    AlphaEstimate est;
    // W_2 = c2 I2 + (1 + c3)(1 + sigma^2)^2
    est.I2 = (what.w[1] - (1 + c3) * (1 + s2) * (1 + s2)) / c2;
    if (est.I2 <= 0.0) {
        throw estimation_noise_error("recovered I2 is nonpositive; not enough observations");
    }
    est.alpha = kTwoPi / est.I2;
    est.I3_consistency = est.I2 * est.I2;
    // Solve the W_3 equation for I3 given the recovered I2.
    std::array<double, 3> w_at_zero_i3 = sampling_dist_moments(what.sigma, dims, est.I2, 0.0);
    std::array<double, 3> w_at_unit_i3 = sampling_dist_moments(what.sigma, dims, est.I2, 1.0);
    double i3_coeff = w_at_unit_i3[2] - w_at_zero_i3[2];
    est.I3_from_w3 = (what.w[2] - w_at_zero_i3[2]) / i3_coeff;
    return est;
}

} // namespace vdm
