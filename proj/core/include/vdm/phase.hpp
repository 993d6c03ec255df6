#pragma once

#include "vdm/rng.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace vdm {

// Phase distribution on [0, 2pi). Immutable once constructed; samplers take
// an externally owned RNG so threads never share generator state.
class PhaseDistribution {
public:
    enum class Kind { Uniform, Continuous, SinOfUniform, Atomic, PowerSingular };

    static PhaseDistribution uniform();

    // General continuous density with declared breakpoints (for piecewise
    // quadrature across jump discontinuities). Must integrate to 1 over
    // [0,2pi) within 1e-8.
    static PhaseDistribution continuous(std::function<double(double)> density,
                                        std::vector<double> breakpoints, std::string label = "continuous");

    // Piecewise-linear density through (x, p) nodes, x ascending in [0,2pi].
    static PhaseDistribution table(std::vector<double> xs, std::vector<double> ps);

    // Uniform on [0, alpha], zero elsewhere.
    static PhaseDistribution one_sided_uniform(double alpha);

    // omega = 2 pi (d/lambda) sin(theta), theta uniform on [-alpha, alpha],
    // wrapped to [0,2pi). Requires 2 d sin(alpha) / lambda < 1.
    static PhaseDistribution sin_of_uniform(double d, double lambda, double alpha);

    // Point masses p_i at locations alpha_i; p_i > 0, sum p_i = 1.
    static PhaseDistribution atomic(std::vector<double> locations, std::vector<double> masses);

    // Density p_i |x - alpha_i|^{-s} near each alpha_i, zero outside the
    // bumps; a common bump half-width is chosen so the total mass is 1.
    static PhaseDistribution power_singular(std::vector<double> locations, std::vector<double> strengths,
                                            double s);

    Kind kind() const { return kind_; }
    bool is_continuous_type() const {
        return kind_ == Kind::Uniform || kind_ == Kind::Continuous || kind_ == Kind::SinOfUniform;
    }

    // Density value at x in [0,2pi). Domain error for the atomic variant.
    double density_at(double x) const;
    // Exact sampling; every variant.
    double sample(Rng& rng) const;

    // Interior breakpoints of the density on [0,2pi) for piecewise quadrature.
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    // I_k = (2pi)^{k-1} * int_0^{2pi} p(x)^k dx for the continuous variants
    // (quadrature, abs tol 1e-9). k <= 8. Domain error otherwise.
    double power_integral(int k) const;

    // Atomic / power-singular accessors.
    const std::vector<double>& atom_locations() const { return locations_; }
    const std::vector<double>& atom_masses() const { return masses_; }
    double singular_exponent() const { return s_; }
    // p^{(n)} = sum_i p_i^n over atom masses (atomic) or strengths (singular).
    double mass_power_sum(int n) const;

    // sin-of-uniform parameters.
    double sin_d() const { return d_; }
    double sin_lambda() const { return lambda_; }
    double sin_alpha() const { return alpha_; }
    // Support half width 2 pi d sin(alpha) / lambda.
    double sin_support_bound() const;

    std::string label() const { return label_; }

    // Config-file syntax:
    //   uniform
    //   sin d=<v> lambda=<v> alpha=<v>
    //   onesided alpha=<v>
    //   atomic loc=<v>,<v>,... mass=<v>,<v>,...
    //   powerlaw s=<v> loc=<v>,... p=<v>,...
    //   table <file>          (x,p CSV, piecewise-linear density)
    static PhaseDistribution parse(const std::string& spec);

private:
    PhaseDistribution() = default;

    Kind kind_ = Kind::Uniform;
    std::string label_ = "uniform";
    std::function<double(double)> density_;
    std::vector<double> breakpoints_;

    // inverse-CDF table for generic continuous sampling
    std::vector<double> cdf_x_;
    std::vector<double> cdf_p_;
    void build_cdf_table();

    std::vector<double> locations_;
    std::vector<double> masses_;   // atomic masses or singular strengths
    double s_ = 0.0;               // power-singular exponent
    double bump_width_ = 0.0;      // power-singular bump half width

    double d_ = 0.0, lambda_ = 0.0, alpha_ = 0.0;  // sin-of-uniform
};

// Exact sin-of-uniform closed forms (valid for k = 2, 3):
// I2 = lambda/(4 d alpha^2) * ln((1+sin a)/(1-sin a)),
// I3 = lambda^2 tan(a) / (4 d^2 alpha^3).
double sin_family_I2_closed_form(double d, double lambda, double alpha);
double sin_family_I3_closed_form(double d, double lambda, double alpha);

// Power / exponent distribution on [0,1) for generalized Vandermonde rows.
class PowerDistribution {
public:
    enum class Kind { UniformRamp, PiecewiseLinearF, Density };

    // f(x) = x: the standard Vandermonde power layout.
    static PowerDistribution uniform_ramp();
    // Deterministic monotone piecewise-linear f through (x, f(x)) nodes,
    // f: [0,1) -> [0,1); the induced exponent density is piecewise constant.
    static PowerDistribution piecewise_linear_f(std::vector<double> xs, std::vector<double> fs);
    // Random exponent fraction lambda with the given density on [0,1).
    static PowerDistribution density(std::function<double(double)> p, std::vector<double> breakpoints);

    Kind kind() const { return kind_; }
    bool is_uniform() const { return kind_ == Kind::UniformRamp; }

    // Density of the exponent fraction at y in [0,1).
    double density_at(double y) const;
    // Deterministic row map f (only for UniformRamp / PiecewiseLinearF).
    double f_at(double x) const;
    bool has_deterministic_f() const { return kind_ != Kind::Density; }
    // Sample an exponent fraction.
    double sample(Rng& rng) const;

private:
    PowerDistribution() = default;
    void build_cdf_table();

    Kind kind_ = Kind::UniformRamp;
    std::vector<double> xs_, fs_;
    std::function<double(double)> density_;
    std::vector<double> breakpoints_;
    std::vector<double> cdf_x_, cdf_p_;
};

} // namespace vdm
