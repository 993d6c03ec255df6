#pragma once

#include <functional>
#include <vector>

namespace vdm {

// Adaptive Gauss-Kronrod (G7/K15) integration.
struct QuadratureOptions {
    double abs_tol = 1e-9;
    int max_depth = 40;
};

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt = {});

// Integrates piecewise on [a,b] split at the given interior breakpoints.
// Densities with jump discontinuities must declare their breakpoints; the
// adaptive rule then never straddles a jump.
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breakpoints, const QuadratureOptions& opt = {});

} // namespace vdm
