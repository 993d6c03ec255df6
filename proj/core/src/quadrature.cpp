#include "vdm/quadrature.hpp"

#include "vdm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace vdm {

namespace {

// 15-point Kronrod nodes/weights on [-1,1]; the embedded 7-point Gauss rule
// uses the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct GkResult {
    double kronrod = 0.0;
    double error = 0.0;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double result_gauss = fc * kWg[3];
    double result_kronrod = fc * kWgk[7];

    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        result_kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
    }
    GkResult r;
    r.kronrod = result_kronrod * half;
    r.error = std::abs((result_kronrod - result_gauss) * half);
    return r;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
    GkResult r = gk15(f, a, b);
    if (r.error <= tol || depth <= 0) return r.kronrod;
    const double mid = 0.5 * (a + b);
    return adaptive(f, a, mid, 0.5 * tol, depth - 1) + adaptive(f, mid, b, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opt) {
    if (!(a <= b)) throw domain_error("integrate: inverted interval");
    if (a == b) return 0.0;
    return adaptive(f, a, b, opt.abs_tol, opt.max_depth);
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breakpoints, const QuadratureOptions& opt) {
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double x : breakpoints) {
        if (x > a && x < b) cuts.push_back(x);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0;
    QuadratureOptions piece_opt = opt;
    piece_opt.abs_tol = opt.abs_tol / static_cast<double>(cuts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += integrate(f, cuts[i], cuts[i + 1], piece_opt);
    }
    return total;
}

} // namespace vdm
