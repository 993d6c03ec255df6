#include "vdm/phase.hpp"

#include "vdm/errors.hpp"
#include "vdm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vdm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_to_two_pi(double x) {
    double y = std::fmod(x, kTwoPi);
    if (y < 0) y += kTwoPi;
    return y;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::logic_error&) {
            throw domain_error("cannot parse number list: " + s);
        }
    }
    return out;
}

// key=value tokens after the variant name
std::string find_kv(const std::vector<std::string>& tokens, const std::string& key) {
    for (const auto& t : tokens) {
        if (t.rfind(key + "=", 0) == 0) return t.substr(key.size() + 1);
    }
    throw domain_error("phase spec missing " + key + "=");
}

} // namespace

PhaseDistribution PhaseDistribution::uniform() {
    PhaseDistribution p;
    p.kind_ = Kind::Uniform;
    p.label_ = "uniform";
    p.density_ = [](double) { return 1.0 / kTwoPi; };
    return p;
}

PhaseDistribution PhaseDistribution::continuous(std::function<double(double)> density,
                                                std::vector<double> breakpoints, std::string label) {
    PhaseDistribution p;
    p.kind_ = Kind::Continuous;
    p.label_ = std::move(label);
    p.density_ = std::move(density);
    p.breakpoints_ = std::move(breakpoints);
    std::sort(p.breakpoints_.begin(), p.breakpoints_.end());
    double mass = integrate_piecewise(p.density_, 0.0, kTwoPi, p.breakpoints_);
    if (std::abs(mass - 1.0) > 1e-8) {
        throw domain_error("continuous phase density does not integrate to 1 (got " + std::to_string(mass) + ")");
    }
    p.build_cdf_table();
    return p;
}

PhaseDistribution PhaseDistribution::table(std::vector<double> xs, std::vector<double> ps) {
    if (xs.size() != ps.size() || xs.size() < 2) throw domain_error("table density needs matching x,p lists");
    if (!std::is_sorted(xs.begin(), xs.end())) throw domain_error("table density x values must ascend");
    for (double p : ps) {
        if (p < 0) throw domain_error("table density must be nonnegative");
    }
    auto density = [xs, ps](double x) {
        if (x <= xs.front() || x >= xs.back()) {
            // closed at the declared ends, zero outside
            if (x < xs.front() || x > xs.back()) return 0.0;
        }
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin()) return ps.front();
        if (it == xs.end()) return ps.back();
        std::size_t hi = static_cast<std::size_t>(it - xs.begin());
        std::size_t lo = hi - 1;
        double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
        return ps[lo] + t * (ps[hi] - ps[lo]);
    };
    std::vector<double> brk = xs;
    return continuous(density, std::move(brk), "table");
}

PhaseDistribution PhaseDistribution::one_sided_uniform(double alpha) {
    if (alpha <= 0 || alpha > kTwoPi) throw domain_error("one-sided uniform needs 0 < alpha <= 2pi");
    auto density = [alpha](double x) { return (x >= 0.0 && x <= alpha) ? 1.0 / alpha : 0.0; };
    PhaseDistribution p = continuous(density, {alpha}, "onesided");
    return p;
}

PhaseDistribution PhaseDistribution::sin_of_uniform(double d, double lambda, double alpha) {
    if (d <= 0 || lambda <= 0) throw domain_error("sin-of-uniform needs d > 0 and lambda > 0");
    if (alpha <= 0 || alpha > 1.5707963267948966) throw domain_error("sin-of-uniform needs 0 < alpha <= pi/2");
    if (2.0 * d * std::sin(alpha) / lambda >= 1.0) {
        throw domain_error("sin-of-uniform requires 2 d sin(alpha) / lambda < 1");
    }
    PhaseDistribution p;
    p.kind_ = Kind::SinOfUniform;
    p.d_ = d;
    p.lambda_ = lambda;
    p.alpha_ = alpha;
    p.label_ = "sin";
    const double scale = kTwoPi * d / lambda;  // omega = scale * sin(theta)
    const double bound = scale * std::sin(alpha);
    // Symmetric about 0, so on [0,2pi) the support is two arcs near 0 and 2pi.
    p.density_ = [scale, alpha, bound](double x) {
        double centered = (x > 3.141592653589793238462643383280) ? x - kTwoPi : x;
        if (std::abs(centered) > bound) return 0.0;
        return 1.0 / (2.0 * alpha * std::sqrt(scale * scale - centered * centered));
    };
    p.breakpoints_ = {bound, kTwoPi - bound};
    return p;
}

PhaseDistribution PhaseDistribution::atomic(std::vector<double> locations, std::vector<double> masses) {
    if (locations.empty() || locations.size() != masses.size()) {
        throw domain_error("atomic phase needs matching nonempty loc/mass lists");
    }
    double total = 0.0;
    for (double m : masses) {
        if (m <= 0) throw domain_error("atomic masses must be positive");
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-9) throw domain_error("atomic masses must sum to 1");
    PhaseDistribution p;
    p.kind_ = Kind::Atomic;
    p.label_ = "atomic";
    for (double& x : locations) x = wrap_to_two_pi(x);
    p.locations_ = std::move(locations);
    p.masses_ = std::move(masses);
    return p;
}

PhaseDistribution PhaseDistribution::power_singular(std::vector<double> locations, std::vector<double> strengths,
                                                    double s) {
    if (s <= 0.0 || s >= 1.0) throw domain_error("power-singular exponent needs 0 < s < 1");
    if (locations.empty() || locations.size() != strengths.size()) {
        throw domain_error("power-singular phase needs matching nonempty loc/p lists");
    }
    double strength_sum = 0.0;
    for (double p : strengths) {
        if (p <= 0) throw domain_error("power-singular strengths must be positive");
        strength_sum += p;
    }
    // Common bump half-width w normalizing total mass to 1:
    // sum_i 2 p_i w^{1-s} / (1-s) = 1.
    double w = std::pow((1.0 - s) / (2.0 * strength_sum), 1.0 / (1.0 - s));

    PhaseDistribution p;
    p.kind_ = Kind::PowerSingular;
    p.label_ = "powerlaw";
    p.s_ = s;
    p.bump_width_ = w;
    for (double& x : locations) x = wrap_to_two_pi(x);
    p.locations_ = std::move(locations);
    p.masses_ = std::move(strengths);
    for (double loc : p.locations_) {
        p.breakpoints_.push_back(wrap_to_two_pi(loc - w));
        p.breakpoints_.push_back(loc);
        p.breakpoints_.push_back(wrap_to_two_pi(loc + w));
    }
    std::sort(p.breakpoints_.begin(), p.breakpoints_.end());
    return p;
}

void PhaseDistribution::build_cdf_table() {
    // Inverse-CDF grid for the generic continuous sampler: dense uniform grid
    // refined with the declared breakpoints.
    const int grid = 4096;
    cdf_x_.clear();
    for (int i = 0; i <= grid; ++i) cdf_x_.push_back(kTwoPi * static_cast<double>(i) / grid);
    for (double b : breakpoints_) {
        if (b > 0 && b < kTwoPi) cdf_x_.push_back(b);
    }
    std::sort(cdf_x_.begin(), cdf_x_.end());
    cdf_x_.erase(std::unique(cdf_x_.begin(), cdf_x_.end()), cdf_x_.end());

    cdf_p_.assign(cdf_x_.size(), 0.0);
    for (std::size_t i = 1; i < cdf_x_.size(); ++i) {
        double piece = integrate(density_, cdf_x_[i - 1], cdf_x_[i], {1e-11, 30});
        cdf_p_[i] = cdf_p_[i - 1] + std::max(piece, 0.0);
    }
    double total = cdf_p_.back();
    if (total <= 0) throw domain_error("density has no mass");
    for (double& v : cdf_p_) v /= total;
}

double PhaseDistribution::density_at(double x) const {
    x = wrap_to_two_pi(x);
    switch (kind_) {
        case Kind::Uniform:
            return 1.0 / kTwoPi;
        case Kind::Continuous:
        case Kind::SinOfUniform:
            return density_(x);
        case Kind::PowerSingular: {
            double value = 0.0;
            for (std::size_t i = 0; i < locations_.size(); ++i) {
                double delta = std::abs(x - locations_[i]);
                delta = std::min(delta, kTwoPi - delta);  // circular distance
                if (delta < bump_width_ && delta > 0.0) value += masses_[i] * std::pow(delta, -s_);
            }
            return value;
        }
        case Kind::Atomic:
            throw domain_error("atomic phase distribution has no density");
    }
    return 0.0;
}

double PhaseDistribution::sample(Rng& rng) const {
    switch (kind_) {
        case Kind::Uniform:
            return rng.uniform(0.0, kTwoPi);
        case Kind::SinOfUniform: {
            double theta = rng.uniform(-alpha_, alpha_);
            return wrap_to_two_pi(kTwoPi * d_ / lambda_ * std::sin(theta));
        }
        case Kind::Atomic: {
            double u = rng.uniform();
            double acc = 0.0;
            for (std::size_t i = 0; i < masses_.size(); ++i) {
                acc += masses_[i];
                if (u < acc) return locations_[i];
            }
            return locations_.back();
        }
        case Kind::PowerSingular: {
            // Pick a bump by mass, then invert |t|^{-s} analytically.
            double u = rng.uniform();
            double strength_sum = 0.0;
            for (double p : masses_) strength_sum += p;
            double acc = 0.0;
            std::size_t chosen = masses_.size() - 1;
            for (std::size_t i = 0; i < masses_.size(); ++i) {
                acc += masses_[i] / strength_sum;
                if (u < acc) {
                    chosen = i;
                    break;
                }
            }
            double v = rng.uniform();
            double t = bump_width_ * std::pow(v, 1.0 / (1.0 - s_));
            if (rng.uniform() < 0.5) t = -t;
            return wrap_to_two_pi(locations_[chosen] + t);
        }
        case Kind::Continuous: {
            double u = rng.uniform();
            auto it = std::lower_bound(cdf_p_.begin(), cdf_p_.end(), u);
            if (it == cdf_p_.begin()) return cdf_x_.front();
            if (it == cdf_p_.end()) return cdf_x_.back();
            std::size_t hi = static_cast<std::size_t>(it - cdf_p_.begin());
            std::size_t lo = hi - 1;
            double span = cdf_p_[hi] - cdf_p_[lo];
            double t = span > 0 ? (u - cdf_p_[lo]) / span : 0.0;
            return cdf_x_[lo] + t * (cdf_x_[hi] - cdf_x_[lo]);
        }
    }
    return 0.0;
}

double PhaseDistribution::power_integral(int k) const {
    if (k < 1 || k > 8) throw domain_error("power_integral supports 1 <= k <= 8");
    if (!is_continuous_type()) throw domain_error("power_integral requires a continuous phase distribution");
    if (kind_ == Kind::Uniform) return 1.0;
    auto integrand = [this, k](double x) { return std::pow(density_(x), k); };
    double integral = integrate_piecewise(integrand, 0.0, kTwoPi, breakpoints_);
    return std::pow(kTwoPi, k - 1) * integral;
}

double PhaseDistribution::mass_power_sum(int n) const {
    if (kind_ != Kind::Atomic && kind_ != Kind::PowerSingular) {
        throw domain_error("mass_power_sum requires an atomic or power-singular distribution");
    }
    double acc = 0.0;
    for (double p : masses_) acc += std::pow(p, n);
    return acc;
}

double PhaseDistribution::sin_support_bound() const {
    if (kind_ != Kind::SinOfUniform) throw domain_error("sin_support_bound requires the sin variant");
    return kTwoPi * d_ / lambda_ * std::sin(alpha_);
}

PhaseDistribution PhaseDistribution::parse(const std::string& spec) {
    std::istringstream in(spec);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    if (tokens.empty()) throw domain_error("empty phase spec");
    const std::string& name = tokens.front();

    if (name == "uniform") return uniform();
    if (name == "sin") {
        return sin_of_uniform(std::stod(find_kv(tokens, "d")), std::stod(find_kv(tokens, "lambda")),
                              std::stod(find_kv(tokens, "alpha")));
    }
    if (name == "onesided") return one_sided_uniform(std::stod(find_kv(tokens, "alpha")));
    if (name == "atomic") {
        return atomic(parse_double_list(find_kv(tokens, "loc")), parse_double_list(find_kv(tokens, "mass")));
    }
    if (name == "powerlaw") {
        return power_singular(parse_double_list(find_kv(tokens, "loc")), parse_double_list(find_kv(tokens, "p")),
                              std::stod(find_kv(tokens, "s")));
    }
    if (name == "table") {
        if (tokens.size() < 2) throw domain_error("table phase spec needs a file path");
        std::ifstream file(tokens[1]);
        if (!file) throw domain_error("cannot open density table " + tokens[1]);
        std::vector<double> xs, ps;
        std::string line;
        while (std::getline(file, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto comma = line.find(',');
            if (comma == std::string::npos) throw domain_error("density table rows must be x,p");
            xs.push_back(std::stod(line.substr(0, comma)));
            ps.push_back(std::stod(line.substr(comma + 1)));
        }
        return table(std::move(xs), std::move(ps));
    }
    throw domain_error("unknown phase spec: " + spec);
}

double sin_family_I2_closed_form(double d, double lambda, double alpha) {
    return lambda / (4.0 * d * alpha * alpha) * std::log((1.0 + std::sin(alpha)) / (1.0 - std::sin(alpha)));
}

double sin_family_I3_closed_form(double d, double lambda, double alpha) {
    return lambda * lambda * std::tan(alpha) / (4.0 * d * d * alpha * alpha * alpha);
}

PowerDistribution PowerDistribution::uniform_ramp() {
    PowerDistribution p;
    p.kind_ = Kind::UniformRamp;
    return p;
}

PowerDistribution PowerDistribution::piecewise_linear_f(std::vector<double> xs, std::vector<double> fs) {
    if (xs.size() != fs.size() || xs.size() < 2) throw domain_error("piecewise-linear f needs matching nodes");
    if (!std::is_sorted(xs.begin(), xs.end()) || !std::is_sorted(fs.begin(), fs.end())) {
        throw domain_error("piecewise-linear f must be monotone nondecreasing");
    }
    if (xs.front() != 0.0 || std::abs(xs.back() - 1.0) > 1e-12) throw domain_error("f nodes must span [0,1]");
    if (fs.front() < 0.0 || fs.back() > 1.0) throw domain_error("f must map into [0,1]");
    PowerDistribution p;
    p.kind_ = Kind::PiecewiseLinearF;
    p.xs_ = std::move(xs);
    p.fs_ = std::move(fs);
    return p;
}

PowerDistribution PowerDistribution::density(std::function<double(double)> p, std::vector<double> breakpoints) {
    PowerDistribution out;
    out.kind_ = Kind::Density;
    out.density_ = std::move(p);
    out.breakpoints_ = std::move(breakpoints);
    double mass = integrate_piecewise(out.density_, 0.0, 1.0, out.breakpoints_);
    if (std::abs(mass - 1.0) > 1e-8) {
        throw domain_error("power density does not integrate to 1 (got " + std::to_string(mass) + ")");
    }
    out.build_cdf_table();
    return out;
}

void PowerDistribution::build_cdf_table() {
    const int grid = 4096;
    cdf_x_.clear();
    for (int i = 0; i <= grid; ++i) cdf_x_.push_back(static_cast<double>(i) / grid);
    for (double b : breakpoints_) {
        if (b > 0 && b < 1) cdf_x_.push_back(b);
    }
    std::sort(cdf_x_.begin(), cdf_x_.end());
    cdf_x_.erase(std::unique(cdf_x_.begin(), cdf_x_.end()), cdf_x_.end());
    cdf_p_.assign(cdf_x_.size(), 0.0);
    for (std::size_t i = 1; i < cdf_x_.size(); ++i) {
        cdf_p_[i] = cdf_p_[i - 1] + std::max(integrate(density_, cdf_x_[i - 1], cdf_x_[i], {1e-11, 30}), 0.0);
    }
    for (double& v : cdf_p_) v /= cdf_p_.back();
}

double PowerDistribution::density_at(double y) const {
    if (y < 0.0 || y >= 1.0) return 0.0;
    switch (kind_) {
        case Kind::UniformRamp:
            return 1.0;
        case Kind::Density:
            return density_(y);
        case Kind::PiecewiseLinearF: {
            // f monotone piecewise linear: induced density is 1/slope on the
            // image of each segment.
            for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
                if (y >= fs_[i] && y < fs_[i + 1]) {
                    double slope = (fs_[i + 1] - fs_[i]) / (xs_[i + 1] - xs_[i]);
                    return slope > 0 ? 1.0 / slope : 0.0;
                }
            }
            return 0.0;
        }
    }
    return 0.0;
}

double PowerDistribution::f_at(double x) const {
    switch (kind_) {
        case Kind::UniformRamp:
            return x;
        case Kind::PiecewiseLinearF: {
            if (x <= xs_.front()) return fs_.front();
            if (x >= xs_.back()) return fs_.back();
            auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
            std::size_t lo = hi - 1;
            double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
            return fs_[lo] + t * (fs_[hi] - fs_[lo]);
        }
        case Kind::Density:
            throw domain_error("random power distribution has no deterministic f");
    }
    return 0.0;
}

double PowerDistribution::sample(Rng& rng) const {
    switch (kind_) {
        case Kind::UniformRamp:
            return rng.uniform();
        case Kind::PiecewiseLinearF:
            return f_at(rng.uniform());
        case Kind::Density: {
            double u = rng.uniform();
            auto it = std::lower_bound(cdf_p_.begin(), cdf_p_.end(), u);
            if (it == cdf_p_.begin()) return cdf_x_.front();
            if (it == cdf_p_.end()) return cdf_x_.back();
            std::size_t hi = static_cast<std::size_t>(it - cdf_p_.begin());
            std::size_t lo = hi - 1;
            double span = cdf_p_[hi] - cdf_p_[lo];
            double t = span > 0 ? (u - cdf_p_[lo]) / span : 0.0;
            return cdf_x_[lo] + t * (cdf_x_[hi] - cdf_x_[lo]);
        }
    }
    return 0.0;
}

} // namespace vdm
