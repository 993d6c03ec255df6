// vandermoment: moments and deconvolution for random Vandermonde ensembles.
//
// Subcommands: coeff, moments, deconvolve, estimate-sources, estimate-paths,
// estimate-powers, estimate-wavelength, estimate-alpha, mse-study, histogram,
// capacity. All randomized paths require an explicit --seed. With --output a
// JSON manifest of the run is written beside the artifact.

#include "CLI11.hpp"
#include "json.hpp"

#include "vdm/coeff_cache.hpp"
#include "vdm/coeffs.hpp"
#include "vdm/deconv.hpp"
#include "vdm/errors.hpp"
#include "vdm/moments.hpp"
#include "vdm/randmat.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kPi = 3.14159265358979323846;

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw vdm::domain_error("empty number list");
    return out;
}

std::string join(const std::vector<double>& values) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << values[i];
    }
    return os.str();
}

struct OutputSink {
    std::string path;    // empty: stdout only
    std::string format;  // csv or json
    json manifest_inputs;

    void deliver(const std::string& subcommand, const std::string& body, const std::string& stdout_line) const {
        if (!stdout_line.empty()) std::cout << stdout_line << '\n';
        if (path.empty()) return;
        std::ofstream out(path);
        if (!out) throw vdm::domain_error("cannot write output file " + path);
        out << body;

        json manifest;
        manifest["tool"] = "vandermoment";
        manifest["version"] = kVersion;
        manifest["subcommand"] = subcommand;
        manifest["inputs"] = manifest_inputs;
        std::ofstream mf(path + ".manifest.json");
        mf << manifest.dump(2) << '\n';
    }
};

// Coefficient cache shared across runs via VANDERMOMENT_CACHE.
struct CacheFile {
    vdm::CoefficientCache cache;
    std::string path;

    CacheFile() {
        if (const char* env = std::getenv("VANDERMOMENT_CACHE")) {
            path = env;
            cache.load(path);
        }
    }
    ~CacheFile() {
        if (!path.empty()) {
            try {
                cache.save(path);
            } catch (...) {
                // saving the cache must never mask the command result
            }
        }
    }
};

vdm::SimConfig make_sim_config(int N, int L, int K, double sigma, const vdm::PhaseDistribution& phase,
                               const std::vector<double>& power_set, std::int64_t samples, std::uint64_t seed,
                               int workers) {
    vdm::SimConfig cfg;
    cfg.N = N;
    cfg.L = L;
    cfg.K = K;
    cfg.sigma = sigma;
    cfg.phase = phase;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.workers = workers;
    if (!power_set.empty()) {
        cfg.powers.resize(static_cast<std::size_t>(L));
        for (int i = 0; i < L; ++i) {
            cfg.powers[static_cast<std::size_t>(i)] = power_set[static_cast<std::size_t>(i) % power_set.size()];
        }
    }
    return cfg;
}

std::vector<double> power_set_moments(const std::vector<double>& set, int order) {
    std::vector<double> out;
    for (int k = 1; k <= order; ++k) {
        double acc = 0.0;
        for (double p : set) acc += std::pow(p, k);
        out.push_back(acc / static_cast<double>(set.size()));
    }
    return out;
}

json grid_result_json(const vdm::GridSearchResult& result) {
    json curve = json::array();
    for (std::size_t i = 0; i < result.grid.size(); ++i) {
        curve.push_back({{"candidate", result.grid[i]}, {"error", result.errors[i]}});
    }
    return {{"best", result.best}, {"best_error", result.best_error}, {"curve", curve}};
}

std::string grid_result_csv(const vdm::GridSearchResult& result) {
    std::ostringstream os;
    os.precision(17);
    os << "candidate,error\n";
    for (std::size_t i = 0; i < result.grid.size(); ++i) os << result.grid[i] << ',' << result.errors[i] << '\n';
    return os.str();
}

int run(int argc, char** argv) {
    CLI::App app{"moments, deconvolution and simulation for unit-circle random Vandermonde ensembles"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string output_path;
    std::string format = "csv";
    int workers = 1;
    app.add_option("--output", output_path, "artifact file; a .manifest.json is written beside it");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--workers", workers, "worker threads (results are identical for any count)")
        ->check(CLI::PositiveNumber);

    // ---- coeff ----------------------------------------------------------
    auto* coeff_cmd = app.add_subcommand("coeff", "expansion coefficient of one partition");
    std::string partition_text, phase_spec = "uniform";
    bool exact_flag = false;
    int finite_n = 0;
    std::int64_t mc_samples = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    coeff_cmd->add_option("--partition", partition_text, "blocks as 1,3/2,4")->required();
    coeff_cmd->add_option("--phase", phase_spec, "phase spec (uniform, sin ..., onesided ..., table f)");
    coeff_cmd->add_flag("--exact", exact_flag, "exact table only; fails when no exact value is known");
    coeff_cmd->add_option("--finite-N", finite_n, "exact finite-size value at this N");
    coeff_cmd->add_option("--mc-samples", mc_samples, "Monte Carlo sample count");
    coeff_cmd->add_option("--seed", seed, "master seed (required for --mc-samples)")
        ->each([&](const std::string&) { seed_given = true; });

    // ---- moments ---------------------------------------------------------
    auto* moments_cmd = app.add_subcommand("moments", "forward moment map m_1..m_order from d_1..d_order");
    std::string d_list;
    double aspect_c = 1.0;
    int order = 4;
    int exact_n = 0;
    std::int64_t fallback_samples = 0;
    moments_cmd->add_option("--d", d_list, "scaled diagonal moments d_1,d_2,...")->required();
    moments_cmd->add_option("--c", aspect_c, "aspect ratio L/N")->check(CLI::PositiveNumber);
    moments_cmd->add_option("--order", order, "highest moment order")->check(CLI::Range(1, 7));
    moments_cmd->add_option("--phase", phase_spec, "phase spec");
    moments_cmd->add_option("--exact-N", exact_n, "finite-size formulas at this N (uniform phase, order <= 4)");
    moments_cmd->add_option("--mc-fallback", fallback_samples,
                            "enable MC estimation of unknown coefficients with this sample count");
    moments_cmd->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });

    // ---- deconvolve ------------------------------------------------------
    auto* deconv_cmd = app.add_subcommand("deconvolve", "invert the moment map: m -> d");
    std::string m_list, model = "vandermonde";
    deconv_cmd->add_option("--m", m_list, "observed scaled moments m_1,m_2,...")->required();
    deconv_cmd->add_option("--c", aspect_c, "aspect ratio L/N")->check(CLI::PositiveNumber);
    deconv_cmd->add_option("--phase", phase_spec, "phase spec");
    deconv_cmd->add_option("--model", model, "vandermonde or gaussian")
        ->check(CLI::IsMember({"vandermonde", "gaussian"}));

    // ---- shared estimator options ----------------------------------------
    int dim_n = 100, dim_l = 36, dim_k = 10;
    double sigma = std::sqrt(0.1);
    std::int64_t batches = 50;
    std::string powers_list = "0.5,1,1.5";

    auto add_model_options = [&](CLI::App* cmd, bool with_l) {
        cmd->add_option("--N", dim_n, "receive dimension")->check(CLI::PositiveNumber);
        if (with_l) cmd->add_option("--L", dim_l, "source dimension")->check(CLI::PositiveNumber);
        cmd->add_option("--K", dim_k, "observations per covariance sample")->check(CLI::PositiveNumber);
        cmd->add_option("--sigma", sigma, "noise standard deviation");
        cmd->add_option("--batches", batches, "observed covariance samples to average")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "master seed")->required()->each([&](const std::string&) {
            seed_given = true;
        });
    };

    // ---- estimate-sources / estimate-paths --------------------------------
    auto* sources_cmd =
        app.add_subcommand("estimate-sources", "grid search for the source count (sin phase, asymptotic stages)");
    auto* paths_cmd =
        app.add_subcommand("estimate-paths", "grid search for the path count (uniform phase, exact stages)");
    int true_l = 36;
    int grid_min = 4, grid_max = 100, grid_step = 4;
    std::string sources_phase = "sin d=1 lambda=2 alpha=0.78539816339744831";
    for (auto* cmd : {sources_cmd, paths_cmd}) {
        add_model_options(cmd, false);
        cmd->add_option("--true-L", true_l, "true source/path count used for the synthetic data");
        cmd->add_option("--grid-min", grid_min);
        cmd->add_option("--grid-max", grid_max);
        cmd->add_option("--grid-step", grid_step)->check(CLI::PositiveNumber);
        cmd->add_option("--powers", powers_list, "power levels cycled along the diagonal of P");
    }
    sources_cmd->add_option("--phase", sources_phase, "phase spec of the array model");

    // ---- estimate-powers ---------------------------------------------------
    auto* powers_cmd = app.add_subcommand("estimate-powers", "recover distinct power levels via Newton-Girard");
    int powers_count = 3;
    std::string powers_phase = "uniform";
    add_model_options(powers_cmd, true);
    powers_cmd->add_option("--powers-count", powers_count, "number of distinct levels")->check(CLI::Range(1, 4));
    powers_cmd->add_option("--powers", powers_list, "true levels for the synthetic data");
    powers_cmd->add_option("--phase", powers_phase, "uniform (exact stages) or a sin spec (asymptotic)");

    // ---- estimate-wavelength ----------------------------------------------
    auto* wavelength_cmd = app.add_subcommand("estimate-wavelength", "grid search for the array wavelength");
    double true_lambda = 2.0, antenna_d = 1.0, half_angle = kPi / 4.0;
    double wl_min = 0.05, wl_max = 5.0, wl_step = 0.05;
    add_model_options(wavelength_cmd, true);
    wavelength_cmd->add_option("--true-lambda", true_lambda);
    wavelength_cmd->add_option("--d", antenna_d, "antenna spacing");
    wavelength_cmd->add_option("--alpha", half_angle, "angular half width");
    wavelength_cmd->add_option("--grid-min", wl_min);
    wavelength_cmd->add_option("--grid-max", wl_max);
    wavelength_cmd->add_option("--grid-step", wl_step);
    wavelength_cmd->add_option("--powers", powers_list);

    // ---- estimate-alpha -----------------------------------------------------
    auto* alpha_cmd =
        app.add_subcommand("estimate-alpha", "sampling-support recovery from the transposed model");
    double true_alpha = kPi / 4.0;
    add_model_options(alpha_cmd, true);
    alpha_cmd->add_option("--true-alpha", true_alpha, "one-sided uniform support of the synthetic phases");

    // ---- mse-study -----------------------------------------------------------
    auto* mse_cmd = app.add_subcommand("mse-study", "estimated/exact/asymptotic moment MSE per matrix size");
    std::string sizes_list = "20,40,80";
    std::int64_t mse_samples = 80;
    std::string mse_kind = "vandermonde";
    mse_cmd->add_option("--sizes", sizes_list, "square matrix sizes N=L");
    mse_cmd->add_option("--samples", mse_samples)->check(CLI::PositiveNumber);
    mse_cmd->add_option("--kind", mse_kind)->check(CLI::IsMember({"vandermonde", "gaussian"}));
    mse_cmd->add_option("--order", order)->check(CLI::Range(1, 4));
    mse_cmd->add_option("--seed", seed)->required()->each([&](const std::string&) { seed_given = true; });

    // ---- histogram -------------------------------------------------------------
    auto* hist_cmd = app.add_subcommand("histogram", "mean eigenvalue histogram of Gram matrix samples");
    std::string hist_kind = "vandermonde";
    int bins = 40;
    double hist_lo = 0.0, hist_hi = 8.0;
    std::int64_t hist_samples = 20;
    hist_cmd->add_option("--kind", hist_kind)->check(CLI::IsMember({"vandermonde", "gaussian"}));
    hist_cmd->add_option("--N", dim_n)->check(CLI::PositiveNumber);
    hist_cmd->add_option("--L", dim_l)->check(CLI::PositiveNumber);
    hist_cmd->add_option("--samples", hist_samples)->check(CLI::PositiveNumber);
    hist_cmd->add_option("--bins", bins)->check(CLI::PositiveNumber);
    hist_cmd->add_option("--lo", hist_lo);
    hist_cmd->add_option("--hi", hist_hi);
    hist_cmd->add_option("--phase", phase_spec);
    hist_cmd->add_option("--seed", seed)->required()->each([&](const std::string&) { seed_given = true; });

    // ---- capacity -----------------------------------------------------------------
    auto* cap_cmd = app.add_subcommand("capacity", "capacity realizations against the asymptotic reference");
    std::string cap_kind = "gaussian";
    std::string snr_list = "0.5,1,2,4,8,16";
    std::int64_t cap_samples = 10;
    cap_cmd->add_option("--kind", cap_kind)->check(CLI::IsMember({"vandermonde", "gaussian"}));
    cap_cmd->add_option("--N", dim_n)->check(CLI::PositiveNumber);
    cap_cmd->add_option("--snr", snr_list, "SNR grid");
    cap_cmd->add_option("--samples", cap_samples)->check(CLI::PositiveNumber);
    cap_cmd->add_option("--phase", phase_spec);
    cap_cmd->add_option("--seed", seed)->required()->each([&](const std::string&) { seed_given = true; });

    // global --output/--format/--workers may appear after the subcommand
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << json({{"error", {{"code", "parse"}, {"message", e.what()}}}}).dump() << '\n';
        return 2;
    }

    OutputSink sink;
    sink.path = output_path;
    sink.format = format;

    CacheFile shared_cache;
    auto make_provider = [&](const vdm::PhaseDistribution& phase) {
        if (fallback_samples > 0 || mc_samples > 0) {
            if (!seed_given) throw vdm::domain_error("Monte Carlo paths require an explicit --seed");
            vdm::McOptions mc;
            mc.samples = std::max(fallback_samples, mc_samples);
            mc.seed = seed;
            mc.workers = workers;
            return vdm::CoeffProvider(phase, vdm::CoeffProvider::Policy::ExactThenMc, mc, &shared_cache.cache);
        }
        return vdm::CoeffProvider(phase, vdm::CoeffProvider::Policy::ExactOnly, {}, &shared_cache.cache);
    };

    if (*coeff_cmd) {
        vdm::SetPartition rho = vdm::SetPartition::from_text(partition_text);
        vdm::PhaseDistribution phase = vdm::PhaseDistribution::parse(phase_spec);
        sink.manifest_inputs = {{"partition", partition_text}, {"phase", phase_spec}};

        vdm::ExpansionCoefficient k_u;
        if (finite_n > 0) {
            k_u = vdm::coeff_uniform_finite_N(rho, finite_n);
            sink.manifest_inputs["finite_N"] = finite_n;
        } else if (mc_samples > 0) {
            if (!seed_given) throw vdm::domain_error("--mc-samples requires --seed");
            k_u = vdm::coeff_uniform_mc(rho, {mc_samples, seed, workers});
            shared_cache.cache.put(rho, k_u);
            sink.manifest_inputs["mc_samples"] = mc_samples;
            sink.manifest_inputs["seed"] = seed;
        } else {
            auto exact = vdm::coeff_uniform_exact(rho);
            if (!exact) throw vdm::coefficient_unavailable(rho.to_text());
            k_u = *exact;
        }
        vdm::ExpansionCoefficient result =
            phase.kind() == vdm::PhaseDistribution::Kind::Uniform ? k_u : vdm::coeff_density(rho, phase, k_u);

        std::ostringstream line;
        line.precision(17);
        if (result.exact) {
            line << result.exact->to_string();
        } else {
            line << result.value;
            if (result.kind == vdm::ExpansionCoefficient::Kind::McEstimate) {
                line << " +/- " << result.stderr_value;
            }
        }
        json body = {{"partition", rho.to_text()},
                     {"kind", result.kind_name()},
                     {"value", result.value},
                     {"stderr", result.stderr_value},
                     {"samples", result.samples}};
        if (result.exact) body["rational"] = result.exact->to_string();
        sink.deliver("coeff", sink.format == "json" ? body.dump(2) + "\n" : line.str() + "\n", line.str());
        return 0;
    }

    if (*moments_cmd) {
        vdm::PhaseDistribution phase = vdm::PhaseDistribution::parse(phase_spec);
        std::vector<double> d = parse_list(d_list);
        if (static_cast<int>(d.size()) < order) throw vdm::domain_error("--d needs at least --order entries");
        d.resize(static_cast<std::size_t>(order));
        sink.manifest_inputs = {{"d", d}, {"c", aspect_c}, {"phase", phase_spec}, {"order", order}};

        std::vector<double> m;
        if (exact_n > 0) {
            if (phase.kind() != vdm::PhaseDistribution::Kind::Uniform) {
                throw vdm::domain_error("--exact-N is only available for the uniform phase");
            }
            m = vdm::moments_uniform_exact(d, exact_n, order);
            sink.manifest_inputs["exact_N"] = exact_n;
        } else {
            vdm::MomentVector dv;
            dv.values = d;
            dv.c = aspect_c;
            m = vdm::vandermonde_forward(dv, make_provider(phase)).values;
        }
        vdm::MomentVector mv;
        mv.values = m;
        mv.c = aspect_c;
        sink.deliver("moments", sink.format == "json" ? json({{"m", m}}).dump(2) + "\n" : mv.to_csv(), join(m));
        return 0;
    }

    if (*deconv_cmd) {
        vdm::PhaseDistribution phase = vdm::PhaseDistribution::parse(phase_spec);
        vdm::MomentVector mv;
        mv.values = parse_list(m_list);
        mv.c = aspect_c;
        sink.manifest_inputs = {{"m", mv.values}, {"c", aspect_c}, {"phase", phase_spec}, {"model", model}};
        vdm::MomentVector d = model == "gaussian" ? vdm::gaussian_deconvolve(mv)
                                                  : vdm::vandermonde_deconvolve(mv, make_provider(phase));
        sink.deliver("deconvolve", sink.format == "json" ? json({{"d", d.values}}).dump(2) + "\n" : d.to_csv(),
                     join(d.values));
        return 0;
    }

    if (*sources_cmd || *paths_cmd) {
        const bool sin_model = sources_cmd->parsed();
        vdm::PhaseDistribution phase =
            sin_model ? vdm::PhaseDistribution::parse(sources_phase) : vdm::PhaseDistribution::uniform();
        std::vector<double> power_set = parse_list(powers_list);

        vdm::SimConfig cfg =
            make_sim_config(dim_n, true_l, dim_k, sigma, phase, power_set, batches, seed, workers);
        auto observed_stats = vdm::averaged_covariance_moments(cfg, false, 3);
        vdm::CovarianceMoments observed;
        observed.w = {observed_stats.mean[0], observed_stats.mean[1], observed_stats.mean[2]};
        observed.sigma = sigma;

        std::array<double, 3> p_moments{};
        auto pm = power_set_moments(power_set, 3);
        std::copy(pm.begin(), pm.end(), p_moments.begin());

        double i2 = sin_model ? vdm::density_power_integral(phase, 2) : 1.0;
        double i3 = sin_model ? vdm::density_power_integral(phase, 3) : 1.0;
        auto forward = [&](double cand) {
            vdm::SystemDims dims{dim_n, static_cast<int>(cand), dim_k};
            return sin_model ? vdm::predict_W_moments_asymptotic(p_moments, sigma, dims, i2, i3)
                             : vdm::predict_W_moments_exact_uniform(p_moments, sigma, dims);
        };
        std::vector<double> grid;
        for (int l = grid_min; l <= grid_max; l += grid_step) grid.push_back(l);
        auto result = vdm::grid_search_estimate(grid, observed, forward);

        const char* name = sin_model ? "estimate-sources" : "estimate-paths";
        sink.manifest_inputs = {{"N", dim_n},       {"K", dim_k},   {"sigma", sigma},   {"true_L", true_l},
                                {"seed", seed},     {"batches", batches}, {"powers", power_set}};
        json body = grid_result_json(result);
        body["observed_W"] = observed.w;
        std::ostringstream line;
        line << "estimated L = " << static_cast<int>(result.best);
        sink.deliver(name, sink.format == "json" ? body.dump(2) + "\n" : grid_result_csv(result), line.str());
        return 0;
    }

    if (*powers_cmd) {
        vdm::PhaseDistribution phase = vdm::PhaseDistribution::parse(powers_phase);
        std::vector<double> power_set = parse_list(powers_list);
        vdm::SimConfig cfg = make_sim_config(dim_n, dim_l, dim_k, sigma, phase, power_set, batches, seed, workers);
        auto observed_stats = vdm::averaged_covariance_moments(cfg, false, 3);
        vdm::CovarianceMoments observed;
        observed.w = {observed_stats.mean[0], observed_stats.mean[1], observed_stats.mean[2]};
        observed.sigma = sigma;

        vdm::SystemDims dims{dim_n, dim_l, dim_k};
        vdm::PMomentEstimate p_est;
        if (phase.kind() == vdm::PhaseDistribution::Kind::Uniform) {
            p_est = vdm::estimate_P_moments_exact_uniform(observed, dims);
        } else {
            p_est = vdm::estimate_P_moments_asymptotic(observed, dims, vdm::density_power_integral(phase, 2),
                                                       vdm::density_power_integral(phase, 3));
        }
        std::vector<double> p_vec(p_est.P.begin(), p_est.P.begin() + powers_count);
        auto roots = vdm::newton_girard_roots(p_vec, powers_count);

        // residual: how well the recovered roots reproduce the moments
        double residual = 0.0;
        for (int k = 1; k <= powers_count; ++k) {
            double s = 0.0;
            for (double root : roots) s += std::pow(root, k);
            residual = std::max(residual, std::abs(s / powers_count - p_vec[static_cast<std::size_t>(k - 1)]));
        }

        sink.manifest_inputs = {{"N", dim_n},     {"L", dim_l},   {"K", dim_k},        {"sigma", sigma},
                                {"seed", seed},   {"batches", batches}, {"phase", powers_phase},
                                {"true_powers", power_set}};
        json body = {{"recovered_moments", p_vec},
                     {"roots", roots},
                     {"residual", residual},
                     {"negative_moment_flag", p_est.negative_flag},
                     {"observed_W", observed.w}};
        std::ostringstream line;
        line << "recovered powers: " << join(roots);
        std::ostringstream csv;
        csv.precision(17);
        csv << "root\n";
        for (double r : roots) csv << r << '\n';
        sink.deliver("estimate-powers", sink.format == "json" ? body.dump(2) + "\n" : csv.str(), line.str());
        return 0;
    }

    if (*wavelength_cmd) {
        std::vector<double> power_set = parse_list(powers_list);
        vdm::PhaseDistribution true_phase =
            vdm::PhaseDistribution::sin_of_uniform(antenna_d, true_lambda, half_angle);
        vdm::SimConfig cfg =
            make_sim_config(dim_n, dim_l, dim_k, sigma, true_phase, power_set, batches, seed, workers);
        auto observed_stats = vdm::averaged_covariance_moments(cfg, false, 3);
        vdm::CovarianceMoments observed;
        observed.w = {observed_stats.mean[0], observed_stats.mean[1], observed_stats.mean[2]};
        observed.sigma = sigma;

        std::array<double, 3> p_moments{};
        auto pm = power_set_moments(power_set, 3);
        std::copy(pm.begin(), pm.end(), p_moments.begin());
        vdm::SystemDims dims{dim_n, dim_l, dim_k};

        auto forward = [&](double cand_lambda) {
            // candidates violating the geometric constraint cannot explain
            // any data; push them out of the running
            if (2.0 * antenna_d * std::sin(half_angle) / cand_lambda >= 1.0) {
                return std::array<double, 3>{1e9, 1e9, 1e9};
            }
            double i2 = vdm::sin_family_I2_closed_form(antenna_d, cand_lambda, half_angle);
            double i3 = vdm::sin_family_I3_closed_form(antenna_d, cand_lambda, half_angle);
            return vdm::predict_W_moments_asymptotic(p_moments, sigma, dims, i2, i3);
        };
        std::vector<double> grid;
        for (double w = wl_min; w <= wl_max + 1e-12; w += wl_step) grid.push_back(w);
        auto result = vdm::grid_search_estimate(grid, observed, forward);

        sink.manifest_inputs = {{"N", dim_n},       {"L", dim_l},       {"K", dim_k},
                                {"sigma", sigma},   {"seed", seed},     {"d", antenna_d},
                                {"alpha", half_angle}, {"true_lambda", true_lambda}, {"batches", batches}};
        std::ostringstream line;
        line << "estimated lambda = " << result.best;
        json body = grid_result_json(result);
        sink.deliver("estimate-wavelength", sink.format == "json" ? body.dump(2) + "\n" : grid_result_csv(result),
                     line.str());
        return 0;
    }

    if (*alpha_cmd) {
        vdm::PhaseDistribution true_phase = vdm::PhaseDistribution::one_sided_uniform(true_alpha);
        vdm::SimConfig cfg = make_sim_config(dim_n, dim_l, dim_k, sigma, true_phase, {}, batches, seed, workers);
        auto observed_stats = vdm::averaged_covariance_moments(cfg, true, 3);
        vdm::CovarianceMoments observed;
        observed.w = {observed_stats.mean[0], observed_stats.mean[1], observed_stats.mean[2]};
        observed.sigma = sigma;

        vdm::SystemDims dims{dim_n, dim_l, dim_k};
        auto est = vdm::estimate_alpha(observed, dims);

        sink.manifest_inputs = {{"N", dim_n},     {"L", dim_l},   {"K", dim_k},          {"sigma", sigma},
                                {"seed", seed},   {"true_alpha", true_alpha}, {"batches", batches}};
        json body = {{"alpha", est.alpha},
                     {"I2", est.I2},
                     {"I3_from_w3", est.I3_from_w3},
                     {"I3_consistency", est.I3_consistency},
                     {"observed_W", observed.w}};
        std::ostringstream line;
        line << "estimated alpha = " << est.alpha;
        std::ostringstream csv;
        csv.precision(17);
        csv << "alpha,I2,I3_from_w3,I3_consistency\n"
            << est.alpha << ',' << est.I2 << ',' << est.I3_from_w3 << ',' << est.I3_consistency << '\n';
        sink.deliver("estimate-alpha", sink.format == "json" ? body.dump(2) + "\n" : csv.str(), line.str());
        return 0;
    }

    if (*mse_cmd) {
        std::vector<int> sizes;
        for (double s : parse_list(sizes_list)) sizes.push_back(static_cast<int>(s));
        auto rows = vdm::mse_convergence_study(sizes, mse_samples, order, mse_kind, seed, workers);
        sink.manifest_inputs = {{"sizes", sizes}, {"samples", mse_samples}, {"kind", mse_kind},
                                {"order", order}, {"seed", seed}};
        std::string csv = vdm::mse_rows_to_csv(rows);
        json body = json::array();
        for (const auto& r : rows) {
            body.push_back({{"N", r.N},
                            {"L", r.L},
                            {"samples", r.samples},
                            {"mse_estimated_vs_exact", r.mse_estimated_vs_exact},
                            {"mse_exact_vs_asymptotic", r.mse_exact_vs_asymptotic}});
        }
        sink.deliver("mse-study", sink.format == "json" ? body.dump(2) + "\n" : csv,
                     "rows: " + std::to_string(rows.size()));
        return 0;
    }

    if (*hist_cmd) {
        vdm::PhaseDistribution phase = vdm::PhaseDistribution::parse(phase_spec);
        std::vector<vdm::ComplexMatrix> grams;
        for (std::int64_t s = 0; s < hist_samples; ++s) {
            vdm::Rng rng = vdm::Rng::stream(seed, static_cast<std::uint64_t>(s));
            if (hist_kind == "vandermonde") {
                grams.push_back(vdm::sample_vandermonde(dim_n, dim_l, phase, rng).gram());
            } else {
                vdm::ComplexMatrix x = vdm::sample_complex_gaussian(dim_l, dim_n, rng);
                x.scale(1.0 / std::sqrt(static_cast<double>(dim_n)));
                grams.push_back(x.adjoint().gram());  // (1/N) X X^H as the Gram of X^H/sqrt(N)
            }
        }
        auto hist = vdm::mean_eigenvalue_histogram(grams, bins, hist_lo, hist_hi);
        sink.manifest_inputs = {{"kind", hist_kind}, {"N", dim_n},          {"L", dim_l},
                                {"samples", hist_samples}, {"bins", bins}, {"phase", phase_spec},
                                {"seed", seed}};
        json body = json::array();
        for (std::size_t b = 0; b < hist.mass.size(); ++b) {
            body.push_back({{"left", hist.bin_left[b]}, {"right", hist.bin_right[b]}, {"mass", hist.mass[b]}});
        }
        sink.deliver("histogram", sink.format == "json" ? body.dump(2) + "\n" : hist.to_csv(),
                     "bins: " + std::to_string(hist.mass.size()));
        return 0;
    }

    if (*cap_cmd) {
        vdm::PhaseDistribution phase = vdm::PhaseDistribution::parse(phase_spec);
        std::vector<double> snrs = parse_list(snr_list);
        std::ostringstream csv;
        csv.precision(17);
        csv << "snr,sample,capacity,gaussian_asymptotic\n";
        json body = json::array();
        for (double rho : snrs) {
            double reference = vdm::gaussian_asymptotic_capacity(rho);
            for (std::int64_t s = 0; s < cap_samples; ++s) {
                vdm::Rng rng = vdm::Rng::stream(seed, static_cast<std::uint64_t>(s));
                vdm::ComplexMatrix gram;
                if (cap_kind == "vandermonde") {
                    // V V^H of a square Vandermonde sample
                    gram = vdm::sample_vandermonde(dim_n, dim_n, phase, rng).adjoint().gram();
                } else {
                    vdm::ComplexMatrix x = vdm::sample_complex_gaussian(dim_n, dim_n, rng);
                    x.scale(1.0 / std::sqrt(static_cast<double>(dim_n)));
                    gram = x.adjoint().gram();
                }
                double cap = vdm::capacity_realization(gram, rho);
                csv << rho << ',' << s << ',' << cap << ',' << reference << '\n';
                body.push_back(
                    {{"snr", rho}, {"sample", s}, {"capacity", cap}, {"gaussian_asymptotic", reference}});
            }
        }
        sink.manifest_inputs = {{"kind", cap_kind}, {"N", dim_n}, {"snr", snrs},
                                {"samples", cap_samples}, {"seed", seed}};
        sink.deliver("capacity", sink.format == "json" ? body.dump(2) + "\n" : csv.str(),
                     "rows: " + std::to_string(snrs.size() * static_cast<std::size_t>(cap_samples)));
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const vdm::estimation_noise_error& e) {
        std::cerr << json({{"error", {{"code", "estimation-noise"}, {"message", e.what()}}}}).dump() << '\n';
        return 3;
    } catch (const vdm::size_error& e) {
        std::cerr << json({{"error", {{"code", "size"}, {"message", e.what()}}}}).dump() << '\n';
        return 3;
    } catch (const vdm::domain_error& e) {
        std::cerr << json({{"error", {{"code", "domain"}, {"message", e.what()}}}}).dump() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << json({{"error", {{"code", "internal"}, {"message", e.what()}}}}).dump() << '\n';
        return 3;
    }
}
