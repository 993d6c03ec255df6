#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vdm/coeff_cache.hpp"
#include "vdm/deconv.hpp"
#include "vdm/moments.hpp"
#include "vdm/randmat.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    std::string out_file = "cli_stdout.tmp";
    std::string cmd = std::string(VANDERMOMENT_CLI_PATH) + " " + args + " > " + out_file + " 2> cli_stderr.tmp";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    r.stdout_text = slurp(out_file);
    std::remove(out_file.c_str());
    return r;
}

} // namespace

TEST_CASE("coeff golden values") {
    auto r = run_cli("coeff --partition 1,3/2,4 --phase uniform --exact");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text == "2/3\n");

    auto nc = run_cli("coeff --partition 1,2/3,4 --exact");
    CHECK(nc.stdout_text == "1\n");

    auto fin = run_cli("coeff --partition 1,3/2,4 --finite-N 2");
    CHECK(fin.stdout_text == "3/4\n");

    auto mc = run_cli("coeff --partition 1,3/2,4 --mc-samples 100000 --seed 1");
    CHECK(mc.exit_code == 0);
    CHECK(mc.stdout_text.find("+/-") != std::string::npos);
}

TEST_CASE("moments and deconvolve golden values") {
    auto m = run_cli("moments --d 1,1,1,1 --c 1 --phase uniform --order 4");
    CHECK(m.exit_code == 0);
    CHECK(m.stdout_text == "1,2,5,14.666666666666666\n");

    auto d = run_cli("deconvolve --m 1,2,5,14.666666666666666 --c 1 --phase uniform");
    CHECK(d.exit_code == 0);
    CHECK(d.stdout_text.rfind("1,1,", 0) == 0);

    auto g = run_cli("deconvolve --m 1,2,5,14 --c 1 --model gaussian");
    CHECK(g.stdout_text.rfind("1,1,1,1", 0) == 0);

    // library oracle: moments of a non-trivial d vector
    vdm::MomentVector dv;
    dv.values = {0.5, 0.75, 1.25};
    auto expected = vdm::vandermonde_forward(dv, vdm::CoeffProvider());
    auto cli = run_cli("moments --d 0.5,0.75,1.25 --order 3");
    std::ostringstream want;
    want.precision(17);
    want << expected.values[0] << ',' << expected.values[1] << ',' << expected.values[2] << '\n';
    CHECK(cli.stdout_text == want.str());
}

TEST_CASE("exit codes: 2 on parse errors, 3 on domain errors") {
    CHECK(run_cli("nonsense-subcommand").exit_code == 2);
    CHECK(run_cli("coeff").exit_code == 2);                          // missing required
    CHECK(run_cli("coeff --partition 1,3/2,3 --exact").exit_code == 3);  // invalid partition
    CHECK(run_cli("coeff --partition 1,3,5,7/2,4/6,8 --exact").exit_code == 3);  // no exact value known
    CHECK(run_cli("moments --d 1,1 --order 4").exit_code == 3);      // too few d values
}

TEST_CASE("byte-identical outputs for an identical run spec") {
    auto once = run_cli("--output cli_out_a.csv estimate-paths --N 50 --K 8 --sigma 0.3 --true-L 16 "
                        "--grid-min 4 --grid-max 40 --grid-step 4 --batches 10 --seed 42");
    auto twice = run_cli("--output cli_out_b.csv estimate-paths --N 50 --K 8 --sigma 0.3 --true-L 16 "
                         "--grid-min 4 --grid-max 40 --grid-step 4 --batches 10 --seed 42");
    CHECK(once.exit_code == 0);
    CHECK(once.stdout_text == twice.stdout_text);
    CHECK(slurp("cli_out_a.csv") == slurp("cli_out_b.csv"));
    CHECK(!slurp("cli_out_a.csv.manifest.json").empty());

    // worker count must not change results either
    auto parallel = run_cli("--output cli_out_c.csv --workers 4 estimate-paths --N 50 --K 8 --sigma 0.3 "
                            "--true-L 16 --grid-min 4 --grid-max 40 --grid-step 4 --batches 10 --seed 42");
    CHECK(parallel.stdout_text == once.stdout_text);
    CHECK(slurp("cli_out_c.csv") == slurp("cli_out_a.csv"));

    std::remove("cli_out_a.csv");
    std::remove("cli_out_a.csv.manifest.json");
    std::remove("cli_out_b.csv");
    std::remove("cli_out_b.csv.manifest.json");
    std::remove("cli_out_c.csv");
    std::remove("cli_out_c.csv.manifest.json");
}

TEST_CASE("estimator subcommands against library oracles") {
    // mse-study CSV equals the library call with the same seed
    auto cli = run_cli("--output cli_mse.csv mse-study --sizes 16,32 --samples 40 --order 4 --seed 9");
    CHECK(cli.exit_code == 0);
    auto rows = vdm::mse_convergence_study({16, 32}, 40, 4, "vandermonde", 9, 1);
    CHECK(slurp("cli_mse.csv") == vdm::mse_rows_to_csv(rows));
    std::remove("cli_mse.csv");
    std::remove("cli_mse.csv.manifest.json");

    // histogram masses sum to 1
    auto hist = run_cli("--output cli_hist.csv histogram --kind gaussian --N 32 --L 32 --samples 4 "
                        "--bins 16 --lo 0 --hi 4 --seed 3");
    CHECK(hist.exit_code == 0);
    std::string csv = slurp("cli_hist.csv");
    double total = 0.0;
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        auto last_comma = line.rfind(',');
        total += std::stod(line.substr(last_comma + 1));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    std::remove("cli_hist.csv");
    std::remove("cli_hist.csv.manifest.json");

    // capacity CSV has the asymptotic reference column
    auto cap = run_cli("--output cli_cap.csv capacity --kind gaussian --N 24 --snr 1,4 --samples 2 --seed 5");
    CHECK(cap.exit_code == 0);
    CHECK(slurp("cli_cap.csv").rfind("snr,sample,capacity,gaussian_asymptotic", 0) == 0);
    std::remove("cli_cap.csv");
    std::remove("cli_cap.csv.manifest.json");
}

TEST_CASE("coefficient cache file is honored via the environment") {
    std::string cache_path = "cli_cache.txt";
    std::remove(cache_path.c_str());

    std::string cmd = std::string("VANDERMOMENT_CACHE=") + cache_path + " " + VANDERMOMENT_CLI_PATH +
                      " coeff --partition 1,5/2,6/3,7/4,8 --mc-samples 50000 --seed 4 > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);

    vdm::CoefficientCache cache;
    cache.load(cache_path);
    CHECK(cache.size() >= 1);
    auto hit = cache.get(vdm::SetPartition::from_text("1,5/2,6/3,7/4,8"));
    REQUIRE(hit.has_value());
    CHECK(hit->samples == 50000);
    std::remove(cache_path.c_str());
}
