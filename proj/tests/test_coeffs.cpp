#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vdm/coeff_cache.hpp"
#include "vdm/coeffs.hpp"
#include "vdm/errors.hpp"
#include "vdm/linear_system.hpp"
#include "vdm/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

using namespace vdm;

namespace {

// Brute-force finite-size lattice count over every tuple, independent of the
// free-variable elimination path.
Rational finite_n_brute_force(const SetPartition& rho, int N) {
    const int n = rho.n();
    std::vector<int> tuple(static_cast<std::size_t>(n), 0);
    std::int64_t hits = 0;
    std::int64_t total_tuples = 1;
    for (int i = 0; i < n; ++i) total_tuples *= N;
    for (std::int64_t code = 0; code < total_tuples; ++code) {
        std::int64_t rest = code;
        for (int i = 0; i < n; ++i) {
            tuple[static_cast<std::size_t>(i)] = static_cast<int>(rest % N);
            rest /= N;
        }
        bool ok = true;
        for (const auto& block : rho.blocks()) {
            int lhs = 0, rhs = 0;
            for (int k : block) {
                int prev = (k == 1) ? n : k - 1;
                lhs += tuple[static_cast<std::size_t>(prev - 1)];
                rhs += tuple[static_cast<std::size_t>(k - 1)];
            }
            if (lhs != rhs) {
                ok = false;
                break;
            }
        }
        if (ok) ++hits;
    }
    Rational denom(1);
    for (int i = 0; i < n + 1 - rho.block_count(); ++i) denom *= Rational(N);
    return Rational(hits) / denom;
}

const SetPartition kCross4 = SetPartition::from_text("1,3/2,4");

} // namespace

TEST_CASE("convolution polynomials: known low-order pieces") {
    auto a2 = convolution_polynomials(2);
    REQUIRE(a2.interval_count() == 2);
    CHECK(a2.pieces[0].eval(Rational(1, 2)) == Rational(1, 2));   // a_0 = x
    CHECK(a2.pieces[1].eval(Rational(3, 2)) == Rational(1, 2));   // a_1 = 2 - x

    auto a3 = convolution_polynomials(3);
    REQUIRE(a3.interval_count() == 3);
    CHECK(a3.pieces[0].eval(Rational(1)) == Rational(1, 2));      // a_0 = x^2/2
    CHECK(a3.pieces[2].eval(Rational(2)) == Rational(1, 2));      // a_2 = (3-x)^2/2
    CHECK(a3.is_continuous());

    // int (a^{(3)})^2 over [0,3] = 11/20
    CHECK(a3.integral_of_power(2) == Rational(11, 20));
    // total mass is 1 for every m (it is a probability density)
    for (int m = 1; m <= 10; ++m) {
        CHECK(convolution_polynomials(m).integral_of_power(1) == Rational(1));
        CHECK(convolution_polynomials(m).is_continuous());
    }
}

TEST_CASE("cyclic-shift coefficients") {
    CHECK(cyclic_shift_coefficient(2, 2) == Rational(2, 3));
    CHECK(cyclic_shift_coefficient(2, 3) == Rational(1, 2));
    CHECK(cyclic_shift_coefficient(3, 2) == Rational(11, 20));
}

TEST_CASE("exact uniform coefficients: the tabulated crossing values") {
    auto value = [](const char* text) {
        auto c = coeff_uniform_exact(SetPartition::from_text(text));
        REQUIRE(c.has_value());
        REQUIRE(c->exact.has_value());
        return *c->exact;
    };
    CHECK(value("1,3/2,4") == Rational(2, 3));
    CHECK(value("1,4/2,5/3,6") == Rational(1, 2));
    CHECK(value("1,4/2,6/3,5") == Rational(1, 2));
    CHECK(value("1,3,5/2,4,6") == Rational(11, 20));
    CHECK(value("1,5/3,7/2,4,6") == Rational(9, 20));
    CHECK(value("1,6/2,4/3,5,7") == Rational(9, 20));
}

TEST_CASE("exact uniform coefficients: noncrossing iff 1, everything n <= 7 resolves") {
    for (int n = 1; n <= 7; ++n) {
        for (const auto& rho : enumerate_partitions(n)) {
            auto c = coeff_uniform_exact(rho);
            REQUIRE_MESSAGE(c.has_value(), "unresolved partition ", rho.to_text());
            if (is_noncrossing(rho)) {
                CHECK(*c->exact == Rational(1));
            } else {
                CHECK(*c->exact < Rational(1));
                CHECK(Rational(0) < *c->exact);
            }
        }
    }
}

TEST_CASE("balance system shape") {
    BalanceSystem sys = solve_balance_system(kCross4);
    CHECK(sys.free_dimension() == 3);  // n + 1 - |rho|
    // descending pivot order leaves the low indices free
    CHECK(sys.free_vars == std::vector<int>{1, 2, 3});
    REQUIRE(sys.dependents.size() == 1);
    CHECK(sys.dependents[0].var == 4);

    // one-block partitions are unconstrained
    CHECK(solve_balance_system(SetPartition::one_block(5)).dependents.empty());

    // dependence classes of a noncrossing partition realize the Kreweras
    // complement (variable x_k corresponds to the barred point between k and
    // k+1): dependents tie to exactly one free variable with coefficient 1.
    for (const auto& rho : enumerate_partitions(5)) {
        if (!is_noncrossing(rho)) continue;
        BalanceSystem s = solve_balance_system(rho);
        SetPartition complement = kreweras_complement(rho);
        for (const auto& dep : s.dependents) {
            REQUIRE(dep.combo.size() == 1);
            CHECK(dep.combo[0].second == 1);
            CHECK(complement.block_of(dep.var) == complement.block_of(dep.combo[0].first));
        }
    }
}

TEST_CASE("MC volume estimator hits the table values") {
    McOptions opt;
    opt.samples = 1000000;
    opt.seed = 42;

    auto mc = coeff_uniform_mc(kCross4, opt);
    CHECK(mc.kind == ExpansionCoefficient::Kind::McEstimate);
    CHECK(mc.samples == opt.samples);
    CHECK(mc.stderr_value > 0);
    CHECK(mc.stderr_value < 0.001);
    CHECK(std::abs(mc.value - 2.0 / 3.0) < 4 * mc.stderr_value);

    auto mc6 = coeff_uniform_mc(SetPartition::from_text("1,4/2,5/3,6"), opt);
    CHECK(std::abs(mc6.value - 0.5) < 4 * mc6.stderr_value);

    // degenerate: no constraints
    auto one = coeff_uniform_mc(SetPartition::one_block(3), opt);
    CHECK(one.kind == ExpansionCoefficient::Kind::ExactRational);
    CHECK(one.value == 1.0);

    CHECK_THROWS_AS(coeff_uniform_mc(kCross4, McOptions{100, 1, 1}), domain_error);
}

TEST_CASE("MC agrees with every exact coefficient for n <= 6 within 4 sigma") {
    McOptions opt;
    opt.samples = 200000;
    opt.seed = 7;
    for (int n = 4; n <= 6; ++n) {
        for (const auto& rho : enumerate_partitions(n)) {
            if (is_noncrossing(rho)) continue;
            auto exact = coeff_uniform_exact(rho);
            REQUIRE(exact.has_value());
            auto mc = coeff_uniform_mc(rho, opt);
            CHECK_MESSAGE(std::abs(mc.value - exact->value) < 4 * mc.stderr_value + 1e-12,
                          rho.to_text(), " mc=", mc.value, " exact=", exact->value);
        }
    }
}

TEST_CASE("MC determinism: same seed, any worker count") {
    McOptions serial{200000, 99, 1};
    McOptions parallel{200000, 99, 4};
    CHECK(coeff_uniform_mc(kCross4, serial).value == coeff_uniform_mc(kCross4, parallel).value);
}

TEST_CASE("finite-N coefficients") {
    // N = 2 enumerates 2^3 free tuples; the value must be 2/3 + 1/12 = 3/4
    auto small = coeff_uniform_finite_N(kCross4, 2);
    CHECK(small.kind == ExpansionCoefficient::Kind::FiniteNRational);
    CHECK(*small.exact == Rational(3, 4));
    CHECK(*small.exact == Rational(2, 3) + Rational(1, 12));

    // residual exactly 1/(3 N^2)
    for (int N : {2, 3, 5, 8, 16, 64}) {
        auto c = coeff_uniform_finite_N(kCross4, N);
        CHECK(*c.exact - Rational(2, 3) == Rational(1, 3 * static_cast<std::int64_t>(N) * N));
    }

    // matches the all-tuples brute force on small cases
    for (int N : {2, 3, 4}) {
        for (const auto& rho : enumerate_partitions(4)) {
            auto fast = coeff_uniform_finite_N(rho, N);
            CHECK(*fast.exact == finite_n_brute_force(rho, N));
        }
    }

    // noncrossing partitions within the cost guard count to exactly 1
    for (int N : {2, 7, 32}) {
        for (const auto& rho : enumerate_partitions(5)) {
            if (!is_noncrossing(rho)) continue;
            if (rho.n() + 1 - rho.block_count() > 4) continue;  // guard
            CHECK(*coeff_uniform_finite_N(rho, N).exact == Rational(1));
        }
    }

    CHECK_THROWS_AS(coeff_uniform_finite_N(kCross4, 1000), size_error);
    CHECK_THROWS_AS(coeff_uniform_finite_N(SetPartition::one_block(7), 16), size_error);
}

TEST_CASE("density coefficients") {
    PhaseDistribution uniform = PhaseDistribution::uniform();
    auto base = *coeff_uniform_exact(kCross4);

    // uniform phase: unchanged
    auto same = coeff_density(kCross4, uniform, base);
    CHECK(same.value == base.value);

    // one-block partition: I_1 = 1 for every continuous density
    PhaseDistribution sin_phase = PhaseDistribution::sin_of_uniform(1.0, 2.0, 0.78539816339744830961);
    auto top = coeff_density(SetPartition::one_block(3), sin_phase, *coeff_uniform_exact(SetPartition::one_block(3)));
    CHECK(top.value == doctest::Approx(1.0).epsilon(1e-10));

    // crossing pair under the sin family: (2/3) * I_2
    double i2 = density_power_integral(sin_phase, 2);
    auto sin_coeff = coeff_density(kCross4, sin_phase, base);
    CHECK(sin_coeff.value == doctest::Approx(2.0 / 3.0 * i2).epsilon(1e-12));

    PhaseDistribution atoms = PhaseDistribution::atomic({0.0}, {1.0});
    CHECK_THROWS_AS(coeff_density(kCross4, atoms, base), domain_error);
}

TEST_CASE("density power integrals I_k") {
    PhaseDistribution uniform = PhaseDistribution::uniform();
    for (int k = 1; k <= 8; ++k) CHECK(density_power_integral(uniform, k) == 1.0);

    // one-sided uniform on [0, alpha]: I_k = (2pi/alpha)^{k-1}
    const double alpha = 0.9;
    PhaseDistribution one_sided = PhaseDistribution::one_sided_uniform(alpha);
    const double ratio = 2.0 * 3.14159265358979323846 / alpha;
    CHECK(density_power_integral(one_sided, 2) == doctest::Approx(ratio).epsilon(1e-10));
    CHECK(density_power_integral(one_sided, 3) == doctest::Approx(ratio * ratio).epsilon(1e-10));

    // sin family: closed form vs quadrature of the density
    const double pi = 3.14159265358979323846;
    PhaseDistribution sin_phase = PhaseDistribution::sin_of_uniform(1.0, 2.0, pi / 4.0);
    double i2_closed = sin_family_I2_closed_form(1.0, 2.0, pi / 4.0);
    // lambda = 2d, alpha = pi/4: (8/pi^2) ln((2+sqrt2)/(2-sqrt2)) ~ 1.4289
    double expected = 8.0 / (pi * pi) * std::log((2.0 + std::sqrt(2.0)) / (2.0 - std::sqrt(2.0)));
    CHECK(i2_closed == doctest::Approx(expected).epsilon(1e-14));
    CHECK(i2_closed == doctest::Approx(1.4289).epsilon(1e-4));
    double i2_quad = sin_phase.power_integral(2);
    CHECK(i2_quad == doctest::Approx(i2_closed).epsilon(1e-8));

    CHECK_THROWS_AS(density_power_integral(PhaseDistribution::atomic({0.0}, {1.0}), 2), domain_error);
}

TEST_CASE("generalized coefficients") {
    McOptions opt;
    opt.samples = 400000;
    opt.seed = 11;

    // uniform power reduces to the plain estimator
    auto plain = coeff_generalized(kCross4, PowerDistribution::uniform_ramp(), opt);
    CHECK(std::abs(plain.value - 2.0 / 3.0) < 4 * plain.stderr_value);

    PowerDistribution ramp2x = PowerDistribution::density([](double y) { return 2.0 * y; }, {});

    // one-block partition: no constraints, normalized density integrates to 1
    auto top = coeff_generalized(SetPartition::one_block(2), ramp2x, opt);
    CHECK(top.value == 1.0);

    // 0_2 (x_1 = x_2): K = int p^2 = int (2y)^2 = 4/3; oracle below is the
    // weighted lattice count of the defining finite-N integral
    auto pair = coeff_generalized(SetPartition::singletons(2), ramp2x, opt);
    auto weighted_lattice = [](int N) {
        // density 2y: cell mass p(r) = ((r+1)^2 - r^2)/N^2; weight N p(r)
        double sum = 0.0;
        for (int r = 0; r < N; ++r) {
            double w = static_cast<double>(2 * r + 1) / N;
            sum += w * w;
        }
        return sum / N;  // free dimension is 1
    };
    double oracle_64 = weighted_lattice(64);
    double oracle_256 = weighted_lattice(256);
    CHECK(std::abs(oracle_256 - 4.0 / 3.0) < std::abs(oracle_64 - 4.0 / 3.0));  // converging
    CHECK(std::abs(pair.value - 4.0 / 3.0) < 5 * pair.stderr_value + 2e-3);
    CHECK(pair.value == doctest::Approx(oracle_256).epsilon(0.02));

    CHECK_THROWS_AS(PowerDistribution::density([](double) { return 2.0; }, {}), domain_error);
}

TEST_CASE("second-order coefficients on P(2,2)") {
    McOptions opt;
    opt.samples = 300000;
    opt.seed = 3;

    auto c1 = coeff_second_order(SetPartition::from_text("1,3/2,4"), 2, 2, opt);
    CHECK(*c1.exact == Rational(2, 3));
    auto c2 = coeff_second_order(SetPartition::from_text("1,4/2,3"), 2, 2, opt);
    CHECK(*c2.exact == Rational(2, 3));
    auto c3 = coeff_second_order(SetPartition::one_block(4), 2, 2, opt);
    CHECK(*c3.exact == Rational(1));

    // non-mixing partitions are rejected
    CHECK_THROWS_AS(coeff_second_order(SetPartition::from_text("1,2/3,4"), 2, 2, opt), domain_error);
    CHECK_THROWS_AS(coeff_second_order(SetPartition::singletons(4), 2, 2, opt), domain_error);

    // the MC path (larger i, j) agrees with the exact special cases when
    // applied to the same systems transplanted to (2,2)
    BalanceSystem sys = solve_balance_system_second_order(SetPartition::from_text("1,3/2,4"), 2, 2);
    CHECK(sys.free_dimension() == 3);
}

TEST_CASE("second-order MC on a P(2,3) partition is a valid volume") {
    McOptions opt;
    opt.samples = 200000;
    opt.seed = 5;
    auto c = coeff_second_order(SetPartition::from_text("1,3/2,4/5"), 2, 3, opt);
    CHECK(c.value > 0.0);
    CHECK(c.value <= 1.0);
}

TEST_CASE("reductions") {
    // adjacent omission: {1,2,4},{3,5} -> {1,3},{2,4}
    SetPartition reducible = SetPartition::from_text("1,2,4/3,5");
    CHECK(reduce_partition(reducible) == kCross4);
    CHECK(coeff_uniform_exact(reducible)->exact == Rational(2, 3));

    // singleton elision: {1,3},{2,4},{5} -> {1,3},{2,4}
    SetPartition with_singleton = SetPartition::from_text("1,3/2,4/5");
    CHECK(reduce_partition(with_singleton) == kCross4);

    // rotation: {1,3},{2,5},{4,6} is a rotated {1,4},{2,6},{3,5}
    CHECK(coeff_uniform_exact(SetPartition::from_text("1,3/2,5/4,6"))->exact == Rational(1, 2));
}

TEST_CASE("coefficient cache round trip") {
    CoefficientCache cache;
    cache.put(kCross4, *coeff_uniform_exact(kCross4));
    McOptions opt;
    opt.samples = 50000;
    opt.seed = 1;
    SetPartition sigma23 = SetPartition::from_text("1,4/2,5/3,6");
    cache.put(sigma23, coeff_uniform_mc(sigma23, opt));

    std::string path = "coeff_cache_test.txt";
    cache.save(path);

    CoefficientCache loaded;
    loaded.load(path);
    CHECK(loaded.size() == 2);
    auto exact = loaded.get(kCross4);
    REQUIRE(exact.has_value());
    CHECK(*exact->exact == Rational(2, 3));
    auto mc = loaded.get(sigma23);
    REQUIRE(mc.has_value());
    CHECK(mc->kind == ExpansionCoefficient::Kind::McEstimate);
    CHECK(mc->samples == 50000);

    // an exact entry is never displaced by an estimate
    ExpansionCoefficient noisy = ExpansionCoefficient::mc(0.9, 0.1, 10);
    loaded.put(kCross4, noisy);
    CHECK(loaded.get(kCross4)->exact == Rational(2, 3));

    std::remove(path.c_str());
}
