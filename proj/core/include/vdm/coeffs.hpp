#pragma once

#include "vdm/linear_system.hpp"
#include "vdm/partition.hpp"
#include "vdm/phase.hpp"
#include "vdm/piecewise_polynomial.hpp"
#include "vdm/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace vdm {

// Mixed-moment expansion coefficient value. Exact kinds carry the rational;
// MC estimates carry the binomial (or sample) standard error.
struct ExpansionCoefficient {
    enum class Kind { ExactRational, FiniteNRational, McEstimate };

    Kind kind = Kind::ExactRational;
    double value = 0.0;
    std::optional<Rational> exact;  // set for the exact kinds
    double stderr_value = 0.0;      // > 0 iff McEstimate
    std::int64_t samples = 0;       // 0 for exact kinds

    static ExpansionCoefficient exact_rational(Rational r, Kind kind = Kind::ExactRational) {
        ExpansionCoefficient c;
        c.kind = kind;
        c.exact = r;
        c.value = r.to_double();
        return c;
    }
    static ExpansionCoefficient mc(double value, double stderr_value, std::int64_t samples) {
        ExpansionCoefficient c;
        c.kind = Kind::McEstimate;
        c.value = value;
        c.stderr_value = stderr_value;
        c.samples = samples;
        return c;
    }

    std::string kind_name() const;
    static Kind kind_from_name(const std::string& name);
};

struct McOptions {
    std::int64_t samples = 1000000;
    std::uint64_t seed = 1;
    int workers = 1;
};

// Exact uniform-phase coefficient: 1 for noncrossing partitions; known
// rationals for the crossing cores reachable by the reductions
// (element omission inside a block, singleton elision, rotation/reflection of
// the balance system) from either the tabulated crossing partitions or the
// cyclic-shift family; nullopt when no exact value is known.
std::optional<ExpansionCoefficient> coeff_uniform_exact(const SetPartition& rho);

// Monte-Carlo volume of the balance polytope: free variables uniform on
// [0,1], dependent ones solved, hits counted. Deterministic for a fixed seed
// independently of the worker count. samples >= 1e4.
ExpansionCoefficient coeff_uniform_mc(const SetPartition& rho, const McOptions& opt);

// Exact finite-size coefficient |S_{rho,N}| / N^{n+1-|rho|} by enumerating
// the free variables of the integer balance system. Guards: free dimension
// <= 4 and N <= 256.
ExpansionCoefficient coeff_uniform_finite_N(const SetPartition& rho, int N);

// K_{rho,omega} = K_{rho,u} * I_{|rho|}(omega) for continuous phase
// densities. uniform_coeff must be K_{rho,u} (exact or MC).
ExpansionCoefficient coeff_density(const SetPartition& rho, const PhaseDistribution& omega,
                                   const ExpansionCoefficient& uniform_coeff);

// I_k for a continuous phase distribution; closed forms for the sin family
// at k = 2, 3, quadrature otherwise.
double density_power_integral(const PhaseDistribution& omega, int k);

// Generalized-Vandermonde coefficient under uniform phase: the balance-
// polytope volume weighted by the exponent density at every variable.
// Reduces to coeff_uniform_mc for the uniform power distribution.
ExpansionCoefficient coeff_generalized(const SetPartition& rho, const PowerDistribution& power,
                                       const McOptions& opt);

// Second-order (two-trace) coefficient on {1..i+j}. Exact values for the
// eleven partitions of P(2,2); MC volume of the shifted system otherwise.
ExpansionCoefficient coeff_second_order(const SetPartition& rho, int i, int j, const McOptions& opt);

// Dihedral-canonical text of a partition (minimum over rotations and the
// reflection); rotations and reflections permute the balance system, so the
// coefficient only depends on this key.
std::string dihedral_canonical_text(const SetPartition& p);

// Fully reduced crossing core of a partition: singleton blocks elided,
// elements with their cyclic successor in the same block omitted.
SetPartition reduce_partition(const SetPartition& p);

} // namespace vdm
