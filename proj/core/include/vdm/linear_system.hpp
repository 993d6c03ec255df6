#pragma once

#include "vdm/partition.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace vdm {

// Solved block-balance system of a partition. For each block W the equation
// sum_{k in W} x_{prev(k)} = sum_{k in W} x_k is set up, where prev is the
// cyclic predecessor (one trace) or the per-interval cyclic predecessor (two
// traces, second-order moments). Gaussian elimination over rationals with
// pivots chosen in descending variable order leaves the lowest-index
// variables free; every dependent variable is an integer combination of the
// free ones (the equations form a graph incidence system, which is totally
// unimodular).
struct BalanceSystem {
    int n = 0;
    std::vector<int> free_vars;  // 1-based variable indices, ascending

    struct Dependent {
        int var = 0;
        // (free variable index, integer coefficient)
        std::vector<std::pair<int, std::int64_t>> combo;
    };
    std::vector<Dependent> dependents;

    int free_dimension() const { return static_cast<int>(free_vars.size()); }
};

// One-trace system: prev(k) = k-1 cyclically on {1..n}. Rank is always
// |rho| - 1, so the free dimension is n + 1 - |rho|.
BalanceSystem solve_balance_system(const SetPartition& rho);

// Two-trace system on {1..i+j}: prev cycles within [1,i] and within
// [i+1,i+j]. Requires a partition mixing the two intervals (otherwise the
// system decouples and the normalization changes); domain error if not.
BalanceSystem solve_balance_system_second_order(const SetPartition& rho, int i, int j);

} // namespace vdm
