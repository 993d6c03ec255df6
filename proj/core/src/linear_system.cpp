#include "vdm/linear_system.hpp"

#include "vdm/errors.hpp"
#include "vdm/rational.hpp"

#include <algorithm>

namespace vdm {

namespace {

BalanceSystem solve_rows(int n, std::vector<std::vector<Rational>> rows, int expected_rank) {
    // Gauss-Jordan, pivot columns in descending variable-index order.
    std::vector<int> pivot_col_of_row;
    std::vector<bool> row_used(rows.size(), false);
    std::vector<bool> col_is_pivot(static_cast<std::size_t>(n), false);
    std::vector<int> pivot_rows;

    for (int col = n - 1; col >= 0; --col) {
        int pivot_row = -1;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!row_used[r] && rows[r][static_cast<std::size_t>(col)] != Rational(0)) {
                pivot_row = static_cast<int>(r);
                break;
            }
        }
        if (pivot_row < 0) continue;
        row_used[static_cast<std::size_t>(pivot_row)] = true;
        col_is_pivot[static_cast<std::size_t>(col)] = true;
        pivot_rows.push_back(pivot_row);
        pivot_col_of_row.push_back(col);

        Rational inv = Rational(1) / rows[static_cast<std::size_t>(pivot_row)][static_cast<std::size_t>(col)];
        for (auto& v : rows[static_cast<std::size_t>(pivot_row)]) v *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(r) == pivot_row) continue;
            Rational factor = rows[r][static_cast<std::size_t>(col)];
            if (factor == Rational(0)) continue;
            for (int c = 0; c < n; ++c) {
                rows[r][static_cast<std::size_t>(c)] -=
                    factor * rows[static_cast<std::size_t>(pivot_row)][static_cast<std::size_t>(c)];
            }
        }
    }

    int rank = static_cast<int>(pivot_rows.size());
    if (expected_rank >= 0 && rank != expected_rank) {
        throw domain_error("balance system rank " + std::to_string(rank) + " differs from expected " +
                           std::to_string(expected_rank));
    }

    BalanceSystem sys;
    sys.n = n;
    for (int col = 0; col < n; ++col) {
        if (!col_is_pivot[static_cast<std::size_t>(col)]) sys.free_vars.push_back(col + 1);
    }
    for (std::size_t p = 0; p < pivot_rows.size(); ++p) {
        const auto& row = rows[static_cast<std::size_t>(pivot_rows[p])];
        BalanceSystem::Dependent dep;
        dep.var = pivot_col_of_row[p] + 1;
        for (int col = 0; col < n; ++col) {
            if (col == pivot_col_of_row[p]) continue;
            const Rational& c = row[static_cast<std::size_t>(col)];
            if (c == Rational(0)) continue;
            if (c.den() != 1) throw domain_error("balance system produced a non-integer relation");
            dep.combo.emplace_back(col + 1, -c.num());
        }
        sys.dependents.push_back(std::move(dep));
    }
    std::sort(sys.dependents.begin(), sys.dependents.end(),
              [](const BalanceSystem::Dependent& a, const BalanceSystem::Dependent& b) { return a.var < b.var; });
    return sys;
}

std::vector<std::vector<Rational>> build_rows(const SetPartition& rho, const std::vector<int>& prev) {
    const int n = rho.n();
    std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(rho.block_count()),
                                            std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
    for (int k = 1; k <= n; ++k) {
        int blk = rho.block_of(k);
        rows[static_cast<std::size_t>(blk)][static_cast<std::size_t>(prev[static_cast<std::size_t>(k - 1)] - 1)] +=
            Rational(1);
        rows[static_cast<std::size_t>(blk)][static_cast<std::size_t>(k - 1)] -= Rational(1);
    }
    return rows;
}

} // namespace

BalanceSystem solve_balance_system(const SetPartition& rho) {
    const int n = rho.n();
    std::vector<int> prev(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) prev[static_cast<std::size_t>(k - 1)] = (k == 1) ? n : k - 1;
    return solve_rows(n, build_rows(rho, prev), rho.block_count() - 1);
}

BalanceSystem solve_balance_system_second_order(const SetPartition& rho, int i, int j) {
    if (i < 1 || j < 1 || rho.n() != i + j) throw domain_error("second-order system needs rho on {1..i+j}");
    bool mixes = false;
    for (const auto& b : rho.blocks()) {
        bool left = false, right = false;
        for (int e : b) (e <= i ? left : right) = true;
        if (left && right) {
            mixes = true;
            break;
        }
    }
    if (!mixes) throw domain_error("second-order coefficient requires a partition mixing the two trace intervals");

    const int n = i + j;
    std::vector<int> prev(static_cast<std::size_t>(n));
    for (int k = 1; k <= i; ++k) prev[static_cast<std::size_t>(k - 1)] = (k == 1) ? i : k - 1;
    for (int k = i + 1; k <= n; ++k) prev[static_cast<std::size_t>(k - 1)] = (k == i + 1) ? n : k - 1;
    return solve_rows(n, build_rows(rho, prev), rho.block_count() - 1);
}

} // namespace vdm
