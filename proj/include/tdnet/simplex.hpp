#ifndef TDNET_SIMPLEX_HPP
#define TDNET_SIMPLEX_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tdnet/errors.hpp"

namespace tdnet {

// Dense two-phase tableau simplex. Maximizes c.x subject to
//   A_eq x = b_eq,  A_ub x <= b_ub,  x >= 0.
// Dantzig pricing with a Bland fallback after a stall threshold. Scales fine
// for the desk-sized multi-commodity programs this library solves.
class SimplexSolver {
public:
    enum class Status { Optimal, Infeasible, Unbounded };

    struct Result {
        Status status = Status::Optimal;
        double objective = 0.0;
        std::vector<double> x;
    };

    explicit SimplexSolver(int num_vars) : n_(num_vars), objective_(static_cast<size_t>(num_vars), 0.0) {}

    void set_objective(int var, double coeff) { objective_[static_cast<size_t>(var)] = coeff; }

    void add_eq(std::vector<std::pair<int, double>> coeffs, double rhs) {
        rows_.push_back(RowSpec{std::move(coeffs), rhs, true});
    }
    void add_ub(std::vector<std::pair<int, double>> coeffs, double rhs) {
        rows_.push_back(RowSpec{std::move(coeffs), rhs, false});
    }

    Result solve() const {
        const int m = static_cast<int>(rows_.size());
        int num_slack = 0;
        for (const auto& r : rows_)
            if (!r.is_eq) ++num_slack;

        // Column layout: structural | slack | artificial | rhs.
        const int slack_base = n_;
        const int art_base = n_ + num_slack;
        const int total = art_base + m; // upper bound on artificial count
        const int width = total + 1;

        std::vector<double> tab(static_cast<size_t>(m) * width, 0.0);
        std::vector<int> basis(static_cast<size_t>(m), -1);
        auto at = [&](int i, int j) -> double& { return tab[static_cast<size_t>(i) * width + j]; };

        int slack_idx = 0;
        int art_count = 0;
        std::vector<int> art_cols;
        for (int i = 0; i < m; ++i) {
            const auto& r = rows_[static_cast<size_t>(i)];
            double sign = r.rhs < 0.0 ? -1.0 : 1.0;
            for (auto [j, v] : r.coeffs) at(i, j) += sign * v;
            at(i, total) = sign * r.rhs;
            if (!r.is_eq) {
                int sc = slack_base + slack_idx++;
                at(i, sc) = sign; // flipped <= rows become >= rows with surplus
                if (sign > 0.0) {
                    basis[static_cast<size_t>(i)] = sc;
                    continue;
                }
            }
            int ac = art_base + art_count++;
            at(i, ac) = 1.0;
            basis[static_cast<size_t>(i)] = ac;
            art_cols.push_back(ac);
        }

        std::vector<double> cost(static_cast<size_t>(total), 0.0);

        // Phase 1: minimize the artificial sum.
        for (int ac : art_cols) cost[static_cast<size_t>(ac)] = -1.0;
        std::vector<char> allowed(static_cast<size_t>(total), 1);
        double phase1 = run(tab, basis, cost, allowed, m, total, width);
        if (phase1 < -1e-7) return Result{Status::Infeasible, 0.0, {}};

        // Pivot any artificial still basic to a structural column, then drop
        // the artificial block entirely.
        for (int i = 0; i < m; ++i) {
            if (basis[static_cast<size_t>(i)] < art_base) continue;
            int pivot_col = -1;
            for (int j = 0; j < art_base; ++j) {
                if (std::abs(at(i, j)) > 1e-9) { pivot_col = j; break; }
            }
            if (pivot_col >= 0) pivot(tab, basis, m, width, i, pivot_col);
            // A fully zero row is a redundant constraint; its artificial stays
            // basic at value zero and is harmless once blocked below.
        }
        for (int ac : art_cols) allowed[static_cast<size_t>(ac)] = 0;

        // Phase 2: the caller's objective.
        for (int j = 0; j < total; ++j)
            cost[static_cast<size_t>(j)] = j < n_ ? objective_[static_cast<size_t>(j)] : 0.0;
        double value = run(tab, basis, cost, allowed, m, total, width);
        if (!std::isfinite(value)) return Result{Status::Unbounded, value, {}};

        Result res;
        res.status = Status::Optimal;
        res.objective = value;
        res.x.assign(static_cast<size_t>(n_), 0.0);
        for (int i = 0; i < m; ++i)
            if (basis[static_cast<size_t>(i)] < n_)
                res.x[static_cast<size_t>(basis[static_cast<size_t>(i)])] = at(i, total);
        return res;
    }

private:
    struct RowSpec {
        std::vector<std::pair<int, double>> coeffs;
        double rhs;
        bool is_eq;
    };

    static void pivot(std::vector<double>& tab, std::vector<int>& basis, int m, int width, int row,
                      int col) {
        auto at = [&](int i, int j) -> double& { return tab[static_cast<size_t>(i) * width + j]; };
        double p = at(row, col);
        for (int j = 0; j < width; ++j) at(row, j) /= p;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            double f = at(i, col);
            if (f == 0.0) continue;
            for (int j = 0; j < width; ++j) at(i, j) -= f * at(row, j);
        }
        basis[static_cast<size_t>(row)] = col;
    }

    // Maximizes cost.x from the current basic feasible tableau. Returns +inf
    // when unbounded.
    double run(std::vector<double>& tab, std::vector<int>& basis, const std::vector<double>& cost,
               const std::vector<char>& allowed, int m, int total, int width) const {
        auto at = [&](int i, int j) -> double& { return tab[static_cast<size_t>(i) * width + j]; };
        std::vector<double> reduced(static_cast<size_t>(total));
        const int bland_after = 20000;
        for (int iter = 0;; ++iter) {
            // Reduced costs from scratch: z_j - c_j for the current basis.
            for (int j = 0; j < total; ++j) {
                double zj = 0.0;
                for (int i = 0; i < m; ++i) {
                    double cb = cost[static_cast<size_t>(basis[static_cast<size_t>(i)])];
                    if (cb != 0.0) zj += cb * at(i, j);
                }
                reduced[static_cast<size_t>(j)] = zj - cost[static_cast<size_t>(j)];
            }
            int enter = -1;
            double best = -1e-9;
            for (int j = 0; j < total; ++j) {
                if (!allowed[static_cast<size_t>(j)]) continue;
                if (reduced[static_cast<size_t>(j)] < best) {
                    best = reduced[static_cast<size_t>(j)];
                    enter = j;
                    if (iter > bland_after) break; // Bland: first improving column
                }
            }
            if (enter < 0) {
                double value = 0.0;
                for (int i = 0; i < m; ++i)
                    value += cost[static_cast<size_t>(basis[static_cast<size_t>(i)])] * at(i, total);
                return value;
            }
            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                double a = at(i, enter);
                if (a > 1e-9) {
                    double ratio = at(i, total) / a;
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && leave >= 0 &&
                         basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(leave)])) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return std::numeric_limits<double>::infinity();
            pivot(tab, basis, m, width, leave, enter);
        }
    }

    int n_;
    std::vector<double> objective_;
    std::vector<RowSpec> rows_;
};

} // namespace tdnet

#endif
