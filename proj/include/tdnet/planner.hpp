#ifndef TDNET_PLANNER_HPP
#define TDNET_PLANNER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tdnet/network.hpp"
#include "tdnet/routing.hpp"
#include "tdnet/throughput.hpp"
#include "tdnet/topology.hpp"

namespace tdnet {

// Power-optimized communication planning: minimize the product of node
// divergences subject to the throughput/capacity cap and a per-node rate
// trust region around the observed baseline.
struct PlanProblem {
    Network net;
    TrafficMatrix tm;
    CapacityMatrix cm;
    double rate_limit = 1.0;                 // dynamics threshold m
    std::map<NodeId, double> baseline_div;   // observed divergences
    double dt = 1.0;                         // planning step
    double div_min = 1e-3;
    double div_max = 1e6;
    RouteSetMap routes;                      // frozen at baseline
    double eps_div = 1e-6;
    int max_iterations = 5000;
};

struct PlanResult {
    std::map<NodeId, double> divergences;
    double objective = 0.0; // product of planned divergences
    bool feasible = false;
    double kkt_residual = 0.0;
    int iterations = 0;
    std::string violated_constraint; // set when infeasible
};

namespace detail {

// Throughput as a function of the divergence vector, with route coefficients
// frozen at the baseline divergences.
struct FrozenThroughput {
    double two_e_over_h = 0.0;
    double eps_div = 1e-6;
    // Per demand pair: per-route (frozen alpha * |rho|, node list).
    struct RouteTerm {
        double alpha_len = 0.0;
        std::vector<NodeId> nodes;
    };
    std::vector<std::pair<std::vector<RouteTerm>, int>> pairs; // (routes, |psi|)
    std::vector<double> pair_weight; // 1 per demanded pair

    double bracket(const std::vector<double>& z) const {
        double b = 1.0;
        for (const auto& [terms, psi] : pairs) {
            double acc = 0.0;
            for (const auto& rt : terms) {
                double d = 0.0;
                for (NodeId w : rt.nodes) d += std::abs(z[static_cast<size_t>(w)]);
                acc += rt.alpha_len / std::max(d, eps_div);
            }
            b += acc - psi;
        }
        return b;
    }
    double theta(const std::vector<double>& z) const {
        double b = bracket(z);
        if (b <= 0.0) return std::numeric_limits<double>::infinity();
        return two_e_over_h / b;
    }
};

inline FrozenThroughput freeze_throughput(const PlanProblem& p) {
    FrozenThroughput ft;
    ft.eps_div = p.eps_div;
    ft.two_e_over_h = 2.0 * p.net.switch_link_count() / p.tm.marginal;
    for (const auto& [pair, rs] : p.routes) {
        if (p.tm.at(pair.first, pair.second) <= 0.0) continue;
        std::vector<FrozenThroughput::RouteTerm> terms;
        double inv_sum = 0.0;
        std::vector<double> base_div;
        for (const auto& route : rs.routes) {
            double d = 0.0;
            for (NodeId w : route.nodes) {
                auto it = p.baseline_div.find(w);
                d += std::abs(it == p.baseline_div.end() ? 0.0 : it->second);
            }
            d = std::max(d, p.eps_div);
            base_div.push_back(d);
            inv_sum += route.length() / d;
        }
        double c = 1.0 / inv_sum;
        for (const auto& route : rs.routes)
            terms.push_back({route.length() * c * route.length(), route.nodes});
        ft.pairs.emplace_back(std::move(terms), static_cast<int>(rs.routes.size()));
    }
    return ft;
}

} // namespace detail

// The throughput cap implied by the elementwise capacity constraint, taken
// over linked pairs with positive demand.
inline double plan_theta_cap(const PlanProblem& p) {
    double cap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p.tm.size(); ++i)
        for (int j = 0; j < p.tm.size(); ++j)
            if (i != j && p.tm.at(i, j) > 0.0 && p.cm.at(i, j) > 0.0)
                cap = std::min(cap, p.cm.at(i, j) / p.tm.at(i, j));
    return cap;
}

inline PlanResult solve_plan(const PlanProblem& p) {
    const int n = p.net.node_count();
    std::vector<double> lo(static_cast<size_t>(n)), hi(static_cast<size_t>(n)),
        z(static_cast<size_t>(n));
    for (NodeId u = 0; u < n; ++u) {
        auto it = p.baseline_div.find(u);
        double base = it == p.baseline_div.end() ? p.div_min : it->second;
        lo[static_cast<size_t>(u)] = std::max(p.div_min, base - p.rate_limit * p.dt);
        hi[static_cast<size_t>(u)] = std::min(p.div_max, base + p.rate_limit * p.dt);
        z[static_cast<size_t>(u)] = std::clamp(base, lo[static_cast<size_t>(u)], hi[static_cast<size_t>(u)]);
        if (lo[static_cast<size_t>(u)] > hi[static_cast<size_t>(u)]) {
            PlanResult r;
            r.feasible = false;
            r.violated_constraint = "rate trust region of node " + std::to_string(u) +
                                    " excludes the divergence bounds";
            return r;
        }
    }

    detail::FrozenThroughput ft = detail::freeze_throughput(p);
    const double cap = plan_theta_cap(p);

    auto violation = [&](const std::vector<double>& v) {
        double th = ft.theta(v);
        return std::max(0.0, th - cap);
    };
    auto penalized = [&](const std::vector<double>& v, double mu) {
        double f = 0.0;
        for (double x : v) f += std::log(x);
        double viol = violation(v);
        return f + mu * viol * viol;
    };

    double mu = 10.0;
    int iterations = 0;
    double pg_norm = std::numeric_limits<double>::infinity();
    const double fd_step = 1e-7;

    while (iterations < p.max_iterations) {
        // Projected gradient with backtracking on the penalized objective.
        std::vector<double> grad(static_cast<size_t>(n));
        double viol = violation(z);
        double th = ft.theta(z);
        for (int u = 0; u < n; ++u) {
            grad[static_cast<size_t>(u)] = 1.0 / z[static_cast<size_t>(u)];
            if (viol > 0.0) {
                // d theta / d z_u by central difference (theta is cheap).
                std::vector<double> zp = z, zm = z;
                zp[static_cast<size_t>(u)] += fd_step;
                zm[static_cast<size_t>(u)] -= fd_step;
                double dth = (ft.theta(zp) - ft.theta(zm)) / (2.0 * fd_step);
                grad[static_cast<size_t>(u)] += mu * 2.0 * viol * dth;
            }
        }
        double step = 0.5;
        double f0 = penalized(z, mu);
        std::vector<double> trial(static_cast<size_t>(n));
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            for (int u = 0; u < n; ++u)
                trial[static_cast<size_t>(u)] =
                    std::clamp(z[static_cast<size_t>(u)] - step * grad[static_cast<size_t>(u)],
                               lo[static_cast<size_t>(u)], hi[static_cast<size_t>(u)]);
            if (penalized(trial, mu) < f0 - 1e-15) {
                moved = true;
                break;
            }
            step *= 0.5;
        }
        ++iterations;
        // Projected gradient norm at the current iterate.
        pg_norm = 0.0;
        for (int u = 0; u < n; ++u) {
            double moved_to = std::clamp(z[static_cast<size_t>(u)] - grad[static_cast<size_t>(u)],
                                         lo[static_cast<size_t>(u)], hi[static_cast<size_t>(u)]);
            pg_norm += (z[static_cast<size_t>(u)] - moved_to) * (z[static_cast<size_t>(u)] - moved_to);
        }
        pg_norm = std::sqrt(pg_norm);
        if (moved) {
            z = trial;
        } else if (viol > 1e-6) {
            if (mu < 1e10) {
                mu *= 10.0; // escalate the penalty before giving up
                continue;
            }
            PlanResult r;
            r.feasible = false;
            r.kkt_residual = viol;
            r.iterations = iterations;
            int wi = -1, wj = -1;
            double worst = 0.0;
            for (int i = 0; i < p.tm.size(); ++i)
                for (int j = 0; j < p.tm.size(); ++j)
                    if (i != j && p.tm.at(i, j) > 0.0 && p.cm.at(i, j) > 0.0) {
                        double v = p.tm.at(i, j) * th - p.cm.at(i, j);
                        if (v > worst) { worst = v; wi = i; wj = j; }
                    }
            r.violated_constraint = "capacity constraint on pair (" + std::to_string(wi) + "," +
                                    std::to_string(wj) + ") violated by " + std::to_string(worst);
            for (int u = 0; u < n; ++u) r.divergences[u] = z[static_cast<size_t>(u)];
            return r;
        } else if (pg_norm < 1e-8) {
            break;
        } else {
            break; // stationary within line-search resolution
        }
        if (pg_norm < 1e-8 && violation(z) <= 1e-6) break;
    }

    PlanResult r;
    double viol = violation(z);
    r.feasible = viol <= 1e-6;
    if (!r.feasible && iterations >= p.max_iterations)
        throw NonConvergence("iteration budget exhausted with penalty residual " +
                             std::to_string(viol));
    r.kkt_residual = pg_norm;
    r.iterations = iterations;
    double obj = 1.0;
    for (int u = 0; u < n; ++u) {
        r.divergences[u] = z[static_cast<size_t>(u)];
        obj *= z[static_cast<size_t>(u)];
    }
    r.objective = obj;
    if (!r.feasible) {
        double th = ft.theta(z);
        int wi = -1, wj = -1;
        double worst = 0.0;
        for (int i = 0; i < p.tm.size(); ++i)
            for (int j = 0; j < p.tm.size(); ++j)
                if (i != j && p.tm.at(i, j) > 0.0 && p.cm.at(i, j) > 0.0) {
                    double v = p.tm.at(i, j) * th - p.cm.at(i, j);
                    if (v > worst) { worst = v; wi = i; wj = j; }
                }
        r.violated_constraint = "capacity constraint on pair (" + std::to_string(wi) + "," +
                                std::to_string(wj) + ") violated by " + std::to_string(worst);
    }
    return r;
}

struct PlanSlacks {
    std::map<NodeId, double> rate_slack;     // m*dt - |z - baseline|
    std::map<NodeId, double> lower_slack;    // z - div_min
    std::map<NodeId, double> upper_slack;    // div_max - z
    std::map<std::pair<NodeId, NodeId>, double> capacity_slack; // c - T*theta
    double min_slack = 0.0;
};

// Re-evaluates every constraint of the plan from scratch.
inline PlanSlacks verify_plan(const PlanProblem& p, const PlanResult& r) {
    PlanSlacks s;
    std::vector<double> z(static_cast<size_t>(p.net.node_count()), p.div_min);
    for (const auto& [u, v] : r.divergences) z[static_cast<size_t>(u)] = v;
    double min_slack = std::numeric_limits<double>::infinity();
    for (NodeId u = 0; u < p.net.node_count(); ++u) {
        auto it = p.baseline_div.find(u);
        double base = it == p.baseline_div.end() ? p.div_min : it->second;
        double zu = z[static_cast<size_t>(u)];
        s.rate_slack[u] = p.rate_limit * p.dt - std::abs(zu - base);
        s.lower_slack[u] = zu - p.div_min;
        s.upper_slack[u] = p.div_max - zu;
        min_slack = std::min({min_slack, s.rate_slack[u], s.lower_slack[u], s.upper_slack[u]});
    }
    double th = detail::freeze_throughput(p).theta(z);
    for (int i = 0; i < p.tm.size(); ++i)
        for (int j = 0; j < p.tm.size(); ++j)
            if (i != j && p.tm.at(i, j) > 0.0 && p.cm.at(i, j) > 0.0) {
                double slack = p.cm.at(i, j) - p.tm.at(i, j) * th;
                s.capacity_slack[{i, j}] = slack;
                min_slack = std::min(min_slack, slack);
            }
    s.min_slack = min_slack;
    return s;
}

} // namespace tdnet

#endif
