#ifndef TDNET_THROUGHPUT_HPP
#define TDNET_THROUGHPUT_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tdnet/divergence.hpp"
#include "tdnet/flow.hpp"
#include "tdnet/network.hpp"
#include "tdnet/routing.hpp"
#include "tdnet/simplex.hpp"
#include "tdnet/topology.hpp"

namespace tdnet {

using RouteSetMap = std::map<std::pair<NodeId, NodeId>, RouteSet>;

// Per-pair route coefficients and split ratios. Divergence sums are
// magnitude-regularized with the floor eps_div; split ratios of a pair sum
// to 1.
struct SplitScheme {
    double eps_div = 1e-6;
    std::map<std::pair<NodeId, NodeId>, std::vector<double>> alpha;
    std::map<std::pair<NodeId, NodeId>, std::vector<double>> beta;
    std::map<std::pair<NodeId, NodeId>, std::vector<double>> div_sum;
    bool alpha_below_one = true; // the coefficient-set constraint, reported only
};

// Length-proportional coefficients: alpha_rho = |rho| * c with c fixed so the
// split ratios alpha_rho / div_sum_rho sum to one.
inline SplitScheme make_split_scheme(const Network& net, const FlowField& field,
                                     const RouteSetMap& routesets, double t,
                                     double eps_div = 1e-6) {
    SplitScheme scheme;
    scheme.eps_div = eps_div;
    for (const auto& [pair, rs] : routesets) {
        std::vector<double> d, a, b;
        double inv_sum = 0.0;
        for (const auto& route : rs.routes) {
            double s = std::max(route_score(net, field, route, t), eps_div);
            d.push_back(s);
            inv_sum += route.length() / s;
        }
        double c = 1.0 / inv_sum;
        for (size_t i = 0; i < rs.routes.size(); ++i) {
            a.push_back(rs.routes[i].length() * c);
            b.push_back(a.back() / d[i]);
            if (a.back() >= 1.0) scheme.alpha_below_one = false;
        }
        scheme.div_sum[pair] = std::move(d);
        scheme.alpha[pair] = std::move(a);
        scheme.beta[pair] = std::move(b);
    }
    return scheme;
}

// Materialize per-link directed flows by splitting each demand across its
// route set; constant-in-time field.
inline FlowField flows_from_traffic(const Network& net, const TrafficMatrix& tm,
                                    const RouteSetMap& routesets, const SplitScheme& scheme) {
    std::map<std::pair<NodeId, NodeId>, double> accum;
    for (int u = 0; u < tm.size(); ++u) {
        for (int v = 0; v < tm.size(); ++v) {
            double demand = tm.at(u, v);
            if (u == v || demand <= 0.0) continue;
            auto it = routesets.find({u, v});
            if (it == routesets.end())
                throw MissingRouteSet("no route set for demand pair (" + std::to_string(u) + "," +
                                      std::to_string(v) + ")");
            auto bit = scheme.beta.find({u, v});
            if (bit == scheme.beta.end())
                throw MissingRouteSet("split scheme missing pair (" + std::to_string(u) + "," +
                                      std::to_string(v) + ")");
            const auto& routes = it->second.routes;
            const auto& betas = bit->second;
            for (size_t r = 0; r < routes.size(); ++r) {
                double share = demand * betas[r];
                const auto& nodes = routes[r].nodes;
                for (size_t i = 0; i + 1 < nodes.size(); ++i)
                    accum[{nodes[i], nodes[i + 1]}] += share;
            }
        }
    }
    FlowField field(net);
    for (const auto& [link, rate] : accum) field.set(link.first, link.second, rate);
    return field;
}

enum class TopoClass { AutoDetect, UniRegular, BiRegular };

struct ThroughputEstimate {
    double theta = 0.0;
    int e_count = 0;      // switch-to-switch link count
    double two_e = 0.0;   // port-count total used in the numerator
    double marginal = 0.0;
    double bracket = 0.0;
    std::map<std::pair<NodeId, NodeId>, double> per_pair_terms;
    bool alpha_below_one = true;
};

// The two sides of the total-transient-traffic accounting: the capacity-side
// residual and the route-wise sum, both under the common marginal weight. The
// closed-form theta is exactly the value equating them.
struct TransientAccounting {
    double capacity_side = 0.0; // 2E - theta * H
    double route_side = 0.0;    // theta * H * (bracket - 1)
};

inline TransientAccounting transient_accounting(const ThroughputEstimate& est) {
    TransientAccounting acc;
    acc.capacity_side = est.two_e - est.theta * est.marginal;
    acc.route_side = est.theta * est.marginal * (est.bracket - 1.0);
    return acc;
}

namespace detail {

inline TopoClass detect_topo_class(const Network& net) {
    bool saw_zero = false, saw_positive = false;
    for (NodeId sw : net.switches()) {
        const SwitchSpec* spec = net.switch_spec(sw);
        int servers = spec ? spec->servers : 0;
        (servers > 0 ? saw_positive : saw_zero) = true;
    }
    return (saw_zero && saw_positive) ? TopoClass::BiRegular : TopoClass::UniRegular;
}

} // namespace detail

// Closed-form throughput scale factor. The bi-regular branch accounts the
// switch-to-switch port total through per-switch radix/outage/server specs
// with the server selector; the uni-regular branch counts links directly.
inline ThroughputEstimate estimate_throughput(const Network& net, const TrafficMatrix& tm,
                                              const RouteSetMap& routesets, const FlowField& field,
                                              double t = 0.0,
                                              TopoClass topo_class = TopoClass::AutoDetect,
                                              double eps_div = 1e-6) {
    auto switches = net.switches();
    if (static_cast<int>(switches.size()) != tm.size())
        throw Error("traffic matrix dimension does not match switch count");

    if (topo_class == TopoClass::AutoDetect) topo_class = detail::detect_topo_class(net);

    double two_e;
    if (topo_class == TopoClass::UniRegular) {
        two_e = 2.0 * net.switch_link_count();
    } else {
        two_e = 0.0;
        for (NodeId sw : switches) {
            const SwitchSpec* spec = net.switch_spec(sw);
            if (!spec) throw Error("bi-regular accounting needs switch specs");
            int selector = spec->servers > 0 ? 1 : 0;
            two_e += spec->radix - spec->outage_ports - spec->servers * selector;
        }
    }

    SplitScheme scheme = make_split_scheme(net, field, routesets, t, eps_div);

    ThroughputEstimate est;
    est.e_count = net.switch_link_count();
    est.two_e = two_e;
    est.marginal = tm.marginal;
    est.alpha_below_one = scheme.alpha_below_one;

    double bracket = 1.0;
    for (int u = 0; u < tm.size(); ++u) {
        for (int v = 0; v < tm.size(); ++v) {
            if (u == v || tm.at(u, v) <= 0.0) continue;
            auto it = routesets.find({u, v});
            if (it == routesets.end())
                throw MissingRouteSet("no route set for demand pair (" + std::to_string(u) + "," +
                                      std::to_string(v) + ")");
            const auto& alphas = scheme.alpha.at({u, v});
            const auto& divs = scheme.div_sum.at({u, v});
            double term = 0.0;
            for (size_t r = 0; r < it->second.routes.size(); ++r)
                term += alphas[r] * it->second.routes[r].length() / divs[r];
            term -= static_cast<double>(it->second.routes.size());
            est.per_pair_terms[{u, v}] = term;
            bracket += term;
        }
    }
    est.bracket = bracket;
    if (bracket <= 0.0)
        throw NonPositiveBracket("throughput bracket " + std::to_string(bracket) +
                                 " is not positive");
    est.theta = two_e / tm.marginal / bracket;
    return est;
}

// Exact maximum concurrent multi-commodity flow on the switch subgraph
// (edge-flow formulation aggregated by source; every link has the given
// capacity shared by both directions). Returns the common demand scale.
inline double lp_oracle_throughput(const Network& net, const TrafficMatrix& tm,
                                   double link_capacity) {
    auto switches = net.switches();
    const int n = static_cast<int>(switches.size());
    if (n != tm.size()) throw Error("traffic matrix dimension does not match switch count");

    std::vector<std::pair<int, int>> edges; // undirected, by switch index
    for (auto [a, b] : net.links())
        if (net.is_switch(a) && net.is_switch(b)) edges.emplace_back(a, b);
    const int ne = static_cast<int>(edges.size());

    std::vector<int> sources;
    for (int s = 0; s < n; ++s) {
        double total = 0.0;
        for (int v = 0; v < n; ++v) total += tm.at(s, v);
        if (total > 0.0) sources.push_back(s);
    }
    if (sources.empty()) return std::numeric_limits<double>::infinity();

    // Variable layout: x[s][e][dir] then lambda.
    auto var = [&](int si, int e, int dir) { return (si * ne + e) * 2 + dir; };
    const int lambda = static_cast<int>(sources.size()) * ne * 2;
    SimplexSolver lp(lambda + 1);
    lp.set_objective(lambda, 1.0);

    for (size_t si = 0; si < sources.size(); ++si) {
        int s = sources[si];
        for (int v = 0; v < n; ++v) {
            if (v == s) continue; // implied by the sink rows
            std::vector<std::pair<int, double>> row;
            for (int e = 0; e < ne; ++e) {
                auto [a, b] = edges[static_cast<size_t>(e)];
                if (a == v) {
                    row.emplace_back(var(static_cast<int>(si), e, 1), 1.0);  // b -> a in
                    row.emplace_back(var(static_cast<int>(si), e, 0), -1.0); // a -> b out
                } else if (b == v) {
                    row.emplace_back(var(static_cast<int>(si), e, 0), 1.0);
                    row.emplace_back(var(static_cast<int>(si), e, 1), -1.0);
                }
            }
            row.emplace_back(lambda, -tm.at(s, v));
            lp.add_eq(std::move(row), 0.0);
        }
    }
    for (int e = 0; e < ne; ++e) {
        std::vector<std::pair<int, double>> row;
        for (size_t si = 0; si < sources.size(); ++si) {
            row.emplace_back(var(static_cast<int>(si), e, 0), 1.0);
            row.emplace_back(var(static_cast<int>(si), e, 1), 1.0);
        }
        lp.add_ub(std::move(row), link_capacity);
    }

    auto result = lp.solve();
    if (result.status == SimplexSolver::Status::Infeasible)
        throw LpInfeasible("no feasible concurrent flow (a demanded cut has zero capacity)");
    if (result.status == SimplexSolver::Status::Unbounded)
        return std::numeric_limits<double>::infinity();
    if (result.objective <= 1e-12)
        throw LpInfeasible("no feasible concurrent flow (a demanded cut has zero capacity)");
    return result.objective;
}

} // namespace tdnet

#endif
