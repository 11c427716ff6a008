#ifndef TDNET_COUPLING_HPP
#define TDNET_COUPLING_HPP

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tdnet/divergence.hpp"
#include "tdnet/expr.hpp"
#include "tdnet/flow.hpp"
#include "tdnet/network.hpp"

namespace tdnet {

// nabla_u = (m * nabla_z + n) * g(t)
struct AffineCoupling {
    double m = 1.0;
    double n = 0.0;
    Expr g = Expr::constant(1.0);
};

// nabla_u = h(x, t) with x = nabla_z
struct ExprCoupling {
    Expr h;
};

using Coupling = std::variant<AffineCoupling, ExprCoupling>;

// Postulated functional relations among node divergences. A relation keyed
// (u, z) declares nabla_u = h(nabla_z); the reverse direction is obtained by
// inverse-function differentiation when not declared explicitly. `state`
// carries the divergence values at which generic expressions are linearized.
class CouplingModel {
public:
    CouplingModel() = default;
    explicit CouplingModel(Network net) : net_(std::move(net)) {}

    const Network& net() const { return net_; }

    void set_affine(NodeId u, NodeId z, double m, double n, Expr g = Expr::constant(1.0)) {
        require_adjacent(u, z);
        relations_[{u, z}] = AffineCoupling{m, n, std::move(g)};
    }
    void set_expr(NodeId u, NodeId z, Expr h) {
        require_adjacent(u, z);
        relations_[{u, z}] = ExprCoupling{std::move(h)};
    }
    void set_state(NodeId u, double divergence) {
        net_.check_node(u);
        state_[u] = divergence;
    }
    double state(NodeId u) const {
        auto it = state_.find(u);
        return it == state_.end() ? 0.0 : it->second;
    }

    bool has_relation(NodeId u, NodeId z) const {
        return relations_.count({u, z}) > 0 || relations_.count({z, u}) > 0;
    }
    const std::map<std::pair<NodeId, NodeId>, Coupling>& relations() const { return relations_; }

    // Forward value h(x, t) of the declared relation (u, z).
    double coupling_value(NodeId u, NodeId z, double x, double t) const {
        auto it = relations_.find({u, z});
        if (it == relations_.end())
            throw NoCoupling("no declared coupling for (" + std::to_string(u) + "," +
                             std::to_string(z) + ")");
        if (auto* a = std::get_if<AffineCoupling>(&it->second))
            return (a->m * x + a->n) * a->g.eval(t);
        return std::get<ExprCoupling>(it->second).h.eval(t, x);
    }

private:
    void require_adjacent(NodeId u, NodeId z) const {
        net_.check_node(u);
        net_.check_node(z);
        if (!net_.has_link(u, z))
            throw NotAdjacent("coupling requires adjacent nodes");
    }

    Network net_;
    std::map<std::pair<NodeId, NodeId>, Coupling> relations_;
    std::map<NodeId, double> state_;

    friend double spatial_derivative(const CouplingModel&, NodeId, NodeId, int, double);
};

namespace detail {

constexpr double kSingularEps = 1e-12;

// Derivatives of the declared mapping h at x, with respect to x.
inline double forward_derivative(const Coupling& c, int order, double t, double x) {
    if (auto* a = std::get_if<AffineCoupling>(&c)) {
        if (order == 1) return a->m * a->g.eval(t);
        return 0.0;
    }
    Expr d = std::get<ExprCoupling>(c).h;
    for (int i = 0; i < order; ++i) d = d.diff_x();
    return d.eval(t, x);
}

// Derivatives of the inverse mapping, expressed through derivatives of h at
// the same base point (standard inverse-function formulas, orders 1..3).
inline double inverse_derivative(const Coupling& c, int order, double t, double x) {
    double h1 = forward_derivative(c, 1, t, x);
    if (std::abs(h1) < kSingularEps)
        throw SingularCoupling("coupling derivative vanishes; inverse direction undefined");
    if (std::holds_alternative<AffineCoupling>(c))
        return order == 1 ? 1.0 / h1 : 0.0;
    double h2 = forward_derivative(c, 2, t, x);
    double h3 = forward_derivative(c, 3, t, x);
    switch (order) {
        case 1: return 1.0 / h1;
        case 2: return -h2 / (h1 * h1 * h1);
        case 3: return (3.0 * h2 * h2 - h1 * h3) / std::pow(h1, 5);
        default:
            throw Error("inverse coupling derivatives supported up to order 3 for generic expressions");
    }
}

} // namespace detail

namespace detail {

// First three derivatives of one mapping direction, as a unit.
struct DerivTriple {
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

// Derivatives of the composition outer(inner(.)) from the factors' triples.
inline DerivTriple compose(const DerivTriple& outer, const DerivTriple& inner) {
    DerivTriple c;
    c.d1 = outer.d1 * inner.d1;
    c.d2 = outer.d2 * inner.d1 * inner.d1 + outer.d1 * inner.d2;
    c.d3 = outer.d3 * inner.d1 * inner.d1 * inner.d1 + 3.0 * outer.d2 * inner.d1 * inner.d2 +
           outer.d1 * inner.d3;
    return c;
}

} // namespace detail

// d^n nabla_u / d nabla_v^n at time t, evaluated at the model state. Adjacent
// pairs use the declared relation (or its inverse); other pairs compose the
// chain rule along a shortest path of declared couplings, orders 1..3.
inline double spatial_derivative(const CouplingModel& model, NodeId u, NodeId v, int order,
                                 double t) {
    if (order < 1) throw Error("derivative order must be >= 1");
    auto fwd = model.relations_.find({u, v});
    if (fwd != model.relations_.end())
        return detail::forward_derivative(fwd->second, order, t, model.state(v));
    auto rev = model.relations_.find({v, u});
    if (rev != model.relations_.end())
        return detail::inverse_derivative(rev->second, order, t, model.state(u));

    // BFS over the declared-coupling graph from v toward u, then compose.
    const int n = model.net().node_count();
    model.net().check_node(u);
    model.net().check_node(v);
    std::vector<NodeId> parent(static_cast<size_t>(n), -1);
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<NodeId> queue{v};
    seen[static_cast<size_t>(v)] = 1;
    for (size_t qi = 0; qi < queue.size() && !seen[static_cast<size_t>(u)]; ++qi) {
        NodeId w = queue[qi];
        for (NodeId x : model.net().neighbors(w)) {
            if (seen[static_cast<size_t>(x)] || !model.has_relation(x, w)) continue;
            seen[static_cast<size_t>(x)] = 1;
            parent[static_cast<size_t>(x)] = w;
            queue.push_back(x);
        }
    }
    if (!seen[static_cast<size_t>(u)])
        throw NoCoupling("no coupling chain between " + std::to_string(u) + " and " +
                         std::to_string(v));
    if (order > 3)
        throw Error("composed coupling derivatives supported up to order 3");
    std::vector<NodeId> path; // u back to v
    for (NodeId w = u; w != -1; w = parent[static_cast<size_t>(w)]) path.push_back(w);
    auto edge_triple = [&](NodeId a, NodeId b) {
        detail::DerivTriple tr;
        tr.d1 = spatial_derivative(model, a, b, 1, t);
        tr.d2 = spatial_derivative(model, a, b, 2, t);
        tr.d3 = spatial_derivative(model, a, b, 3, t);
        return tr;
    };
    detail::DerivTriple acc = edge_triple(path[path.size() - 2], path.back());
    for (size_t i = path.size() - 2; i > 0; --i)
        acc = detail::compose(edge_triple(path[i - 1], path[i]), acc);
    return order == 1 ? acc.d1 : order == 2 ? acc.d2 : acc.d3;
}

inline std::function<double(double)> spatial_derivative_fn(const CouplingModel& model, NodeId u,
                                                           NodeId v, int order) {
    return [&model, u, v, order](double t) { return spatial_derivative(model, u, v, order, t); };
}

// LHS - RHS of the spatial TD dynamics identity, with the link divergence
// expanded through its node factorization.
inline double check_spatial_dynamics(const CouplingModel& model, NodeId u, NodeId v, int order,
                                     double t) {
    double fwd = spatial_derivative(model, u, v, order, t); // d^n nabla_u / d nabla_v^n
    double inv = spatial_derivative(model, v, u, order, t); // d^n nabla_v / d nabla_u^n
    double identity = order == 1 ? 1.0 : 0.0;
    double link_wrt_u = identity + inv;
    double link_wrt_v = identity + fwd;
    return (link_wrt_u - link_wrt_v) - (inv - fwd);
}

// Spatial TD rate: sum of first derivatives of nabla_u with respect to all neighbors.
inline double spatial_td_rate(const CouplingModel& model, NodeId u, double t) {
    model.net().check_node(u);
    double acc = 0.0;
    for (NodeId z : model.net().neighbors(u)) acc += spatial_derivative(model, u, z, 1, t);
    return acc;
}

// Time derivative of a node's TD, analytic from the flow expressions.
inline double node_td_time_derivative(const Network& net, const FlowField& field, NodeId u,
                                      double t) {
    net.check_node(u);
    double acc = 0.0;
    for (NodeId z : net.neighbors(u))
        acc += field.eval_rate_of_change(z, u, t) - field.eval_rate_of_change(u, z, t);
    return acc;
}

// Temporal TD rate: sum of neighbors' TD time derivatives.
inline double temporal_td_rate(const CouplingModel& /*model*/, const Network& net,
                               const FlowField& field, NodeId u, double t) {
    net.check_node(u);
    double acc = 0.0;
    for (NodeId z : net.neighbors(u)) acc += node_td_time_derivative(net, field, z, t);
    return acc;
}

struct RateBound {
    double lhs = 0.0;        // |d nabla_u / dt| via the chain rule
    double homogeneous_bound = 0.0; // n^-1 |spatial rate * temporal rate|
    double cs_bound = 0.0;   // Cauchy-Schwarz bound
};

// Bound report from explicit neighbor derivative vectors a_z = d nabla_u / d nabla_z
// and b_z = d nabla_z / dt.
inline RateBound rate_bound_from_derivatives(const std::vector<double>& a,
                                             const std::vector<double>& b) {
    if (a.empty() || a.size() != b.size())
        throw Error("rate bound needs matching non-empty derivative vectors");
    double dot = 0.0, sum_a = 0.0, sum_b = 0.0, sq_a = 0.0, sq_b = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        sum_a += a[i];
        sum_b += b[i];
        sq_a += a[i] * a[i];
        sq_b += b[i] * b[i];
    }
    RateBound r;
    r.lhs = std::abs(dot);
    r.homogeneous_bound = std::abs(sum_a * sum_b) / static_cast<double>(a.size());
    r.cs_bound = std::sqrt(sq_a) * std::sqrt(sq_b);
    return r;
}

inline RateBound temporal_rate_bound(const CouplingModel& model, const Network& net,
                                     const FlowField& field, NodeId u, double t) {
    net.check_node(u);
    const auto& nbrs = net.neighbors(u);
    if (nbrs.empty()) throw Error("rate bound requires at least one neighbor");
    std::vector<double> a, b;
    a.reserve(nbrs.size());
    b.reserve(nbrs.size());
    for (NodeId z : nbrs) {
        a.push_back(spatial_derivative(model, u, z, 1, t));
        b.push_back(node_td_time_derivative(net, field, z, t));
    }
    return rate_bound_from_derivatives(a, b);
}

struct DistributionRatio {
    double value = 0.0;   // spatial rate ratio of the pair
    double epsilon = 0.0; // |value - 1|
};

inline DistributionRatio distribution_ratio(const CouplingModel& model, NodeId u, NodeId v,
                                            double t) {
    double ru = spatial_td_rate(model, u, t);
    double rv = spatial_td_rate(model, v, t);
    if (std::abs(rv) < detail::kSingularEps)
        throw ZeroDenominatorRate("spatial TD rate of node " + std::to_string(v) + " is zero");
    DistributionRatio d;
    d.value = ru / rv;
    d.epsilon = std::abs(d.value - 1.0);
    return d;
}

enum class DistributionCheckMode { Global, Local };

struct DistributionCheck {
    bool satisfied = true;
    std::pair<NodeId, NodeId> worst_pair{-1, -1};
    double worst_eps = 0.0;
};

// Maximal-traffic-distribution check: every pairwise rate ratio within eps of 1.
// Global mode checks all ordered node pairs, local mode only neighborhoods.
inline DistributionCheck check_max_distribution(const CouplingModel& model, double t, double eps,
                                                DistributionCheckMode mode) {
    const Network& net = model.net();
    std::vector<double> rate(static_cast<size_t>(net.node_count()));
    for (NodeId u = 0; u < net.node_count(); ++u) {
        rate[static_cast<size_t>(u)] = spatial_td_rate(model, u, t);
        if (std::abs(rate[static_cast<size_t>(u)]) < detail::kSingularEps)
            throw ZeroDenominatorRate("spatial TD rate of node " + std::to_string(u) + " is zero");
    }
    DistributionCheck result;
    auto consider = [&](NodeId u, NodeId v) {
        double e = std::abs(rate[static_cast<size_t>(u)] / rate[static_cast<size_t>(v)] - 1.0);
        if (e > result.worst_eps) {
            result.worst_eps = e;
            result.worst_pair = {u, v};
        }
    };
    if (mode == DistributionCheckMode::Global) {
        for (NodeId u = 0; u < net.node_count(); ++u)
            for (NodeId v = 0; v < net.node_count(); ++v)
                if (u != v) consider(u, v);
    } else {
        for (NodeId u = 0; u < net.node_count(); ++u)
            for (NodeId v : net.neighbors(u)) consider(u, v);
    }
    result.satisfied = result.worst_eps <= eps;
    return result;
}

// Prop-4 style ratio minus the direct rate ratio. The bracketed link-derivative
// difference is expanded through the node factorization; the operator order
// follows the rearranged form of the dynamics identity,
// not the proposition's printed sign.
inline double equivalent_condition_residual(const CouplingModel& model, NodeId u, NodeId v,
                                            double t) {
    auto node_sum = [&](NodeId w) {
        double acc = 0.0;
        for (NodeId z : model.net().neighbors(w)) {
            double d_wz = spatial_derivative(model, w, z, 1, t); // d nabla_w / d nabla_z
            double d_zw = spatial_derivative(model, z, w, 1, t); // d nabla_z / d nabla_w
            double link_wrt_w = 1.0 + d_zw;                     // d nabla_{w,z} / d nabla_w
            double link_wrt_z = 1.0 + d_wz;                     // d nabla_{w,z} / d nabla_z
            acc += d_zw + (link_wrt_z - link_wrt_w);
        }
        return acc;
    };
    double denom = node_sum(v);
    if (std::abs(denom) < detail::kSingularEps)
        throw ZeroDenominatorRate("denominator neighbor sum of node " + std::to_string(v) +
                                  " is zero");
    double ratio = node_sum(u) / denom;
    return ratio - distribution_ratio(model, u, v, t).value;
}

} // namespace tdnet

#endif
