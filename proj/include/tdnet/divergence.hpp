#ifndef TDNET_DIVERGENCE_HPP
#define TDNET_DIVERGENCE_HPP

#include <map>
#include <set>
#include <vector>

#include "tdnet/flow.hpp"
#include "tdnet/network.hpp"

namespace tdnet {

// Node TD: sum over neighbors of inflow minus outflow.
inline double node_td(const Network& net, const FlowField& field, NodeId u, double t,
                      EvalMode mode = EvalMode::Instantaneous, double delta = 0.0) {
    net.check_node(u);
    double acc = 0.0;
    for (NodeId z : net.neighbors(u))
        acc += field.eval(z, u, t, mode, delta) - field.eval(u, z, t, mode, delta);
    return acc;
}

// Link TD: net external flow into {u,v}. Flows between u and v themselves are
// internal to the link and excluded. Computed from the definition directly;
// the node factorization is a test oracle, not the implementation.
inline double link_td(const Network& net, const FlowField& field, NodeId u, NodeId v, double t,
                      EvalMode mode = EvalMode::Instantaneous, double delta = 0.0) {
    net.check_node(u);
    net.check_node(v);
    if (!net.has_link(u, v))
        throw NotAdjacent("link TD requires adjacent nodes");
    double acc = 0.0;
    for (NodeId w : {u, v}) {
        for (NodeId z : net.neighbors(w)) {
            if (z == u || z == v) continue;
            acc += field.eval(z, w, t, mode, delta) - field.eval(w, z, t, mode, delta);
        }
    }
    return acc;
}

// Route TD: net external flow into the route's node set.
inline double route_td(const Network& net, const FlowField& field, const Route& route, double t,
                       EvalMode mode = EvalMode::Instantaneous, double delta = 0.0) {
    route.validate(net);
    std::set<NodeId> members(route.nodes.begin(), route.nodes.end());
    double acc = 0.0;
    for (NodeId u : route.nodes) {
        for (NodeId z : net.neighbors(u)) {
            if (members.count(z)) continue;
            acc += field.eval(z, u, t, mode, delta) - field.eval(u, z, t, mode, delta);
        }
    }
    return acc;
}

namespace detail {

inline Expr flow_expr(const FlowField& field, NodeId u, NodeId v) {
    auto it = field.entries().find({u, v});
    if (it == field.entries().end()) return Expr::constant(0.0);
    auto* e = std::get_if<Expr>(&it->second.fn);
    if (!e) throw NonDifferentiableFlow("symbolic divergence needs expression flows");
    return *e;
}

} // namespace detail

// Symbolic node TD as a time expression; bypasses pointwise sign checks, so
// worked examples with momentarily negative flow terms stay evaluable.
inline Expr node_td_expr(const Network& net, const FlowField& field, NodeId u) {
    net.check_node(u);
    Expr acc = Expr::constant(0.0);
    for (NodeId z : net.neighbors(u))
        acc = acc + detail::flow_expr(field, z, u) - detail::flow_expr(field, u, z);
    return acc;
}

inline Expr link_td_expr(const Network& net, const FlowField& field, NodeId u, NodeId v) {
    net.check_node(u);
    net.check_node(v);
    if (!net.has_link(u, v)) throw NotAdjacent("link TD requires adjacent nodes");
    Expr acc = Expr::constant(0.0);
    for (NodeId w : {u, v}) {
        for (NodeId z : net.neighbors(w)) {
            if (z == u || z == v) continue;
            acc = acc + detail::flow_expr(field, z, w) - detail::flow_expr(field, w, z);
        }
    }
    return acc;
}

struct DivergenceReport {
    std::map<NodeId, double> node_td;
    std::map<std::pair<NodeId, NodeId>, double> link_td;
    double evaluated_at = 0.0;
    EvalMode mode = EvalMode::Instantaneous;
    double delta = 0.0;
};

inline DivergenceReport divergence_report(const Network& net, const FlowField& field, double t,
                                          EvalMode mode = EvalMode::Instantaneous,
                                          double delta = 0.0) {
    DivergenceReport r;
    r.evaluated_at = t;
    r.mode = mode;
    r.delta = delta;
    for (NodeId u = 0; u < net.node_count(); ++u)
        r.node_td[u] = node_td(net, field, u, t, mode, delta);
    for (auto [u, v] : net.links())
        r.link_td[{u, v}] = link_td(net, field, u, v, t, mode, delta);
    return r;
}

} // namespace tdnet

#endif
