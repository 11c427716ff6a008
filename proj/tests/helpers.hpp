#ifndef TDNET_TEST_HELPERS_HPP
#define TDNET_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "tdnet/expr.hpp"
#include "tdnet/flow.hpp"
#include "tdnet/network.hpp"
#include "tdnet/rng.hpp"

namespace tdnet::testing {

// Random spanning tree plus extra edges; always connected.
inline Network random_connected_network(Rng& rng, int n, double extra_edge_prob = 0.2) {
    Network net(n);
    for (NodeId u = 1; u < n; ++u)
        net.add_link(u, static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(u))));
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (!net.has_link(u, v) && rng.next_double() < extra_edge_prob) net.add_link(u, v);
    return net;
}

// Non-negative on t >= 0: a + b(1+sin wt)/2, a + b(1+cos wt)/2, or b t^2/e^t.
inline Expr random_nonneg_expr(Rng& rng) {
    double a = rng.uniform(0.0, 2.0);
    double b = rng.uniform(0.0, 3.0);
    double w = rng.uniform(0.3, 2.0);
    switch (rng.next_below(4)) {
        case 0: return Expr::constant(a);
        case 1:
            return Expr::constant(a) +
                   Expr::constant(b * 0.5) * (Expr::constant(1.0) + Expr::sin(Expr::constant(w) * Expr::t()));
        case 2:
            return Expr::constant(a) +
                   Expr::constant(b * 0.5) * (Expr::constant(1.0) + Expr::cos(Expr::constant(w) * Expr::t()));
        default:
            return Expr::constant(a) +
                   Expr::constant(b) * Expr::pow(Expr::t(), 2) / Expr::exp(Expr::t());
    }
}

inline FlowField random_flow_field(Rng& rng, const Network& net, double pair_prob = 0.7) {
    FlowField field(net);
    for (auto [u, v] : net.links()) {
        if (rng.next_double() < pair_prob) field.set(u, v, random_nonneg_expr(rng));
        if (rng.next_double() < pair_prob) field.set(v, u, random_nonneg_expr(rng));
    }
    return field;
}

} // namespace tdnet::testing

#endif
