#ifndef TDNET_ROUTING_HPP
#define TDNET_ROUTING_HPP

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "tdnet/divergence.hpp"
#include "tdnet/flow.hpp"
#include "tdnet/network.hpp"

namespace tdnet {

// BFS hop distances from src; unreachable nodes get -1.
inline std::vector<int> hop_distances(const Network& net, NodeId src) {
    net.check_node(src);
    std::vector<int> dist(static_cast<size_t>(net.node_count()), -1);
    std::deque<NodeId> queue{src};
    dist[static_cast<size_t>(src)] = 0;
    while (!queue.empty()) {
        NodeId w = queue.front();
        queue.pop_front();
        for (NodeId z : net.neighbors(w)) {
            if (dist[static_cast<size_t>(z)] < 0) {
                dist[static_cast<size_t>(z)] = dist[static_cast<size_t>(w)] + 1;
                queue.push_back(z);
            }
        }
    }
    return dist;
}

enum class DistanceMethod { Bfs, AdjacencyPower };

// Smallest n with (A^n)_{uv} > 0.
inline int min_hops(const Network& net, NodeId u, NodeId v,
                    DistanceMethod method = DistanceMethod::Bfs) {
    net.check_node(u);
    net.check_node(v);
    if (u == v) throw Error("min_hops requires distinct endpoints");
    if (method == DistanceMethod::Bfs) {
        int d = hop_distances(net, u)[static_cast<size_t>(v)];
        if (d < 0) throw NoRoute("no route between " + std::to_string(u) + " and " + std::to_string(v));
        return d;
    }
    auto a = net.adjacency();
    auto power = a;
    for (int n = 1; n < net.node_count(); ++n) {
        if (n > 1) power = mat_mul(power, a);
        if (power[static_cast<size_t>(u)][static_cast<size_t>(v)] > 0) return n;
    }
    throw NoRoute("no route between " + std::to_string(u) + " and " + std::to_string(v));
}

// Neighborhood traffic load of node x: |TD of x| plus the summed |TD| of its
// neighbors. Magnitudes, so opposite imbalances do not cancel.
inline double neighborhood_load(const Network& net, const FlowField& field, NodeId x, double t) {
    double load = std::abs(node_td(net, field, x, t));
    for (NodeId z : net.neighbors(x)) load += std::abs(node_td(net, field, z, t));
    return load;
}

// Congestion-avoiding minimum-hop route, built hop by hop: among the
// distance-decreasing neighbors, pick the one with the least traffic
// distributed in its neighborhood; ties break to the smallest node id.
inline Route route_greedy(const Network& net, const FlowField& field, NodeId u, NodeId v,
                          double t) {
    net.check_node(u);
    net.check_node(v);
    auto dist_to_v = hop_distances(net, v);
    if (dist_to_v[static_cast<size_t>(u)] < 0)
        throw NoRoute("no route between " + std::to_string(u) + " and " + std::to_string(v));
    Route route;
    route.nodes.push_back(u);
    NodeId w = u;
    while (w != v) {
        NodeId best = -1;
        double best_load = std::numeric_limits<double>::infinity();
        for (NodeId x : net.neighbors(w)) {
            if (dist_to_v[static_cast<size_t>(x)] != dist_to_v[static_cast<size_t>(w)] - 1) continue;
            double load = neighborhood_load(net, field, x, t);
            if (load < best_load) {
                best_load = load;
                best = x;
            }
        }
        route.nodes.push_back(best);
        w = best;
    }
    return route;
}

struct RouteSet {
    NodeId source = -1;
    NodeId target = -1;
    std::vector<Route> routes; // lexicographic by node sequence
    int hop_count = 0;
};

// All minimum-hop routes from u to v, depth-first over distance-decreasing
// neighbors. Count is bounded by `cap` before scoring.
inline std::vector<Route> enumerate_min_hop_routes(const Network& net, NodeId u, NodeId v,
                                                   std::size_t cap = 10000) {
    auto dist_to_v = hop_distances(net, v);
    if (dist_to_v[static_cast<size_t>(u)] < 0)
        throw NoRoute("no route between " + std::to_string(u) + " and " + std::to_string(v));
    std::vector<Route> out;
    std::vector<NodeId> stack{u};
    std::function<void(NodeId)> dfs = [&](NodeId w) {
        if (w == v) {
            if (out.size() >= cap)
                throw EnumerationCapExceeded("more than " + std::to_string(cap) +
                                             " minimum-hop routes");
            out.push_back(Route{stack});
            return;
        }
        for (NodeId x : net.neighbors(w)) {
            if (dist_to_v[static_cast<size_t>(x)] != dist_to_v[static_cast<size_t>(w)] - 1) continue;
            stack.push_back(x);
            dfs(x);
            stack.pop_back();
        }
    };
    dfs(u);
    std::sort(out.begin(), out.end());
    return out;
}

inline double route_score(const Network& net, const FlowField& field, const Route& route,
                          double t) {
    double s = 0.0;
    for (NodeId w : route.nodes) s += std::abs(node_td(net, field, w, t));
    return s;
}

// Minimum-hop routes whose divergence score is within a relative slack of the
// best; delta = 0 keeps exactly the score ties of the best.
inline RouteSet route_set(const Network& net, const FlowField& field, NodeId u, NodeId v, double t,
                          double delta, std::size_t cap = 10000) {
    auto all = enumerate_min_hop_routes(net, u, v, cap);
    std::vector<double> scores;
    scores.reserve(all.size());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : all) {
        scores.push_back(route_score(net, field, r, t));
        best = std::min(best, scores.back());
    }
    RouteSet rs;
    rs.source = u;
    rs.target = v;
    rs.hop_count = all.front().length();
    const double threshold = (1.0 + delta) * best + 1e-12;
    for (size_t i = 0; i < all.size(); ++i)
        if (scores[i] <= threshold) rs.routes.push_back(all[i]);
    return rs;
}

} // namespace tdnet

#endif
