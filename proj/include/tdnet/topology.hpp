#ifndef TDNET_TOPOLOGY_HPP
#define TDNET_TOPOLOGY_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "tdnet/errors.hpp"
#include "tdnet/network.hpp"
#include "tdnet/rng.hpp"

namespace tdnet {

// Doubly-stochastic demand matrix over switches: zero diagonal, every row and
// column summing to the common marginal.
struct TrafficMatrix {
    std::vector<std::vector<double>> entries;
    double marginal = 0.0;

    int size() const { return static_cast<int>(entries.size()); }
    double at(int u, int v) const { return entries[static_cast<size_t>(u)][static_cast<size_t>(v)]; }
};

struct CapacityMatrix {
    std::vector<std::vector<double>> entries;

    int size() const { return static_cast<int>(entries.size()); }
    double at(int u, int v) const { return entries[static_cast<size_t>(u)][static_cast<size_t>(v)]; }
};

// Random degree-regular switch graph (pairing model with retries), each switch
// with `servers_per_switch` attached server nodes. Switches take ids
// 0..switches-1; servers follow.
inline Network gen_jellyfish(int switches, int degree, int servers_per_switch,
                             std::uint64_t seed) {
    if (degree >= switches)
        throw InfeasibleDegreeSequence("degree must be < switch count");
    if (degree < 0 || (static_cast<long long>(degree) * switches) % 2 != 0)
        throw InfeasibleDegreeSequence("degree * switches must be even and non-negative");

    Rng rng(seed);
    std::vector<std::pair<NodeId, NodeId>> switch_links;
    bool ok = degree == 0;
    for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
        switch_links.clear();
        std::vector<NodeId> stubs;
        for (NodeId u = 0; u < switches; ++u)
            for (int d = 0; d < degree; ++d) stubs.push_back(u);
        // Fisher-Yates with the deterministic stream.
        for (size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng.next_below(i)]);
        std::vector<std::vector<bool>> used(static_cast<size_t>(switches),
                                            std::vector<bool>(static_cast<size_t>(switches), false));
        ok = true;
        for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
            NodeId a = stubs[i], b = stubs[i + 1];
            if (a == b || used[static_cast<size_t>(a)][static_cast<size_t>(b)]) {
                ok = false;
                break;
            }
            used[static_cast<size_t>(a)][static_cast<size_t>(b)] = true;
            used[static_cast<size_t>(b)][static_cast<size_t>(a)] = true;
            switch_links.emplace_back(a, b);
        }
    }
    if (!ok) throw InfeasibleDegreeSequence("pairing model failed to produce a simple regular graph");

    Network net(switches + switches * servers_per_switch);
    for (auto [a, b] : switch_links) net.add_link(a, b);
    NodeId next = switches;
    for (NodeId sw = 0; sw < switches; ++sw) {
        for (int s = 0; s < servers_per_switch; ++s) {
            net.set_role(next, NodeRole::Server);
            net.add_link(sw, next);
            ++next;
        }
    }
    for (NodeId sw = 0; sw < switches; ++sw)
        net.set_switch_spec(sw, SwitchSpec{net.degree(sw), 0, servers_per_switch});
    return net;
}

// Standard 3-layer k-ary fat-tree; servers only on edge switches. Switch ids:
// core, then aggregation, then edge; server nodes follow all switches.
inline Network gen_fattree(int k, int servers_per_edge_switch) {
    if (k < 2 || k % 2 != 0) throw OddK("fat-tree parameter k must be even and >= 2");
    const int half = k / 2;
    const int n_core = half * half;
    const int n_agg = k * half;
    const int n_edge = k * half;
    const int n_switch = n_core + n_agg + n_edge;
    Network net(n_switch + n_edge * servers_per_edge_switch);

    auto agg_id = [&](int pod, int j) { return n_core + pod * half + j; };
    auto edge_id = [&](int pod, int j) { return n_core + n_agg + pod * half + j; };

    for (int pod = 0; pod < k; ++pod) {
        for (int j = 0; j < half; ++j) {
            for (int e = 0; e < half; ++e) net.add_link(agg_id(pod, j), edge_id(pod, e));
            for (int c = 0; c < half; ++c) net.add_link(agg_id(pod, j), j * half + c);
        }
    }
    NodeId next = n_switch;
    for (int pod = 0; pod < k; ++pod) {
        for (int j = 0; j < half; ++j) {
            for (int s = 0; s < servers_per_edge_switch; ++s) {
                net.set_role(next, NodeRole::Server);
                net.add_link(edge_id(pod, j), next);
                ++next;
            }
        }
    }
    for (NodeId sw = 0; sw < n_switch; ++sw) {
        int servers = sw >= n_core + n_agg ? servers_per_edge_switch : 0;
        net.set_switch_spec(sw, SwitchSpec{net.degree(sw), 0, servers});
    }
    return net;
}

// Backbone cycle 0..backbone-1 with branch paths attached round-robin.
inline Network gen_ring(int backbone, const std::vector<int>& branch_sizes) {
    if (backbone < 3) throw BackboneTooSmall("backbone ring needs at least 3 nodes");
    int total = backbone;
    for (int s : branch_sizes) total += s;
    Network net(total);
    for (int i = 0; i < backbone; ++i) net.add_link(i, (i + 1) % backbone);
    NodeId next = backbone;
    for (size_t b = 0; b < branch_sizes.size(); ++b) {
        NodeId anchor = static_cast<NodeId>(b % static_cast<size_t>(backbone));
        for (int s = 0; s < branch_sizes[b]; ++s) {
            net.add_link(anchor, next);
            anchor = next;
            ++next;
        }
    }
    for (NodeId u = 0; u < total; ++u) net.set_switch_spec(u, SwitchSpec{net.degree(u), 0, 0});
    return net;
}

// Uniform off-diagonal draws balanced by Sinkhorn iteration, then scaled so
// every row and column sums to `marginal`.
inline TrafficMatrix gen_traffic(int switches, double marginal, std::uint64_t seed,
                                 int max_sweeps = 10000) {
    if (switches < 2) throw Error("traffic matrix needs at least 2 switches");
    Rng rng(seed);
    std::vector<std::vector<double>> m(static_cast<size_t>(switches),
                                       std::vector<double>(static_cast<size_t>(switches), 0.0));
    for (int i = 0; i < switches; ++i)
        for (int j = 0; j < switches; ++j)
            if (i != j) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = rng.next_double();

    double residual = 0.0;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (int i = 0; i < switches; ++i) {
            double s = std::accumulate(m[static_cast<size_t>(i)].begin(), m[static_cast<size_t>(i)].end(), 0.0);
            for (double& x : m[static_cast<size_t>(i)]) x /= s;
        }
        for (int j = 0; j < switches; ++j) {
            double s = 0.0;
            for (int i = 0; i < switches; ++i) s += m[static_cast<size_t>(i)][static_cast<size_t>(j)];
            for (int i = 0; i < switches; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(j)] /= s;
        }
        residual = 0.0;
        for (int i = 0; i < switches; ++i) {
            double rs = std::accumulate(m[static_cast<size_t>(i)].begin(), m[static_cast<size_t>(i)].end(), 0.0);
            double cs = 0.0;
            for (int r = 0; r < switches; ++r) cs += m[static_cast<size_t>(r)][static_cast<size_t>(i)];
            residual = std::max({residual, std::abs(rs - 1.0), std::abs(cs - 1.0)});
        }
        converged = residual < 1e-13;
    }
    if (!converged)
        throw SinkhornNonConvergence("sinkhorn residual " + std::to_string(residual) +
                                     " after " + std::to_string(max_sweeps) + " sweeps");
    for (auto& row : m)
        for (double& x : row) x *= marginal;
    return TrafficMatrix{std::move(m), marginal};
}

// Capacity c on every switch-to-switch link, zero elsewhere.
inline CapacityMatrix capacity_from_topology(const Network& net, double c) {
    auto switches = net.switches();
    int n = static_cast<int>(switches.size());
    CapacityMatrix cm;
    cm.entries.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (net.has_link(switches[static_cast<size_t>(i)], switches[static_cast<size_t>(j)]))
                cm.entries[static_cast<size_t>(i)][static_cast<size_t>(j)] = c;
    return cm;
}

} // namespace tdnet

#endif
