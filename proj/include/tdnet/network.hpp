#ifndef TDNET_NETWORK_HPP
#define TDNET_NETWORK_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tdnet/errors.hpp"

namespace tdnet {

using NodeId = int;

enum class NodeRole { Switch, Server };

struct SwitchSpec {
    int radix = 0;        // physical port count
    int outage_ports = 0; // disabled ports
    int servers = 0;      // attached servers
};

// Undirected graph with dense integer node ids, optional switch/server roles
// and per-switch port bookkeeping. Immutable once built; no self-loops.
class Network {
public:
    Network() = default;

    explicit Network(int node_count) { set_node_count(node_count); }

    void set_node_count(int n) {
        node_count_ = n;
        roles_.assign(static_cast<size_t>(n), NodeRole::Switch);
        neighbors_.assign(static_cast<size_t>(n), {});
    }

    void add_link(NodeId u, NodeId v) {
        check_node(u);
        check_node(v);
        if (u == v) throw Error("self-loops are excluded");
        if (u > v) std::swap(u, v);
        if (has_link(u, v)) return;
        links_.emplace_back(u, v);
        neighbors_[static_cast<size_t>(u)].push_back(v);
        neighbors_[static_cast<size_t>(v)].push_back(u);
        std::sort(neighbors_[static_cast<size_t>(u)].begin(), neighbors_[static_cast<size_t>(u)].end());
        std::sort(neighbors_[static_cast<size_t>(v)].begin(), neighbors_[static_cast<size_t>(v)].end());
    }

    void set_role(NodeId u, NodeRole r) {
        check_node(u);
        roles_[static_cast<size_t>(u)] = r;
    }
    void set_switch_spec(NodeId u, SwitchSpec s) {
        check_node(u);
        switch_spec_[u] = s;
    }

    int node_count() const { return node_count_; }
    const std::vector<std::pair<NodeId, NodeId>>& links() const { return links_; }

    bool has_node(NodeId u) const { return u >= 0 && u < node_count_; }
    bool has_link(NodeId u, NodeId v) const {
        if (!has_node(u) || !has_node(v) || u == v) return false;
        const auto& nb = neighbors_[static_cast<size_t>(u)];
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    NodeRole role(NodeId u) const {
        check_node(u);
        return roles_[static_cast<size_t>(u)];
    }
    bool is_switch(NodeId u) const { return role(u) == NodeRole::Switch; }

    const SwitchSpec* switch_spec(NodeId u) const {
        auto it = switch_spec_.find(u);
        return it == switch_spec_.end() ? nullptr : &it->second;
    }
    const std::map<NodeId, SwitchSpec>& switch_specs() const { return switch_spec_; }

    // Neighbor set of u, ascending by node id.
    const std::vector<NodeId>& neighbors(NodeId u) const {
        check_node(u);
        return neighbors_[static_cast<size_t>(u)];
    }

    int degree(NodeId u) const { return static_cast<int>(neighbors(u).size()); }

    std::vector<NodeId> switches() const {
        std::vector<NodeId> out;
        for (NodeId u = 0; u < node_count_; ++u)
            if (is_switch(u)) out.push_back(u);
        return out;
    }

    // Number of links whose both endpoints are switches.
    int switch_link_count() const {
        int e = 0;
        for (auto [u, v] : links_)
            if (is_switch(u) && is_switch(v)) ++e;
        return e;
    }

    std::vector<std::vector<std::int64_t>> adjacency() const {
        std::vector<std::vector<std::int64_t>> a(
            static_cast<size_t>(node_count_), std::vector<std::int64_t>(static_cast<size_t>(node_count_), 0));
        for (auto [u, v] : links_) {
            a[static_cast<size_t>(u)][static_cast<size_t>(v)] = 1;
            a[static_cast<size_t>(v)][static_cast<size_t>(u)] = 1;
        }
        return a;
    }

    void check_node(NodeId u) const {
        if (!has_node(u)) throw NodeNotFound("node " + std::to_string(u) + " not in network");
    }

private:
    int node_count_ = 0;
    std::vector<std::pair<NodeId, NodeId>> links_;
    std::vector<std::vector<NodeId>> neighbors_;
    std::vector<NodeRole> roles_;
    std::map<NodeId, SwitchSpec> switch_spec_;
};

// A path with pairwise-distinct nodes; consecutive pairs must be links.
struct Route {
    std::vector<NodeId> nodes;

    int length() const { return static_cast<int>(nodes.size()) - 1; }

    void validate(const Network& net) const {
        if (nodes.size() < 2) throw InvalidRoute("route needs at least one link");
        std::set<NodeId> seen;
        for (NodeId u : nodes) {
            net.check_node(u);
            if (!seen.insert(u).second) throw InvalidRoute("route nodes must be distinct");
        }
        for (size_t i = 0; i + 1 < nodes.size(); ++i)
            if (!net.has_link(nodes[i], nodes[i + 1]))
                throw InvalidRoute("route uses a non-existent link");
    }

    bool operator==(const Route& other) const { return nodes == other.nodes; }
    bool operator<(const Route& other) const { return nodes < other.nodes; }
};

// Integer matrix product with saturation (walk counts can grow fast).
inline std::vector<std::vector<std::int64_t>> mat_mul(
    const std::vector<std::vector<std::int64_t>>& a,
    const std::vector<std::vector<std::int64_t>>& b) {
    const size_t n = a.size();
    constexpr std::int64_t kCap = std::int64_t(1) << 62;
    std::vector<std::vector<std::int64_t>> c(n, std::vector<std::int64_t>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t k = 0; k < n; ++k) {
            std::int64_t aik = a[i][k];
            if (aik == 0) continue;
            const auto& bk = b[k];
            auto& ci = c[i];
            for (size_t j = 0; j < n; ++j) {
                __int128 v = static_cast<__int128>(ci[j]) + static_cast<__int128>(aik) * bk[j];
                ci[j] = v > kCap ? kCap : static_cast<std::int64_t>(v);
            }
        }
    }
    return c;
}

// A^n entry (u,v) counts n-hop walks from u to v.
inline std::vector<std::vector<std::int64_t>> adjacency_power(const Network& net, int n) {
    if (n <= 0 || n >= net.node_count())
        throw InvalidHopCount("hop count must satisfy 1 <= n <= |nodes|-1, got " + std::to_string(n));
    auto a = net.adjacency();
    auto result = a;
    for (int i = 1; i < n; ++i) result = mat_mul(result, a);
    return result;
}

} // namespace tdnet

#endif
