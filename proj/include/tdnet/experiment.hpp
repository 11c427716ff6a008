#ifndef TDNET_EXPERIMENT_HPP
#define TDNET_EXPERIMENT_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tdnet/divergence.hpp"
#include "tdnet/flow.hpp"
#include "tdnet/network.hpp"
#include "tdnet/rng.hpp"
#include "tdnet/routing.hpp"
#include "tdnet/throughput.hpp"
#include "tdnet/topology.hpp"

namespace tdnet {

enum class RouterKind { TdAware, HopOnly };
enum class TopoKind { Jellyfish, FatTree };

// Route every positive demand pair. The divergence-blind baseline takes one
// greedy minimum-hop route per pair with node-id tie-breaking; the TD-aware
// router keeps the whole low-divergence route set within the slack.
inline RouteSetMap route_all_pairs(const Network& net, const TrafficMatrix& tm,
                                   const FlowField& field, double t, RouterKind kind,
                                   double delta = 0.25, std::size_t cap = 10000) {
    FlowField blind(net);
    RouteSetMap out;
    for (int u = 0; u < tm.size(); ++u) {
        for (int v = 0; v < tm.size(); ++v) {
            if (u == v || tm.at(u, v) <= 0.0) continue;
            if (kind == RouterKind::HopOnly) {
                Route r = route_greedy(net, blind, u, v, t);
                RouteSet rs;
                rs.source = u;
                rs.target = v;
                rs.hop_count = r.length();
                rs.routes.push_back(std::move(r));
                out[{u, v}] = std::move(rs);
            } else {
                out[{u, v}] = route_set(net, field, u, v, t, delta, cap);
            }
        }
    }
    return out;
}

struct Pipeline {
    RouteSetMap routes;
    FlowField field;
};

// Bootstrap: blind routes seed a flow field, the TD-aware router then re-routes
// against it and the flows are re-materialized.
inline Pipeline route_and_materialize(const Network& net, const TrafficMatrix& tm, double t,
                                      RouterKind kind, double delta = 0.25,
                                      std::size_t cap = 10000) {
    FlowField empty(net);
    RouteSetMap routes = route_all_pairs(net, tm, empty, t, RouterKind::HopOnly, delta, cap);
    FlowField field = flows_from_traffic(net, tm, routes, make_split_scheme(net, empty, routes, t));
    if (kind == RouterKind::TdAware) {
        routes = route_all_pairs(net, tm, field, t, RouterKind::TdAware, delta, cap);
        field = flows_from_traffic(net, tm, routes, make_split_scheme(net, field, routes, t));
    }
    return Pipeline{std::move(routes), std::move(field)};
}

struct GapRow {
    int size = 0;
    double theta_estimate = 0.0;
    double lp_oracle = 0.0;
    double gap = 0.0;
};

struct GapParams {
    int jellyfish_degree = 3;
    int servers_uni = 10;    // servers per switch, uni-regular runs
    int servers_bi = 8;      // servers per edge switch, bi-regular runs
    double capacity_scale = 1.0; // link capacity per unit of traffic marginal
    double delta = 0.25;
    double t = 0.0;
};

inline Network make_experiment_topology(TopoKind topo, int size, std::uint64_t seed,
                                        const GapParams& p) {
    if (topo == TopoKind::Jellyfish) return gen_jellyfish(size, p.jellyfish_degree, p.servers_uni, seed);
    // Nearest feasible 3-layer fat-tree below/at the requested switch count:
    // k=2 gives 5 switches, k=4 gives 20.
    int k = size >= 10 ? 4 : 2;
    return gen_fattree(k, p.servers_bi);
}

// One row per (size, seed): closed-form estimate vs the LP oracle.
inline std::vector<GapRow> gap_experiment(const std::vector<int>& sizes, TopoKind topo,
                                          const std::vector<std::uint64_t>& seeds,
                                          RouterKind router, const GapParams& p = {}) {
    std::vector<GapRow> rows;
    for (int size : sizes) {
        for (std::uint64_t seed : seeds) {
            Network net = make_experiment_topology(topo, size, seed, p);
            int n_switch = static_cast<int>(net.switches().size());
            double marginal = topo == TopoKind::Jellyfish ? p.servers_uni : p.servers_bi;
            TrafficMatrix tm = gen_traffic(n_switch, marginal, seed * 1000003ull + 17);
            Pipeline pipe = route_and_materialize(net, tm, p.t, router, p.delta);
            ThroughputEstimate est = estimate_throughput(net, tm, pipe.routes, pipe.field, p.t);
            double oracle = lp_oracle_throughput(net, tm, p.capacity_scale * marginal);
            rows.push_back(GapRow{size, est.theta, oracle, oracle - est.theta});
        }
    }
    return rows;
}

struct RadiusRow {
    int step = 0;
    bool mechanism_on = false;
    double epsilon = 0.0; // sentinel -1 when the denominator rate vanishes
};

// Experiment-level stand-in for the spatial TD rate: summed per-neighbor flow
// imbalance magnitude. Unlike the node TD itself (fixed by the demand matrix
// alone under flow conservation), this responds to how routes spread traffic.
inline double divergence_proxy_rate(const Network& net, const FlowField& field, NodeId u,
                                    double t) {
    double acc = 0.0;
    for (NodeId z : net.neighbors(u))
        acc += std::abs(field.eval(z, u, t) - field.eval(u, z, t));
    return acc;
}

// 80 steps in 4 equal intervals; the TD mechanism is off in intervals 1 and 3
// and on in 2 and 4. Demand is re-jittered each step from the seeded stream.
inline std::vector<RadiusRow> radius_experiment(const Network& net, const TrafficMatrix& tm,
                                                int steps, int intervals,
                                                std::pair<NodeId, NodeId> monitored_pair,
                                                std::uint64_t seed, const GapParams& p = {}) {
    Rng rng(seed);
    std::vector<RadiusRow> rows;
    const int per_interval = steps / intervals;
    for (int step = 0; step < steps; ++step) {
        bool on = (step / per_interval) % 2 == 1;
        TrafficMatrix jittered = tm;
        for (auto& row : jittered.entries)
            for (double& x : row)
                if (x > 0.0) x *= 1.0 + 0.1 * rng.uniform(-1.0, 1.0);
        Pipeline pipe = route_and_materialize(net, jittered, p.t,
                                              on ? RouterKind::TdAware : RouterKind::HopOnly,
                                              p.delta);
        auto [u, v] = monitored_pair;
        double ru = divergence_proxy_rate(net, pipe.field, u, p.t);
        double rv = divergence_proxy_rate(net, pipe.field, v, p.t);
        double eps = std::abs(rv) < 1e-12 ? -1.0 : std::abs(ru / rv - 1.0);
        rows.push_back(RadiusRow{step, on, eps});
    }
    return rows;
}

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void write_gap_csv(const std::vector<GapRow>& rows, std::ostream& os) {
    os << "size,theta_estimate,lp_oracle,gap\n";
    for (const auto& r : rows)
        os << r.size << ',' << format_number(r.theta_estimate) << ',' << format_number(r.lp_oracle)
           << ',' << format_number(r.gap) << '\n';
}

inline void write_radius_csv(const std::vector<RadiusRow>& rows, std::ostream& os) {
    os << "step,mechanism_on,epsilon\n";
    for (const auto& r : rows)
        os << r.step << ',' << (r.mechanism_on ? 1 : 0) << ',' << format_number(r.epsilon) << '\n';
}

} // namespace tdnet

#endif
