// Command-line front end: topology/traffic generation, divergence analysis,
// dynamics checks, routing, throughput estimation, experiments, and planning.
// Exit codes: 0 success, 1 domain error (message on stderr), 2 usage error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdnet/json_io.hpp"
#include "tdnet/tdnet.hpp"

namespace {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("TDNET_LOG");
    if (!env) return LogLevel::Error;
    std::string v = env;
    if (v == "debug") return LogLevel::Debug;
    if (v == "info") return LogLevel::Info;
    return LogLevel::Error;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) std::cerr << "[info] " << msg << '\n';
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stoi(cell));
    return out;
}

// "1..20" expands to the inclusive range; otherwise a comma list.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    auto dots = text.find("..");
    if (dots != std::string::npos) {
        std::uint64_t lo = std::stoull(text.substr(0, dots));
        std::uint64_t hi = std::stoull(text.substr(dots + 2));
        std::vector<std::uint64_t> out;
        for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
        return out;
    }
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stoull(cell));
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw tdnet::Error("cannot write " + path);
    os << content;
}

// CSV payloads keep their documented schema; the meta block goes to a
// sibling .meta.json so re-runs are still verifiable.
void write_csv_with_meta(const std::string& path, const std::string& payload,
                         const std::map<std::string, std::string>& flags) {
    write_text_file(path, payload);
    tdnet::Json meta;
    meta["format"] = tdnet::kFormatTag;
    meta["meta"] = tdnet::make_meta(flags);
    tdnet::write_json_file(path + ".meta.json", meta);
}

tdnet::TrafficMatrix load_traffic(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw tdnet::ParseError("cannot open " + path);
    return tdnet::traffic_from_csv(is);
}

tdnet::CapacityMatrix load_capacity(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw tdnet::ParseError("cannot open " + path);
    return tdnet::capacity_from_csv(is);
}

tdnet::Json routeset_to_json(const tdnet::RouteSet& rs) {
    tdnet::Json j;
    j["source"] = rs.source;
    j["target"] = rs.target;
    j["hop_count"] = rs.hop_count;
    tdnet::Json routes = tdnet::Json::array();
    for (const auto& r : rs.routes) routes.push_back(r.nodes);
    j["routes"] = std::move(routes);
    return j;
}

struct GenJellyfishArgs {
    int switches = 6, degree = 3, servers = 10;
    std::uint64_t seed = 42;
    std::string out;
};
struct GenFattreeArgs {
    int k = 4, servers = 8;
    std::uint64_t seed = 42;
    std::string out;
};
struct GenRingArgs {
    int backbone = 6;
    std::string branches = "3,3,3,2,1,1";
    std::uint64_t seed = 42;
    std::string out;
};

void run_gen(const std::string& kind, const tdnet::Network& net, std::uint64_t seed,
             const std::map<std::string, std::string>& flags, const std::string& out) {
    tdnet::Json j = tdnet::network_to_json(net);
    j["meta"] = tdnet::make_meta(flags);
    j["meta"]["seed"] = seed;
    tdnet::write_json_file(out, j);
    log_info("wrote " + kind + " topology with " + std::to_string(net.node_count()) +
             " nodes to " + out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"traffic divergence network toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a topology");
    gen->require_subcommand(1);
    GenJellyfishArgs jf;
    auto* gen_jf = gen->add_subcommand("jellyfish", "random regular switch graph");
    gen_jf->add_option("--switches", jf.switches, "switch count");
    gen_jf->add_option("--degree", jf.degree, "switch-to-switch degree");
    gen_jf->add_option("--servers", jf.servers, "servers per switch");
    gen_jf->add_option("--seed", jf.seed, "generator seed");
    gen_jf->add_option("--out", jf.out, "output path")->required();

    GenFattreeArgs ft;
    auto* gen_ft = gen->add_subcommand("fattree", "3-layer k-ary fat-tree");
    gen_ft->add_option("--k", ft.k, "fat-tree parameter (even)");
    gen_ft->add_option("--servers", ft.servers, "servers per edge switch");
    gen_ft->add_option("--seed", ft.seed, "recorded in meta; generator is deterministic");
    gen_ft->add_option("--out", ft.out, "output path")->required();

    GenRingArgs ring;
    auto* gen_ring_cmd = gen->add_subcommand("ring", "backbone cycle with branch paths");
    gen_ring_cmd->add_option("--backbone", ring.backbone, "cycle length");
    gen_ring_cmd->add_option("--branches", ring.branches, "comma list of branch path lengths");
    gen_ring_cmd->add_option("--seed", ring.seed, "recorded in meta; generator is deterministic");
    gen_ring_cmd->add_option("--out", ring.out, "output path")->required();

    // gen-traffic
    int gt_switches = 6;
    double gt_marginal = 10.0;
    std::uint64_t gt_seed = 7;
    std::string gt_out;
    auto* gen_traffic_cmd = app.add_subcommand("gen-traffic", "doubly-stochastic traffic matrix");
    gen_traffic_cmd->add_option("--switches", gt_switches, "matrix dimension");
    gen_traffic_cmd->add_option("--marginal", gt_marginal, "common row/column sum");
    gen_traffic_cmd->add_option("--seed", gt_seed, "generator seed");
    gen_traffic_cmd->add_option("--out", gt_out, "output CSV path")->required();

    // analyze
    std::string an_network, an_flows, an_out;
    double an_t = 0.0, an_delta = 0.0;
    std::vector<std::string> an_routes;
    bool an_windowed = false;
    auto* analyze = app.add_subcommand("analyze", "node/link/route divergence report");
    analyze->add_option("--network", an_network, "network JSON")->required();
    analyze->add_option("--flows", an_flows, "flow field JSON")->required();
    analyze->add_option("--t", an_t, "evaluation time");
    analyze->add_flag("--windowed", an_windowed, "average flows over [t, t+delta]");
    analyze->add_option("--delta", an_delta, "window width for --windowed");
    analyze->add_option("--route", an_routes, "comma node list; repeatable");
    analyze->add_option("--out", an_out, "output path")->required();

    // dynamics
    std::string dy_network, dy_coupling, dy_flows, dy_check = "identity", dy_out;
    double dy_t = 0.0, dy_eps = 0.05;
    auto* dynamics = app.add_subcommand("dynamics", "coupling dynamics checks");
    dynamics->add_option("--network", dy_network, "network JSON")->required();
    dynamics->add_option("--coupling", dy_coupling, "coupling model JSON")->required();
    dynamics->add_option("--flows", dy_flows, "flow field JSON (needed for --check bound)");
    dynamics->add_option("--t", dy_t, "evaluation time");
    dynamics->add_option("--check", dy_check, "identity | bound | distribution")
        ->check(CLI::IsMember({"identity", "bound", "distribution"}));
    dynamics->add_option("--eps", dy_eps, "distribution radius");
    dynamics->add_option("--out", dy_out, "output path")->required();

    // route
    std::string rt_network, rt_flows, rt_out;
    int rt_src = 0, rt_dst = 0;
    double rt_t = 0.0, rt_delta = 0.25;
    auto* route_cmd = app.add_subcommand("route", "congestion-avoiding min-hop route set");
    route_cmd->add_option("--network", rt_network, "network JSON")->required();
    route_cmd->add_option("--flows", rt_flows, "flow field JSON")->required();
    route_cmd->add_option("--src", rt_src, "source node")->required();
    route_cmd->add_option("--dst", rt_dst, "target node")->required();
    route_cmd->add_option("--t", rt_t, "evaluation time");
    route_cmd->add_option("--delta", rt_delta, "relative score slack");
    route_cmd->add_option("--out", rt_out, "output path")->required();

    // throughput
    std::string th_network, th_traffic, th_flows, th_out;
    double th_t = 0.0, th_delta = 0.25;
    auto* throughput_cmd = app.add_subcommand("throughput", "closed-form throughput estimate");
    throughput_cmd->add_option("--network", th_network, "network JSON")->required();
    throughput_cmd->add_option("--traffic", th_traffic, "traffic matrix CSV")->required();
    throughput_cmd->add_option("--flows", th_flows, "flow field JSON")->required();
    throughput_cmd->add_option("--t", th_t, "evaluation time");
    throughput_cmd->add_option("--delta", th_delta, "route-set score slack");
    throughput_cmd->add_option("--out", th_out, "output path")->required();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "seeded experiment drivers");
    experiment->require_subcommand(1);
    std::string gx_topo = "jellyfish", gx_sizes = "6,8,10,12", gx_seeds = "1..20",
                gx_router = "td_aware", gx_out;
    double gx_marginal = -1.0, gx_capacity_scale = 1.0, gx_delta = 0.25;
    auto* exp_gap = experiment->add_subcommand("gap", "estimate vs LP-oracle gap rows");
    exp_gap->add_option("--topo", gx_topo, "jellyfish | fattree")
        ->check(CLI::IsMember({"jellyfish", "fattree"}));
    exp_gap->add_option("--sizes", gx_sizes, "comma list of switch counts");
    exp_gap->add_option("--seeds", gx_seeds, "comma list or lo..hi range");
    exp_gap->add_option("--router", gx_router, "td_aware | hop_only")
        ->check(CLI::IsMember({"td_aware", "hop_only"}));
    exp_gap->add_option("--marginal", gx_marginal, "traffic marginal (default 10 uni / 8 bi)");
    exp_gap->add_option("--capacity-scale", gx_capacity_scale, "link capacity per unit marginal");
    exp_gap->add_option("--delta", gx_delta, "route-set score slack");
    exp_gap->add_option("--out", gx_out, "output CSV path")->required();

    std::string rx_topo = "jellyfish", rx_pair = "0,1", rx_out;
    int rx_size = 8, rx_steps = 80, rx_intervals = 4;
    std::uint64_t rx_seed = 1;
    double rx_marginal = -1.0, rx_delta = 0.25;
    auto* exp_radius = experiment->add_subcommand("radius", "distribution radius rows");
    exp_radius->add_option("--topo", rx_topo, "jellyfish | fattree")
        ->check(CLI::IsMember({"jellyfish", "fattree"}));
    exp_radius->add_option("--size", rx_size, "switch count");
    exp_radius->add_option("--steps", rx_steps, "step count");
    exp_radius->add_option("--intervals", rx_intervals, "equal interval count");
    exp_radius->add_option("--pair", rx_pair, "monitored pair u,v");
    exp_radius->add_option("--seed", rx_seed, "experiment seed");
    exp_radius->add_option("--marginal", rx_marginal, "traffic marginal (default 10 uni / 8 bi)");
    exp_radius->add_option("--delta", rx_delta, "route-set score slack");
    exp_radius->add_option("--out", rx_out, "output CSV path")->required();

    // plan
    std::string pl_network, pl_traffic, pl_capacity, pl_baseline, pl_out;
    double pl_m = 1.1, pl_dt = 1.0, pl_div_min = 1e-3, pl_div_max = 1e6, pl_delta = 0.25;
    auto* plan_cmd = app.add_subcommand("plan", "power-optimized divergence planning");
    plan_cmd->add_option("--network", pl_network, "network JSON")->required();
    plan_cmd->add_option("--traffic", pl_traffic, "traffic matrix CSV")->required();
    plan_cmd->add_option("--capacity", pl_capacity, "capacity matrix CSV")->required();
    plan_cmd->add_option("--m", pl_m, "divergence rate limit")->required();
    plan_cmd->add_option("--dt", pl_dt, "planning step");
    plan_cmd->add_option("--div-min", pl_div_min, "divergence lower bound");
    plan_cmd->add_option("--div-max", pl_div_max, "divergence upper bound");
    plan_cmd->add_option("--baseline", pl_baseline,
                         "JSON node->divergence map; default derives from carried traffic");
    plan_cmd->add_option("--delta", pl_delta, "route-set score slack");
    plan_cmd->add_option("--out", pl_out, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen_jf->parsed()) {
            run_gen("jellyfish", tdnet::gen_jellyfish(jf.switches, jf.degree, jf.servers, jf.seed),
                    jf.seed,
                    {{"command", "gen jellyfish"},
                     {"switches", std::to_string(jf.switches)},
                     {"degree", std::to_string(jf.degree)},
                     {"servers", std::to_string(jf.servers)},
                     {"seed", std::to_string(jf.seed)}},
                    jf.out);
        } else if (gen_ft->parsed()) {
            run_gen("fattree", tdnet::gen_fattree(ft.k, ft.servers), ft.seed,
                    {{"command", "gen fattree"},
                     {"k", std::to_string(ft.k)},
                     {"servers", std::to_string(ft.servers)},
                     {"seed", std::to_string(ft.seed)}},
                    ft.out);
        } else if (gen_ring_cmd->parsed()) {
            run_gen("ring", tdnet::gen_ring(ring.backbone, parse_int_list(ring.branches)),
                    ring.seed,
                    {{"command", "gen ring"},
                     {"backbone", std::to_string(ring.backbone)},
                     {"branches", ring.branches},
                     {"seed", std::to_string(ring.seed)}},
                    ring.out);
        } else if (gen_traffic_cmd->parsed()) {
            tdnet::TrafficMatrix tm = tdnet::gen_traffic(gt_switches, gt_marginal, gt_seed);
            std::ostringstream os;
            tdnet::traffic_to_csv(tm, os);
            write_csv_with_meta(gt_out, os.str(),
                                {{"command", "gen-traffic"},
                                 {"switches", std::to_string(gt_switches)},
                                 {"marginal", tdnet::format_number(gt_marginal)},
                                 {"seed", std::to_string(gt_seed)}});
        } else if (analyze->parsed()) {
            tdnet::Network net = tdnet::network_from_json(tdnet::read_json_file(an_network));
            tdnet::FlowField field =
                tdnet::flow_field_from_json(net, tdnet::read_json_file(an_flows));
            tdnet::EvalMode mode =
                an_windowed ? tdnet::EvalMode::Windowed : tdnet::EvalMode::Instantaneous;
            tdnet::DivergenceReport report =
                tdnet::divergence_report(net, field, an_t, mode, an_delta);
            tdnet::Json j = tdnet::divergence_report_to_json(report);
            if (!an_routes.empty()) {
                tdnet::Json routes = tdnet::Json::array();
                for (const auto& spec : an_routes) {
                    tdnet::Route r;
                    for (int id : parse_int_list(spec)) r.nodes.push_back(id);
                    routes.push_back({{"nodes", r.nodes},
                                      {"value", tdnet::route_td(net, field, r, an_t, mode, an_delta)}});
                }
                j["route_td"] = std::move(routes);
            }
            std::map<std::string, std::string> flags = {{"command", "analyze"},
                                                        {"network", an_network},
                                                        {"flows", an_flows},
                                                        {"t", tdnet::format_number(an_t)}};
            j["meta"] = tdnet::make_meta(flags);
            tdnet::write_json_file(an_out, j);
        } else if (dynamics->parsed()) {
            tdnet::Network net = tdnet::network_from_json(tdnet::read_json_file(dy_network));
            tdnet::CouplingModel model =
                tdnet::coupling_model_from_json(net, tdnet::read_json_file(dy_coupling));
            tdnet::Json j;
            j["format"] = tdnet::kFormatTag;
            j["check"] = dy_check;
            if (dy_check == "identity") {
                tdnet::Json rows = tdnet::Json::array();
                double worst = 0.0;
                for (const auto& [pair, c] : model.relations()) {
                    for (int order = 1; order <= 3; ++order) {
                        double res =
                            tdnet::check_spatial_dynamics(model, pair.first, pair.second, order, dy_t);
                        worst = std::max(worst, std::abs(res));
                        rows.push_back({{"u", pair.first},
                                        {"z", pair.second},
                                        {"order", order},
                                        {"residual", res}});
                    }
                }
                j["residuals"] = std::move(rows);
                j["max_abs_residual"] = worst;
            } else if (dy_check == "bound") {
                if (dy_flows.empty())
                    throw tdnet::Error("--check bound needs --flows for the temporal derivatives");
                tdnet::FlowField field =
                    tdnet::flow_field_from_json(net, tdnet::read_json_file(dy_flows));
                tdnet::Json rows = tdnet::Json::array();
                for (tdnet::NodeId u = 0; u < net.node_count(); ++u) {
                    if (net.neighbors(u).empty()) continue;
                    tdnet::RateBound b = tdnet::temporal_rate_bound(model, net, field, u, dy_t);
                    rows.push_back({{"node", u},
                                    {"lhs", b.lhs},
                                    {"homogeneous_bound", b.homogeneous_bound},
                                    {"cs_bound", b.cs_bound},
                                    {"cs_holds", b.lhs <= b.cs_bound + 1e-12}});
                }
                j["bounds"] = std::move(rows);
            } else {
                tdnet::DistributionCheck global = tdnet::check_max_distribution(
                    model, dy_t, dy_eps, tdnet::DistributionCheckMode::Global);
                tdnet::DistributionCheck local = tdnet::check_max_distribution(
                    model, dy_t, dy_eps, tdnet::DistributionCheckMode::Local);
                j["global"] = {{"satisfied", global.satisfied},
                               {"worst_pair", {global.worst_pair.first, global.worst_pair.second}},
                               {"worst_eps", global.worst_eps}};
                j["local"] = {{"satisfied", local.satisfied},
                              {"worst_pair", {local.worst_pair.first, local.worst_pair.second}},
                              {"worst_eps", local.worst_eps}};
            }
            j["meta"] = tdnet::make_meta({{"command", "dynamics"},
                                          {"network", dy_network},
                                          {"coupling", dy_coupling},
                                          {"check", dy_check},
                                          {"t", tdnet::format_number(dy_t)},
                                          {"eps", tdnet::format_number(dy_eps)}});
            tdnet::write_json_file(dy_out, j);
        } else if (route_cmd->parsed()) {
            tdnet::Network net = tdnet::network_from_json(tdnet::read_json_file(rt_network));
            tdnet::FlowField field =
                tdnet::flow_field_from_json(net, tdnet::read_json_file(rt_flows));
            tdnet::RouteSet rs = tdnet::route_set(net, field, rt_src, rt_dst, rt_t, rt_delta);
            tdnet::Route greedy = tdnet::route_greedy(net, field, rt_src, rt_dst, rt_t);
            tdnet::Json j = routeset_to_json(rs);
            j["format"] = tdnet::kFormatTag;
            j["greedy"] = greedy.nodes;
            j["meta"] = tdnet::make_meta({{"command", "route"},
                                          {"network", rt_network},
                                          {"flows", rt_flows},
                                          {"src", std::to_string(rt_src)},
                                          {"dst", std::to_string(rt_dst)},
                                          {"t", tdnet::format_number(rt_t)},
                                          {"delta", tdnet::format_number(rt_delta)}});
            tdnet::write_json_file(rt_out, j);
        } else if (throughput_cmd->parsed()) {
            tdnet::Network net = tdnet::network_from_json(tdnet::read_json_file(th_network));
            tdnet::TrafficMatrix tm = load_traffic(th_traffic);
            tdnet::FlowField field =
                tdnet::flow_field_from_json(net, tdnet::read_json_file(th_flows));
            tdnet::RouteSetMap routes = tdnet::route_all_pairs(net, tm, field, th_t,
                                                               tdnet::RouterKind::TdAware, th_delta);
            tdnet::ThroughputEstimate est =
                tdnet::estimate_throughput(net, tm, routes, field, th_t);
            tdnet::Json j;
            j["format"] = tdnet::kFormatTag;
            j["theta"] = est.theta;
            j["e_count"] = est.e_count;
            j["marginal"] = est.marginal;
            j["bracket"] = est.bracket;
            j["alpha_below_one"] = est.alpha_below_one;
            tdnet::Json pairs = tdnet::Json::array();
            for (const auto& [pair, term] : est.per_pair_terms)
                pairs.push_back({{"u", pair.first}, {"v", pair.second}, {"term", term}});
            j["per_pair_terms"] = std::move(pairs);
            j["meta"] = tdnet::make_meta({{"command", "throughput"},
                                          {"network", th_network},
                                          {"traffic", th_traffic},
                                          {"flows", th_flows},
                                          {"t", tdnet::format_number(th_t)},
                                          {"delta", tdnet::format_number(th_delta)}});
            tdnet::write_json_file(th_out, j);
        } else if (exp_gap->parsed()) {
            tdnet::GapParams params;
            params.delta = gx_delta;
            params.capacity_scale = gx_capacity_scale;
            if (gx_marginal > 0.0) {
                params.servers_uni = static_cast<int>(gx_marginal);
                params.servers_bi = static_cast<int>(gx_marginal);
            }
            tdnet::TopoKind topo =
                gx_topo == "fattree" ? tdnet::TopoKind::FatTree : tdnet::TopoKind::Jellyfish;
            tdnet::RouterKind router = gx_router == "hop_only" ? tdnet::RouterKind::HopOnly
                                                               : tdnet::RouterKind::TdAware;
            auto rows = tdnet::gap_experiment(parse_int_list(gx_sizes), topo,
                                              parse_seeds(gx_seeds), router, params);
            std::ostringstream os;
            tdnet::write_gap_csv(rows, os);
            write_csv_with_meta(gx_out, os.str(),
                                {{"command", "experiment gap"},
                                 {"topo", gx_topo},
                                 {"sizes", gx_sizes},
                                 {"seeds", gx_seeds},
                                 {"router", gx_router},
                                 {"capacity_scale", tdnet::format_number(gx_capacity_scale)},
                                 {"delta", tdnet::format_number(gx_delta)}});
        } else if (exp_radius->parsed()) {
            tdnet::GapParams params;
            params.delta = rx_delta;
            if (rx_marginal > 0.0) {
                params.servers_uni = static_cast<int>(rx_marginal);
                params.servers_bi = static_cast<int>(rx_marginal);
            }
            tdnet::TopoKind topo =
                rx_topo == "fattree" ? tdnet::TopoKind::FatTree : tdnet::TopoKind::Jellyfish;
            tdnet::Network net = tdnet::make_experiment_topology(topo, rx_size, rx_seed, params);
            int n_switch = static_cast<int>(net.switches().size());
            double marginal =
                topo == tdnet::TopoKind::Jellyfish ? params.servers_uni : params.servers_bi;
            tdnet::TrafficMatrix tm =
                tdnet::gen_traffic(n_switch, marginal, rx_seed * 1000003ull + 17);
            auto pr = parse_int_list(rx_pair);
            if (pr.size() != 2) throw tdnet::Error("--pair needs exactly two node ids");
            auto rows = tdnet::radius_experiment(net, tm, rx_steps, rx_intervals, {pr[0], pr[1]},
                                                 rx_seed, params);
            std::ostringstream os;
            tdnet::write_radius_csv(rows, os);
            write_csv_with_meta(rx_out, os.str(),
                                {{"command", "experiment radius"},
                                 {"topo", rx_topo},
                                 {"size", std::to_string(rx_size)},
                                 {"steps", std::to_string(rx_steps)},
                                 {"intervals", std::to_string(rx_intervals)},
                                 {"pair", rx_pair},
                                 {"seed", std::to_string(rx_seed)},
                                 {"delta", tdnet::format_number(rx_delta)}});
        } else if (plan_cmd->parsed()) {
            tdnet::PlanProblem problem;
            problem.net = tdnet::network_from_json(tdnet::read_json_file(pl_network));
            problem.tm = load_traffic(pl_traffic);
            problem.cm = load_capacity(pl_capacity);
            problem.rate_limit = pl_m;
            problem.dt = pl_dt;
            problem.div_min = pl_div_min;
            problem.div_max = pl_div_max;
            tdnet::Pipeline pipe = tdnet::route_and_materialize(problem.net, problem.tm, 0.0,
                                                                tdnet::RouterKind::TdAware,
                                                                pl_delta);
            problem.routes = pipe.routes;
            if (!pl_baseline.empty()) {
                tdnet::Json b = tdnet::read_json_file(pl_baseline);
                for (const auto& [key, v] : b.items())
                    problem.baseline_div[std::stoi(key)] = v.get<double>();
            } else {
                // Carried-traffic baseline: half the total flow through a node,
                // floored at div_min. Transit-heavy nodes get larger baselines.
                for (tdnet::NodeId u = 0; u < problem.net.node_count(); ++u) {
                    double carried = 0.0;
                    for (tdnet::NodeId z : problem.net.neighbors(u))
                        carried += pipe.field.eval(z, u, 0.0) + pipe.field.eval(u, z, 0.0);
                    problem.baseline_div[u] = std::max(pl_div_min, carried / 2.0);
                }
            }
            tdnet::PlanResult result = tdnet::solve_plan(problem);
            tdnet::PlanSlacks slacks = tdnet::verify_plan(problem, result);
            tdnet::Json j = tdnet::plan_result_to_json(result, slacks);
            j["meta"] = tdnet::make_meta({{"command", "plan"},
                                          {"network", pl_network},
                                          {"traffic", pl_traffic},
                                          {"capacity", pl_capacity},
                                          {"m", tdnet::format_number(pl_m)},
                                          {"dt", tdnet::format_number(pl_dt)}});
            tdnet::write_json_file(pl_out, j);
            if (!result.feasible) {
                std::cerr << "infeasible: " << result.violated_constraint << '\n';
                return 1;
            }
        }
    } catch (const tdnet::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
