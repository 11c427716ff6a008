#ifndef TDNET_JSON_IO_HPP
#define TDNET_JSON_IO_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tdnet/divergence.hpp"
#include "tdnet/coupling.hpp"
#include "tdnet/expr.hpp"
#include "tdnet/flow.hpp"
#include "tdnet/network.hpp"
#include "tdnet/planner.hpp"
#include "tdnet/topology.hpp"

namespace tdnet {

using Json = nlohmann::json;

inline constexpr const char* kFormatTag = "tdnet-v1";
inline constexpr const char* kToolVersion = "0.1.0";

// Every artifact carries the tool version and the exact inputs that produced
// it; no timestamps, so identical runs write identical bytes.
inline Json make_meta(const std::map<std::string, std::string>& flags) {
    Json meta;
    meta["tool_version"] = kToolVersion;
    Json f = Json::object();
    for (const auto& [k, v] : flags) f[k] = v;
    meta["flags"] = f;
    return meta;
}

inline void require_format(const Json& j, const std::string& what) {
    if (!j.is_object() || !j.contains("format") || j["format"] != kFormatTag)
        throw ParseError(what + ": missing or unsupported format tag");
}

inline Json network_to_json(const Network& net) {
    Json j;
    j["format"] = kFormatTag;
    j["nodes"] = net.node_count();
    Json links = Json::array();
    for (auto [u, v] : net.links()) links.push_back(Json::array({u, v}));
    j["links"] = std::move(links);
    Json servers = Json::array();
    for (NodeId u = 0; u < net.node_count(); ++u)
        if (!net.is_switch(u)) servers.push_back(u);
    j["servers"] = std::move(servers);
    Json spec = Json::object();
    for (const auto& [u, s] : net.switch_specs())
        spec[std::to_string(u)] = {{"radix", s.radix}, {"outage", s.outage_ports}, {"servers", s.servers}};
    j["switch_spec"] = std::move(spec);
    return j;
}

inline Network network_from_json(const Json& j) {
    require_format(j, "network");
    Network net(j.at("nodes").get<int>());
    for (const auto& link : j.at("links"))
        net.add_link(link.at(0).get<NodeId>(), link.at(1).get<NodeId>());
    if (j.contains("servers"))
        for (const auto& u : j["servers"]) net.set_role(u.get<NodeId>(), NodeRole::Server);
    if (j.contains("switch_spec")) {
        for (const auto& [key, s] : j["switch_spec"].items()) {
            SwitchSpec spec;
            spec.radix = s.at("radix").get<int>();
            spec.outage_ports = s.at("outage").get<int>();
            spec.servers = s.at("servers").get<int>();
            net.set_switch_spec(std::stoi(key), spec);
        }
    }
    return net;
}

inline Json flow_field_to_json(const FlowField& field) {
    Json j;
    j["format"] = kFormatTag;
    j["bound"] = field.bound();
    Json flows = Json::array();
    for (const auto& [link, fn] : field.entries()) {
        Json entry;
        entry["from"] = link.first;
        entry["to"] = link.second;
        if (auto* e = std::get_if<Expr>(&fn.fn)) {
            entry["expr"] = e->str();
        } else {
            const auto& table = std::get<FlowTable>(fn.fn);
            entry["times"] = table.times;
            entry["values"] = table.values;
        }
        flows.push_back(std::move(entry));
    }
    j["flows"] = std::move(flows);
    return j;
}

inline FlowField flow_field_from_json(const Network& net, const Json& j) {
    require_format(j, "flow field");
    FlowField field(net, j.value("bound", 0.0));
    for (const auto& entry : j.at("flows")) {
        NodeId u = entry.at("from").get<NodeId>();
        NodeId v = entry.at("to").get<NodeId>();
        if (entry.contains("expr")) {
            field.set(u, v, Expr::parse(entry["expr"].get<std::string>()));
        } else {
            FlowTable table;
            table.times = entry.at("times").get<std::vector<double>>();
            table.values = entry.at("values").get<std::vector<double>>();
            field.set(u, v, FlowFn{std::move(table)});
        }
    }
    return field;
}

inline Json coupling_model_to_json(const CouplingModel& model) {
    Json j;
    j["format"] = kFormatTag;
    Json rels = Json::array();
    for (const auto& [pair, c] : model.relations()) {
        Json r;
        r["u"] = pair.first;
        r["z"] = pair.second;
        if (auto* a = std::get_if<AffineCoupling>(&c)) {
            r["family"] = "affine";
            r["m"] = a->m;
            r["n"] = a->n;
            r["g"] = a->g.str();
        } else {
            r["family"] = "expr";
            r["h"] = std::get<ExprCoupling>(c).h.str();
        }
        rels.push_back(std::move(r));
    }
    j["relations"] = std::move(rels);
    Json state = Json::object();
    for (NodeId u = 0; u < model.net().node_count(); ++u) state[std::to_string(u)] = model.state(u);
    j["state"] = std::move(state);
    return j;
}

inline CouplingModel coupling_model_from_json(const Network& net, const Json& j) {
    require_format(j, "coupling model");
    CouplingModel model(net);
    for (const auto& r : j.at("relations")) {
        NodeId u = r.at("u").get<NodeId>();
        NodeId z = r.at("z").get<NodeId>();
        std::string family = r.at("family").get<std::string>();
        if (family == "affine") {
            model.set_affine(u, z, r.at("m").get<double>(), r.at("n").get<double>(),
                             Expr::parse(r.value("g", std::string("1"))));
        } else if (family == "expr") {
            model.set_expr(u, z, Expr::parse(r.at("h").get<std::string>()));
        } else {
            throw ParseError("unknown coupling family '" + family + "'");
        }
    }
    if (j.contains("state"))
        for (const auto& [key, v] : j["state"].items())
            model.set_state(std::stoi(key), v.get<double>());
    return model;
}

inline Json divergence_report_to_json(const DivergenceReport& report) {
    Json j;
    j["format"] = kFormatTag;
    j["evaluated_at"] = report.evaluated_at;
    j["mode"] = report.mode == EvalMode::Instantaneous ? "instantaneous" : "windowed";
    j["delta"] = report.delta;
    Json nodes = Json::object();
    for (const auto& [u, v] : report.node_td) nodes[std::to_string(u)] = v;
    j["node_td"] = std::move(nodes);
    Json links = Json::array();
    for (const auto& [link, v] : report.link_td)
        links.push_back({{"u", link.first}, {"v", link.second}, {"value", v}});
    j["link_td"] = std::move(links);
    return j;
}

inline Json plan_result_to_json(const PlanResult& r, const PlanSlacks& slacks) {
    Json j;
    j["format"] = kFormatTag;
    j["feasible"] = r.feasible;
    j["objective"] = r.objective;
    j["kkt_residual"] = r.kkt_residual;
    j["iterations"] = r.iterations;
    if (!r.feasible) j["violated_constraint"] = r.violated_constraint;
    Json div = Json::object();
    for (const auto& [u, v] : r.divergences) div[std::to_string(u)] = v;
    j["divergences"] = std::move(div);
    Json s;
    s["min_slack"] = slacks.min_slack;
    Json rate = Json::object(), lower = Json::object(), upper = Json::object();
    for (const auto& [u, v] : slacks.rate_slack) rate[std::to_string(u)] = v;
    for (const auto& [u, v] : slacks.lower_slack) lower[std::to_string(u)] = v;
    for (const auto& [u, v] : slacks.upper_slack) upper[std::to_string(u)] = v;
    s["rate"] = std::move(rate);
    s["lower"] = std::move(lower);
    s["upper"] = std::move(upper);
    Json cap = Json::array();
    for (const auto& [pair, v] : slacks.capacity_slack)
        cap.push_back({{"i", pair.first}, {"j", pair.second}, {"slack", v}});
    s["capacity"] = std::move(cap);
    j["slacks"] = std::move(s);
    return j;
}

namespace detail {

inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::vector<std::vector<double>> dense_matrix_from_csv(std::istream& is,
                                                              const std::string& what) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError(what + ": empty input");
    std::vector<std::vector<double>> rows;
    size_t width = 0;
    // Header cells are the switch indices; only the count matters.
    {
        std::stringstream header(line);
        std::string cell;
        while (std::getline(header, cell, ',')) ++width;
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != width)
            throw ParseError(what + ": row width " + std::to_string(row.size()) +
                             " does not match header width " + std::to_string(width));
        rows.push_back(std::move(row));
    }
    if (rows.size() != width)
        throw ParseError(what + ": matrix is not square");
    return rows;
}

inline void dense_matrix_to_csv(const std::vector<std::vector<double>>& m, std::ostream& os) {
    for (size_t j = 0; j < m.size(); ++j) os << (j ? "," : "") << j;
    os << '\n';
    for (const auto& row : m) {
        for (size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_number(row[j]);
        os << '\n';
    }
}

} // namespace detail

inline void traffic_to_csv(const TrafficMatrix& tm, std::ostream& os) {
    detail::dense_matrix_to_csv(tm.entries, os);
}

inline TrafficMatrix traffic_from_csv(std::istream& is) {
    TrafficMatrix tm;
    tm.entries = detail::dense_matrix_from_csv(is, "traffic matrix");
    tm.marginal = 0.0;
    for (double v : tm.entries.front()) tm.marginal += v;
    return tm;
}

inline void capacity_to_csv(const CapacityMatrix& cm, std::ostream& os) {
    detail::dense_matrix_to_csv(cm.entries, os);
}

inline CapacityMatrix capacity_from_csv(std::istream& is) {
    CapacityMatrix cm;
    cm.entries = detail::dense_matrix_from_csv(is, "capacity matrix");
    return cm;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open " + path);
    Json j;
    try {
        is >> j;
    } catch (const Json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << j.dump(2) << '\n';
}

} // namespace tdnet

#endif
