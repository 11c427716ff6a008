#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "tdnet/json_io.hpp"
#include "tdnet/topology.hpp"

using namespace tdnet;

TEST_CASE("network round trip") {
    Network net = gen_fattree(2, 1);
    Json j = network_to_json(net);
    Network back = network_from_json(j);
    CHECK(back.node_count() == net.node_count());
    CHECK(back.links() == net.links());
    for (NodeId u = 0; u < net.node_count(); ++u) CHECK(back.role(u) == net.role(u));
    for (const auto& [u, spec] : net.switch_specs()) {
        REQUIRE(back.switch_spec(u) != nullptr);
        CHECK(back.switch_spec(u)->radix == spec.radix);
        CHECK(back.switch_spec(u)->servers == spec.servers);
    }
    CHECK(network_to_json(back) == j); // byte-stable re-serialization
}

TEST_CASE("format tag is enforced") {
    Json j = Json::object();
    j["nodes"] = 2;
    CHECK_THROWS_AS(network_from_json(j), ParseError);
    j["format"] = "something-else";
    CHECK_THROWS_AS(network_from_json(j), ParseError);
    CHECK_THROWS_AS(flow_field_from_json(Network(2), j), ParseError);
    CHECK_THROWS_AS(coupling_model_from_json(Network(2), j), ParseError);
}

TEST_CASE("flow field round trip keeps expressions and tables") {
    Network net(3);
    net.add_link(0, 1);
    net.add_link(1, 2);
    FlowField field(net, 10.0);
    field.set(0, 1, Expr::parse("1 + 0.5*sin(t)"));
    field.set(2, 1, FlowFn{FlowTable{{0.0, 1.0, 2.0}, {3.0, 2.0, 1.0}}});
    Json j = flow_field_to_json(field);
    FlowField back = flow_field_from_json(net, j);
    CHECK(back.bound() == 10.0);
    for (double t : {0.0, 0.4, 1.3, 2.6})
        CHECK(back.eval(0, 1, t) == Catch::Approx(field.eval(0, 1, t)).margin(1e-15));
    CHECK(back.eval(2, 1, 0.5) == Catch::Approx(2.5));
    CHECK(flow_field_to_json(back) == j);
}

TEST_CASE("coupling model round trip") {
    Network net(3);
    net.add_link(0, 1);
    net.add_link(1, 2);
    CouplingModel model(net);
    model.set_affine(0, 1, 2.0, -1.0, Expr::parse("cos(t)"));
    model.set_expr(1, 2, Expr::parse("x^3 + 0.25*x"));
    model.set_state(1, 0.5);
    model.set_state(2, 1.5);
    Json j = coupling_model_to_json(model);
    CouplingModel back = coupling_model_from_json(net, j);
    CHECK(back.state(1) == 0.5);
    CHECK(back.state(2) == 1.5);
    for (int order = 1; order <= 3; ++order) {
        CHECK(spatial_derivative(back, 0, 1, order, 0.7) ==
              Catch::Approx(spatial_derivative(model, 0, 1, order, 0.7)).margin(1e-15));
        CHECK(spatial_derivative(back, 1, 2, order, 0.7) ==
              Catch::Approx(spatial_derivative(model, 1, 2, order, 0.7)).margin(1e-15));
    }
    CHECK(coupling_model_to_json(back) == j);

    Json bad = j;
    bad["relations"][0]["family"] = "mystery";
    CHECK_THROWS_AS(coupling_model_from_json(net, bad), ParseError);
}

TEST_CASE("divergence report serialization") {
    Network net(2);
    net.add_link(0, 1);
    FlowField field(net);
    field.set(0, 1, Expr::constant(2.0));
    Json j = divergence_report_to_json(divergence_report(net, field, 1.5));
    CHECK(j["format"] == kFormatTag);
    CHECK(j["evaluated_at"] == 1.5);
    CHECK(j["node_td"]["0"].get<double>() == Catch::Approx(-2.0));
    CHECK(j["node_td"]["1"].get<double>() == Catch::Approx(2.0));
    CHECK(j["link_td"].size() == 1);
}

TEST_CASE("traffic and capacity CSV round trips") {
    TrafficMatrix tm = gen_traffic(5, 2.0, 99);
    std::ostringstream os;
    traffic_to_csv(tm, os);
    std::istringstream is(os.str());
    TrafficMatrix back = traffic_from_csv(is);
    REQUIRE(back.size() == 5);
    CHECK(back.marginal == Catch::Approx(2.0).margin(1e-9));
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            CHECK(back.at(i, j) == Catch::Approx(tm.at(i, j)).margin(1e-11));
    // Re-serialization is byte-identical.
    std::ostringstream os2;
    traffic_to_csv(back, os2);
    CHECK(os2.str() == os.str());

    CapacityMatrix cm;
    cm.entries = {{0.0, 1.5}, {1.5, 0.0}};
    std::ostringstream cs;
    capacity_to_csv(cm, cs);
    CHECK(cs.str() == "0,1\n0,1.5\n1.5,0\n");
    std::istringstream cis(cs.str());
    CHECK(capacity_from_csv(cis).at(0, 1) == 1.5);
}

TEST_CASE("CSV shape errors") {
    std::istringstream empty("");
    CHECK_THROWS_AS(traffic_from_csv(empty), ParseError);
    std::istringstream ragged("0,1\n1,2,3\n4,5\n");
    CHECK_THROWS_AS(traffic_from_csv(ragged), ParseError);
    std::istringstream rect("0,1\n1,2\n");
    CHECK_THROWS_AS(traffic_from_csv(rect), ParseError);
}

TEST_CASE("meta block carries version and flags only") {
    Json meta = make_meta({{"seed", "7"}, {"switches", "12"}});
    CHECK(meta["tool_version"] == kToolVersion);
    CHECK(meta["flags"]["seed"] == "7");
    CHECK(meta["flags"]["switches"] == "12");
    CHECK_FALSE(meta.contains("timestamp"));
}
