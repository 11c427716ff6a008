#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "tdnet/throughput.hpp"

using namespace tdnet;

namespace {

Network triangle() {
    Network net(3);
    net.add_link(0, 1);
    net.add_link(1, 2);
    net.add_link(0, 2);
    return net;
}

Network square() {
    Network net(4);
    net.add_link(0, 1);
    net.add_link(1, 2);
    net.add_link(2, 3);
    net.add_link(3, 0);
    return net;
}

RouteSetMap all_pairs_routesets(const Network& net, const FlowField& field, const TrafficMatrix& tm,
                                double t = 0.0, double delta = 0.0) {
    RouteSetMap out;
    for (int u = 0; u < tm.size(); ++u)
        for (int v = 0; v < tm.size(); ++v)
            if (u != v && tm.at(u, v) > 0.0) out[{u, v}] = route_set(net, field, u, v, t, delta);
    return out;
}

TrafficMatrix uniform_traffic(int n, double marginal) {
    TrafficMatrix tm;
    tm.marginal = marginal;
    tm.entries.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n),
                                                                 marginal / (n - 1)));
    for (int i = 0; i < n; ++i) tm.entries[static_cast<size_t>(i)][static_cast<size_t>(i)] = 0.0;
    return tm;
}

} // namespace

TEST_CASE("split scheme weights routes by inverse divergence") {
    // Square with load around node 1: route (0,1,2) scores 4, (0,3,2) scores 2.
    Network net = square();
    FlowField field(net);
    field.set(0, 1, Expr::constant(2.0));
    RouteSetMap rs;
    rs[{0, 2}] = route_set(net, field, 0, 2, 0.0, 1.0);
    REQUIRE(rs[{0, 2}].routes.size() == 2);
    SplitScheme scheme = make_split_scheme(net, field, rs, 0.0);
    // c = 1/(2/4 + 2/2), alpha = 2c for both routes, beta = alpha / score.
    const auto& alpha = scheme.alpha.at({0, 2});
    const auto& beta = scheme.beta.at({0, 2});
    CHECK(alpha[0] == Catch::Approx(4.0 / 3.0));
    CHECK(alpha[1] == Catch::Approx(4.0 / 3.0));
    CHECK(beta[0] == Catch::Approx(1.0 / 3.0));
    CHECK(beta[1] == Catch::Approx(2.0 / 3.0));
    CHECK(beta[0] + beta[1] == Catch::Approx(1.0));
    CHECK_FALSE(scheme.alpha_below_one); // 4/3 exceeds the coefficient bound

    TrafficMatrix tm;
    tm.marginal = 1.0;
    tm.entries.assign(4, std::vector<double>(4, 0.0));
    tm.entries[0][2] = 1.0;
    FlowField materialized = flows_from_traffic(net, tm, rs, scheme);
    CHECK(materialized.eval(0, 1, 0.0) == Catch::Approx(1.0 / 3.0));
    CHECK(materialized.eval(0, 3, 0.0) == Catch::Approx(2.0 / 3.0));
    CHECK(materialized.eval(3, 2, 0.0) == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("triangle with direct routes") {
    // Single-hop routes everywhere: the bracket collapses to 1 and
    // theta = 2E / marginal = 6 / 2.
    Network net = triangle();
    FlowField quiet(net);
    TrafficMatrix tm = uniform_traffic(3, 2.0);
    RouteSetMap rs = all_pairs_routesets(net, quiet, tm);
    ThroughputEstimate est = estimate_throughput(net, tm, rs, quiet);
    CHECK(est.e_count == 3);
    CHECK(est.two_e == Catch::Approx(6.0));
    CHECK(est.bracket == Catch::Approx(1.0));
    CHECK(est.theta == Catch::Approx(3.0));
    for (const auto& [pair, term] : est.per_pair_terms) CHECK(term == Catch::Approx(0.0));
}

TEST_CASE("pair terms depend on hop count and route count") {
    // With equal-length route sets each pair term is length - count.
    Network path(3);
    path.add_link(0, 1);
    path.add_link(1, 2);
    FlowField quiet(path);
    TrafficMatrix tm;
    tm.marginal = 1.0;
    tm.entries = {{0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    RouteSetMap rs = all_pairs_routesets(path, quiet, tm);
    ThroughputEstimate est = estimate_throughput(path, tm, rs, quiet);
    CHECK(est.per_pair_terms.at({0, 2}) == Catch::Approx(1.0)); // one 2-hop route
    CHECK(est.bracket == Catch::Approx(3.0));
    CHECK(est.theta == Catch::Approx(4.0 / 3.0));

    // Square, opposite corners: two 2-hop routes, term 0.
    Network sq = square();
    FlowField sq_quiet(sq);
    TrafficMatrix sq_tm;
    sq_tm.marginal = 1.0;
    sq_tm.entries.assign(4, std::vector<double>(4, 0.0));
    sq_tm.entries[0][2] = 1.0;
    RouteSetMap sq_rs = all_pairs_routesets(sq, sq_quiet, sq_tm);
    ThroughputEstimate sq_est = estimate_throughput(sq, sq_tm, sq_rs, sq_quiet);
    CHECK(sq_est.per_pair_terms.at({0, 2}) == Catch::Approx(0.0));
}

TEST_CASE("zero demand leaves only the port count") {
    Network net = triangle();
    TrafficMatrix tm;
    tm.marginal = 1.5;
    tm.entries.assign(3, std::vector<double>(3, 0.0));
    ThroughputEstimate est = estimate_throughput(net, tm, {}, FlowField(net));
    CHECK(est.bracket == Catch::Approx(1.0));
    CHECK(est.theta == Catch::Approx(6.0 / 1.5));
}

TEST_CASE("bi-regular accounting matches link counting when every switch hosts servers") {
    Network net = gen_jellyfish(8, 3, 2, 4);
    TrafficMatrix tm = gen_traffic(8, 1.0, 5);
    FlowField quiet(net);
    RouteSetMap rs = all_pairs_routesets(net, quiet, tm);
    ThroughputEstimate uni = estimate_throughput(net, tm, rs, quiet, 0.0, TopoClass::UniRegular);
    ThroughputEstimate bi = estimate_throughput(net, tm, rs, quiet, 0.0, TopoClass::BiRegular);
    CHECK(uni.two_e == Catch::Approx(bi.two_e));
    CHECK(uni.theta == Catch::Approx(bi.theta));
    // Auto-detection: jellyfish is uniform, fat-tree (server-free core) is not.
    ThroughputEstimate autod = estimate_throughput(net, tm, rs, quiet, 0.0, TopoClass::AutoDetect);
    CHECK(autod.theta == Catch::Approx(uni.theta));
}

TEST_CASE("accounting identity between capacity and route sides") {
    Network net = square();
    FlowField field(net);
    field.set(0, 1, Expr::constant(1.0));
    field.set(1, 2, Expr::constant(0.5));
    TrafficMatrix tm = gen_traffic(4, 2.0, 11);
    RouteSetMap rs = all_pairs_routesets(net, field, tm, 0.0, 0.5);
    ThroughputEstimate est = estimate_throughput(net, tm, rs, field);
    TransientAccounting acc = transient_accounting(est);
    CHECK(acc.capacity_side == Catch::Approx(acc.route_side).margin(1e-9));
}

TEST_CASE("throughput failure modes") {
    Network net = triangle();
    TrafficMatrix tm = uniform_traffic(3, 1.0);
    CHECK_THROWS_AS(estimate_throughput(net, tm, {}, FlowField(net)), MissingRouteSet);
    TrafficMatrix wrong = uniform_traffic(4, 1.0);
    CHECK_THROWS_AS(estimate_throughput(net, wrong, {}, FlowField(net)), Error);

    // Many parallel 2-hop routes push a pair term to -2 and the bracket to -1.
    Network theta6(6); // u=0, v=1, common neighbors 2..5
    for (NodeId mid = 2; mid < 6; ++mid) {
        theta6.add_link(0, mid);
        theta6.add_link(mid, 1);
    }
    TrafficMatrix one;
    one.marginal = 1.0;
    one.entries.assign(6, std::vector<double>(6, 0.0));
    one.entries[0][1] = 1.0;
    FlowField quiet(theta6);
    RouteSetMap rs = all_pairs_routesets(theta6, quiet, one);
    REQUIRE(rs.at({0, 1}).routes.size() == 4);
    CHECK_THROWS_AS(estimate_throughput(theta6, one, rs, quiet), NonPositiveBracket);
}

TEST_CASE("concurrent-flow oracle on hand-checked instances") {
    SECTION("single link shared by both directions") {
        Network net(2);
        net.add_link(0, 1);
        TrafficMatrix tm = uniform_traffic(2, 1.0);
        CHECK(lp_oracle_throughput(net, tm, 1.0) == Catch::Approx(0.5));
        CHECK(lp_oracle_throughput(net, tm, 2.0) == Catch::Approx(1.0));
    }
    SECTION("path with transit node") {
        Network net(3);
        net.add_link(0, 1);
        net.add_link(1, 2);
        TrafficMatrix tm;
        tm.marginal = 1.0;
        tm.entries = {{0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
        CHECK(lp_oracle_throughput(net, tm, 1.0) == Catch::Approx(0.5));
    }
    SECTION("uniform triangle saturates every link") {
        TrafficMatrix tm = uniform_traffic(3, 1.0);
        CHECK(lp_oracle_throughput(triangle(), tm, 1.0) == Catch::Approx(1.0));
    }
    SECTION("degenerate demand and capacity") {
        Network net = triangle();
        TrafficMatrix zero;
        zero.marginal = 1.0;
        zero.entries.assign(3, std::vector<double>(3, 0.0));
        CHECK(std::isinf(lp_oracle_throughput(net, zero, 1.0)));
        CHECK_THROWS_AS(lp_oracle_throughput(net, uniform_traffic(3, 1.0), 0.0), LpInfeasible);
    }
}
