#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tdnet/flow.hpp"

using namespace tdnet;

namespace {
Network two_nodes() {
    Network net(2);
    net.add_link(0, 1);
    return net;
}
} // namespace

TEST_CASE("table interpolation clamps outside the samples") {
    FlowTable table{{0.0, 1.0, 3.0}, {2.0, 4.0, 0.0}};
    CHECK(table.eval(-1.0) == 2.0);
    CHECK(table.eval(0.5) == Catch::Approx(3.0));
    CHECK(table.eval(2.0) == Catch::Approx(2.0));
    CHECK(table.eval(9.0) == 0.0);
}

TEST_CASE("instantaneous evaluation and absent entries") {
    FlowField field(two_nodes());
    field.set(0, 1, Expr::parse("1 + sin(t)"));
    CHECK(field.eval(0, 1, 0.0) == Catch::Approx(1.0));
    CHECK(field.eval(1, 0, 0.0) == 0.0); // absent flow on an existing link
    CHECK_THROWS_AS(field.eval(0, 2, 0.0), NodeNotFound);
    Network square(4);
    square.add_link(0, 1);
    FlowField f2(square);
    CHECK_THROWS_AS(f2.set(0, 3, 1.0), NotAdjacent);
    CHECK_THROWS_AS(f2.eval(0, 3, 0.0), NotAdjacent);
}

TEST_CASE("windowed mode averages over the interval") {
    FlowField field(two_nodes());
    field.set(0, 1, Expr::parse("t"));
    // Mean of t over [2, 4] is 3.
    CHECK(field.eval(0, 1, 2.0, EvalMode::Windowed, 2.0) == Catch::Approx(3.0).margin(1e-10));
    field.set(0, 1, Expr::parse("1 + sin(t)"));
    double lo = 0.0, hi = 3.14159265358979323846;
    double expect = 1.0 + (std::cos(lo) - std::cos(hi)) / (hi - lo);
    CHECK(field.eval(0, 1, lo, EvalMode::Windowed, hi - lo) == Catch::Approx(expect).margin(1e-8));
}

TEST_CASE("negative and bound violations") {
    FlowField field(two_nodes());
    field.set(0, 1, Expr::parse("sin(t)"));
    CHECK_THROWS_AS(field.eval(0, 1, 4.0), FlowNegative);
    FlowField bounded(two_nodes(), 2.0);
    bounded.set(0, 1, Expr::parse("3"));
    CHECK_THROWS_AS(bounded.eval(0, 1, 0.0), FlowUnbounded);
}

TEST_CASE("rate of change is analytic only") {
    FlowField field(two_nodes());
    field.set(0, 1, Expr::parse("2 + sin(t)"));
    CHECK(field.eval_rate_of_change(0, 1, 0.0) == Catch::Approx(1.0));
    CHECK(field.eval_rate_of_change(1, 0, 0.0) == 0.0);
    field.set(1, 0, FlowFn{FlowTable{{0.0, 1.0}, {1.0, 2.0}}});
    CHECK_THROWS_AS(field.eval_rate_of_change(1, 0, 0.5), NonDifferentiableFlow);
}
