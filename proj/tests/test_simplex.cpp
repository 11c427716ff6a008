#include <catch2/catch_amalgamated.hpp>

#include "tdnet/simplex.hpp"

using namespace tdnet;
using Status = SimplexSolver::Status;

TEST_CASE("two-variable optimum at a vertex") {
    // max 3x + 2y s.t. x + y <= 4, x <= 2 -> (2, 2), value 10.
    SimplexSolver lp(2);
    lp.set_objective(0, 3.0);
    lp.set_objective(1, 2.0);
    lp.add_ub({{0, 1.0}, {1, 1.0}}, 4.0);
    lp.add_ub({{0, 1.0}}, 2.0);
    auto r = lp.solve();
    REQUIRE(r.status == Status::Optimal);
    CHECK(r.objective == Catch::Approx(10.0));
    CHECK(r.x[0] == Catch::Approx(2.0));
    CHECK(r.x[1] == Catch::Approx(2.0));
}

TEST_CASE("equality constraints") {
    // max x + y s.t. x + 2y = 4, x <= 3 -> (3, 0.5), value 3.5.
    SimplexSolver lp(2);
    lp.set_objective(0, 1.0);
    lp.set_objective(1, 1.0);
    lp.add_eq({{0, 1.0}, {1, 2.0}}, 4.0);
    lp.add_ub({{0, 1.0}}, 3.0);
    auto r = lp.solve();
    REQUIRE(r.status == Status::Optimal);
    CHECK(r.objective == Catch::Approx(3.5));
    CHECK(r.x[0] == Catch::Approx(3.0));
    CHECK(r.x[1] == Catch::Approx(0.5));
}

TEST_CASE("negative right-hand sides are handled") {
    // max -x s.t. -x <= -2 (x >= 2) -> x = 2, value -2.
    SimplexSolver lp(1);
    lp.set_objective(0, -1.0);
    lp.add_ub({{0, -1.0}}, -2.0);
    auto r = lp.solve();
    REQUIRE(r.status == Status::Optimal);
    CHECK(r.objective == Catch::Approx(-2.0));
    CHECK(r.x[0] == Catch::Approx(2.0));
}

TEST_CASE("infeasible program") {
    // x <= 1 and x >= 2 cannot both hold.
    SimplexSolver lp(1);
    lp.set_objective(0, 1.0);
    lp.add_ub({{0, 1.0}}, 1.0);
    lp.add_ub({{0, -1.0}}, -2.0);
    CHECK(lp.solve().status == Status::Infeasible);

    SimplexSolver eq(2);
    eq.set_objective(0, 1.0);
    eq.add_eq({{0, 1.0}, {1, 1.0}}, 1.0);
    eq.add_eq({{0, 1.0}, {1, 1.0}}, 2.0);
    CHECK(eq.solve().status == Status::Infeasible);
}

TEST_CASE("unbounded program") {
    SimplexSolver lp(2);
    lp.set_objective(0, 1.0);
    lp.add_ub({{1, 1.0}}, 5.0); // x unconstrained above
    CHECK(lp.solve().status == Status::Unbounded);
}

TEST_CASE("redundant and degenerate constraints") {
    // Duplicated equality rows leave a zero row in phase 1.
    SimplexSolver lp(2);
    lp.set_objective(0, 2.0);
    lp.set_objective(1, 1.0);
    lp.add_eq({{0, 1.0}, {1, 1.0}}, 3.0);
    lp.add_eq({{0, 1.0}, {1, 1.0}}, 3.0);
    lp.add_ub({{0, 1.0}}, 2.0);
    auto r = lp.solve();
    REQUIRE(r.status == Status::Optimal);
    CHECK(r.objective == Catch::Approx(5.0));
    CHECK(r.x[0] == Catch::Approx(2.0));
    CHECK(r.x[1] == Catch::Approx(1.0));

    // Degenerate vertex: several tight rows through the optimum.
    SimplexSolver dg(2);
    dg.set_objective(0, 1.0);
    dg.set_objective(1, 1.0);
    dg.add_ub({{0, 1.0}}, 1.0);
    dg.add_ub({{1, 1.0}}, 1.0);
    dg.add_ub({{0, 1.0}, {1, 1.0}}, 2.0);
    auto d = dg.solve();
    REQUIRE(d.status == Status::Optimal);
    CHECK(d.objective == Catch::Approx(2.0));
}

TEST_CASE("small transportation program") {
    // Two sources (supply 3, 2), two sinks (demand 2, 3), unit costs; max
    // -cost recovers the obvious optimal shipping plan value.
    // Vars: x00 x01 x10 x11; costs 1 3 2 1.
    SimplexSolver lp(4);
    lp.set_objective(0, -1.0);
    lp.set_objective(1, -3.0);
    lp.set_objective(2, -2.0);
    lp.set_objective(3, -1.0);
    lp.add_eq({{0, 1.0}, {1, 1.0}}, 3.0);
    lp.add_eq({{2, 1.0}, {3, 1.0}}, 2.0);
    lp.add_eq({{0, 1.0}, {2, 1.0}}, 2.0);
    lp.add_eq({{1, 1.0}, {3, 1.0}}, 3.0);
    auto r = lp.solve();
    REQUIRE(r.status == Status::Optimal);
    // Ship x00=2, x01=1, x11=2: cost 2 + 3 + 2 = 7.
    CHECK(r.objective == Catch::Approx(-7.0));
}
