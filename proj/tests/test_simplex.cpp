#include "doctest.h"

#include "sectorlab/simplex.hpp"

using namespace sectorlab;

TEST_CASE("simplex solves a basic problem") {
  // min -x - 2y  s.t.  x + y + s1 = 4, x + 3y + s2 = 6, all >= 0.
  RealMatrix a(2, 4);
  a << 1, 1, 1, 0, 1, 3, 0, 1;
  RealVector b(2);
  b << 4, 6;
  RealVector c(4);
  c << -1, -2, 0, 0;
  LpResult r = solve_lp(a, b, c, 1e-9);
  REQUIRE(r.status == LpResult::Status::optimal);
  // Optimum at (3, 1): objective -5.
  CHECK(r.objective == doctest::Approx(-5.0));
  CHECK(r.x(0) == doctest::Approx(3.0));
  CHECK(r.x(1) == doctest::Approx(1.0));
}

TEST_CASE("simplex detects infeasibility") {
  // x1 + x2 = -1 with x >= 0 has no solution.
  RealMatrix a(1, 2);
  a << 1, 1;
  RealVector b(1);
  b << -1;
  RealVector c = RealVector::Zero(2);
  CHECK(solve_lp(a, b, c, 1e-9).status == LpResult::Status::infeasible);
}

TEST_CASE("simplex detects unboundedness with a ray") {
  // min -x  s.t.  x - y = 0: x can grow forever.
  RealMatrix a(1, 2);
  a << 1, -1;
  RealVector b(1);
  b << 0;
  RealVector c(2);
  c << -1, 0;
  LpResult r = solve_lp(a, b, c, 1e-9);
  REQUIRE(r.status == LpResult::Status::unbounded);
  // The ray keeps the constraint and decreases the objective.
  CHECK(std::abs(a.row(0).dot(r.ray)) < 1e-9);
  CHECK(c.dot(r.ray) < 0);
}

TEST_CASE("feasible point finds a probability vector matching moments") {
  // weights over 3 atoms with mean 0.5 on values (0, 0.5, 1).
  RealMatrix a(2, 3);
  a << 1, 1, 1, 0, 0.5, 1;
  RealVector b(2);
  b << 1, 0.5;
  auto x = lp_feasible_point(a, b, 1e-9);
  REQUIRE(x.has_value());
  CHECK((a * *x - b).norm() < 1e-9);
  for (int i = 0; i < 3; ++i) CHECK((*x)(i) >= -1e-12);
}

TEST_CASE("redundant constraints are tolerated") {
  RealMatrix a(3, 2);
  a << 1, 1, 2, 2, 1, 0;
  RealVector b(3);
  b << 1, 2, 0.25;
  RealVector c(2);
  c << 1, 0;
  LpResult r = solve_lp(a, b, c, 1e-9);
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.x(0) == doctest::Approx(0.25));
  CHECK(r.x(1) == doctest::Approx(0.75));
}

TEST_CASE("degenerate problems terminate (Bland's rule)") {
  // Classic cycling-prone instance; Bland's rule must terminate.
  RealMatrix a(3, 7);
  a << 0.25, -8, -1, 9, 1, 0, 0,
       0.5, -12, -0.5, 3, 0, 1, 0,
       0, 0, 1, 0, 0, 0, 1;
  RealVector b(3);
  b << 0, 0, 1;
  RealVector c(7);
  c << -0.75, 150, -0.02, 6, 0, 0, 0;
  LpResult r = solve_lp(a, b, c, 1e-9);
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.objective == doctest::Approx(-0.77));
}
