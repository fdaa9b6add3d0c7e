#include <doctest.h>

#include "test_helpers.hpp"

using namespace hdgmm;

TEST_CASE("lp trivial bound") {
  LpProblem lp;
  lp.c = Vector::Ones(1);
  lp.G = Matrix::Ones(1, 1);
  lp.h = Vector::Constant(1, 5.0);
  const auto sol = lp_solve(lp);
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK(sol.x(0) == doctest::Approx(0.0));
}

TEST_CASE("lp simplex face") {
  LpProblem lp;
  lp.c = -Vector::Ones(2);
  lp.G = Matrix::Ones(1, 2);
  lp.h = Vector::Ones(1);
  const auto sol = lp_solve(lp);
  CHECK(sol.objective == doctest::Approx(-1.0));
  CHECK(sol.x(0) + sol.x(1) == doctest::Approx(1.0));
}

TEST_CASE("lp infeasible and unbounded") {
  LpProblem lp;
  lp.c = Vector::Ones(1);
  lp.G = Matrix::Ones(1, 1);
  lp.h = Vector::Constant(1, -1.0);  // x <= -1 with x >= 0
  CHECK_THROWS_AS(lp_solve(lp), LpInfeasible);

  lp.c = -Vector::Ones(1);
  lp.G = -Matrix::Ones(1, 1);
  lp.h = Vector::Ones(1);  // -x <= 1, minimize -x
  CHECK_THROWS_AS(lp_solve(lp), LpUnbounded);
}

TEST_CASE("lp equality-like constraints via negative rhs") {
  // x1 >= 2 (as -x1 <= -2), x1 <= 3, minimize x1.
  LpProblem lp;
  lp.c = Vector::Ones(1);
  lp.G.resize(2, 1);
  lp.G << -1, 1;
  lp.h.resize(2);
  lp.h << -2, 3;
  const auto sol = lp_solve(lp);
  CHECK(sol.objective == doctest::Approx(2.0));
}

TEST_CASE("lp matches vertex-enumeration oracle on random problems") {
  Rng rng(2024);
  int solved = 0;
  while (solved < 20) {
    const Index d = 2 + (rng.next_u64() % 3);  // 2..4
    const Index m = 3 + (rng.next_u64() % 4);  // 3..6
    LpProblem lp;
    lp.c = rng.normal_vector(d);
    lp.G = testing::random_matrix(rng, m, d);
    lp.h = rng.normal_vector(m).cwiseAbs();  // origin feasible, LP feasible
    // Bound the feasible set so the problem cannot be unbounded.
    lp.G.conservativeResize(m + 1, d);
    lp.G.row(m).setOnes();
    lp.h.conservativeResize(m + 1);
    lp.h(m) = 10.0;

    const auto oracle = testing::lp_vertex_oracle(lp);
    REQUIRE(oracle.has_value());
    const auto sol = lp_solve(lp);
    CHECK(std::abs(sol.objective - *oracle) <= 1e-8);
    ++solved;
  }
}
