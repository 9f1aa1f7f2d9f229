#include <doctest.h>

#include <random>

#include "lemnis/error.hpp"
#include "lemnis/simplex.hpp"

using namespace lemnis;

namespace {

LinearProgram box_lp() {
  // max x + y  s.t.  x <= 1, y <= 2, x + y <= 5/2
  LinearProgram lp;
  lp.objective = {1, 1};
  lp.constraints = {{1, 0}, {0, 1}, {1, 1}};
  lp.rhs = {1, 2, Rational(5, 2)};
  return lp;
}

}  // namespace

TEST_CASE("exact LP optimum") {
  const auto res = solve_lp_exact(box_lp());
  REQUIRE(res.status == LPStatus::optimal);
  CHECK(*res.value == Rational(5, 2));
}

TEST_CASE("support LP of a polydisk is zero") {
  LinearProgram lp;
  lp.objective = {Rational(1, 2), Rational(1, 2)};
  lp.constraints = {{1, 0}, {0, 1}};
  lp.rhs = {0, 0};
  const auto res = solve_lp_exact(lp);
  REQUIRE(res.status == LPStatus::optimal);
  CHECK(*res.value == 0);
}

TEST_CASE("unbounded LP returns a ray") {
  // {x1 <= 0, x1 + x2 <= 0}: maximize x2 is unbounded along (-1, 1).
  LinearProgram lp;
  lp.objective = {0, 1};
  lp.constraints = {{1, 0}, {1, 1}};
  lp.rhs = {0, 0};
  const auto res = solve_lp_exact(lp);
  REQUIRE(res.status == LPStatus::unbounded);
  REQUIRE(res.ray.has_value());
  const auto& d = *res.ray;
  CHECK(d[1] > 0);
  CHECK(d[0] <= 0);
  CHECK(d[0] + d[1] <= 0);
}

TEST_CASE("infeasible LP") {
  LinearProgram lp;
  lp.objective = {1};
  lp.constraints = {{1}, {-1}};
  lp.rhs = {-1, -1};  // x <= -1 and x >= 1
  CHECK(solve_lp_exact(lp).status == LPStatus::infeasible);
  CHECK(solve_lp_float(lp).status == LPStatus::infeasible);
}

TEST_CASE("malformed LP throws") {
  LinearProgram lp;
  lp.objective = {1, 1};
  lp.constraints = {{1}};
  lp.rhs = {1};
  CHECK_THROWS_AS(solve_lp_exact(lp), InputError);
}

TEST_CASE("float and exact solvers agree on random bounded LPs") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(-9, 9);
  std::uniform_int_distribution<int> pos(1, 9);
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 3;
    LinearProgram lp;
    for (std::size_t j = 0; j < n; ++j) lp.objective.emplace_back(coef(rng));
    // Box rows keep the problem bounded.
    for (std::size_t j = 0; j < n; ++j) {
      RationalVector up(n, 0), down(n, 0);
      up[j] = 1;
      down[j] = -1;
      lp.constraints.push_back(up);
      lp.rhs.emplace_back(pos(rng));
      lp.constraints.push_back(down);
      lp.rhs.emplace_back(pos(rng));
    }
    for (int extra = 0; extra < 3; ++extra) {
      RationalVector row;
      for (std::size_t j = 0; j < n; ++j) row.emplace_back(coef(rng));
      lp.constraints.push_back(row);
      lp.rhs.emplace_back(Rational(coef(rng), pos(rng)));
    }
    const auto exact = solve_lp_exact(lp);
    const auto approx = solve_lp_float(lp);
    if (approx.numerically_suspect) continue;
    REQUIRE(exact.status == approx.status);
    if (exact.status == LPStatus::optimal) {
      CHECK(std::abs(to_double(*exact.value) - *approx.value) < 1e-9);
      ++compared;
    }
  }
  CHECK(compared > 50);
}

TEST_CASE("weak duality holds on random LPs") {
  // For an optimum x* and any feasible x, c.x <= c.x*.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    LinearProgram lp = box_lp();
    lp.objective = {coef(rng), coef(rng)};
    lp.constraints.push_back({-1, 0});
    lp.rhs.emplace_back(4);
    lp.constraints.push_back({0, -1});
    lp.rhs.emplace_back(4);
    const auto res = solve_lp_exact(lp);
    REQUIRE(res.status == LPStatus::optimal);
    for (int a = -4; a <= 1; ++a) {
      for (int b = -4; b <= 2; ++b) {
        const Rational x(a), y(b);
        if (x <= 1 && y <= 2 && x + y <= Rational(5, 2)) {
          CHECK(lp.objective[0] * x + lp.objective[1] * y <= *res.value);
        }
      }
    }
    // The optimizer is feasible and attains the value.
    const auto& opt = *res.optimizer;
    CHECK(opt[0] <= 1);
    CHECK(opt[1] <= 2);
    CHECK(opt[0] + opt[1] <= Rational(5, 2));
    CHECK(lp.objective[0] * opt[0] + lp.objective[1] * opt[1] == *res.value);
  }
}

TEST_CASE("cone membership") {
  CHECK(cone_membership({{1, 0}, {0, 1}, {1, 1}}, {1, 0}));
  CHECK_FALSE(cone_membership({{1, 0}, {1, 1}}, {0, 1}));
  CHECK(cone_membership({{2, 1}}, {2, 1}));
  CHECK(cone_membership({{1, 0}, {1, 1}}, {3, 1}));
  CHECK(cone_membership({}, {0, 0}));
  CHECK_FALSE(cone_membership({}, {1, 0}));
  CHECK_THROWS_AS(cone_membership({{1, 0}}, {1, 0, 0}), InputError);
}
