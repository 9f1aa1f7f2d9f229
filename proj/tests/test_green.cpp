#include <doctest.h>

#include <cmath>
#include <random>

#include "lemnis/domain.hpp"
#include "lemnis/green.hpp"

using namespace lemnis;

namespace {

ReinhardtDomain corner_domain() {
  return require_valid(ReinhardtDomain::polyhedral(
      2, {{{1, 0}, 1.0, Rational(0)}, {{0, 1}, 1.0, Rational(0)}, {{1, 1}, 0.5, std::nullopt}}));
}

CVector cz(double a, double b) { return {Complex(a, 0), Complex(b, 0)}; }

}  // namespace

TEST_CASE("closed-form examples") {
  CHECK(green(unit_polydisk(2), cz(0.5, 0.5)) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
  const auto ball = eval_green(unit_ball(2), std::span<const Complex>(cz(0.6, 0.8)));
  CHECK(std::abs(ball.value) < 1e-15);
  REQUIRE(ball.attained_theta.has_value());
  CHECK((*ball.attained_theta)[0] == doctest::Approx(0.36));
  CHECK((*ball.attained_theta)[1] == doctest::Approx(0.64));
  CHECK(green(corner_domain(), cz(0.8, 0.5)) == doctest::Approx(0.5 * std::log(0.8)).epsilon(1e-14));
  CHECK(green(corner_domain(), cz(0.8, 0.5)) == doctest::Approx(-0.11157).epsilon(1e-4));
}

TEST_CASE("origin gives -inf") {
  const auto g = eval_green(unit_polydisk(2), std::span<const Complex>(cz(0.0, 0.0)));
  CHECK(g.value == kNegInf);
  CHECK_FALSE(g.attained_theta.has_value());
  CHECK(green_plus(unit_ball(2), cz(0, 0)) == 0.0);
}

TEST_CASE("grid oracle examples") {
  CHECK(green_grid_oracle(unit_polydisk(2), cz(0.5, 0.5), 3) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK(std::abs(green_grid_oracle(unit_ball(2), cz(0.6, 0.8), 64)) < 2e-3);
  for (std::size_t d : {2, 4, 16, 256}) {
    CHECK(green_grid_oracle(corner_domain(), cz(0.8, 0.5), d) ==
          doctest::Approx(0.5 * std::log(0.8)).epsilon(1e-12));
  }
}

TEST_CASE("green_plus examples") {
  CHECK(green_plus(unit_polydisk(2), cz(2, 0.1)) == doctest::Approx(std::log(2.0)));
  CHECK(green_plus(unit_ball(2), cz(3, 4)) == doctest::Approx(std::log(5.0)));
  CHECK(green_plus(unit_ball(2), cz(0.1, 0.1)) == 0.0);
}

TEST_CASE("oracle is a lower bound that refines under doubling") {
  auto ball = unit_ball(2);
  auto corner = corner_domain();
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const CVector z = random_unit_sphere(rng, 2);
    for (const auto* d : {&ball, &corner}) {
      const double g = green(*d, z);
      double prev = -1e300;
      for (std::size_t res : {2, 4, 8, 16, 32}) {
        const double o = green_grid_oracle(*d, z, res);
        CHECK(o <= g + 1e-12);
        CHECK(o >= prev - 1e-12);  // nested grids
        prev = o;
      }
      CHECK(g - prev <= 2.0 / 32 * (2.0 + 1.0));
    }
  }
}

TEST_CASE("homogeneity and phase invariance") {
  auto ball = unit_ball(3);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const CVector z = random_unit_sphere(rng, 3);
    const Complex c = std::polar(std::exp(u(rng)), u(rng));
    CVector w = z;
    for (auto& x : w) x *= c;
    CHECK(std::abs(green(ball, w) - green(ball, z) - std::log(std::abs(c))) < 1e-12);
    CVector rot = z;
    rot[0] *= std::polar(1.0, u(rng));
    CHECK(std::abs(green(ball, rot) - green(ball, z)) < 1e-12);
  }
}

TEST_CASE("green is convex in log coordinates and negative inside") {
  auto corner = corner_domain();
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-4.0, 1.0);
  std::uniform_real_distribution<double> l(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const double t = l(rng);
    const std::vector<double> m{t * a[0] + (1 - t) * b[0], t * a[1] + (1 - t) * b[1]};
    CHECK(eval_green(corner, m).value <=
          t * eval_green(corner, a).value + (1 - t) * eval_green(corner, b).value + 1e-12);
    const std::vector<double> mod{std::exp(a[0]), std::exp(a[1])};
    const bool inside = contains(corner, mod).where == Location::inside;
    CHECK(inside == (eval_green(corner, a).value < 0));
  }
}

TEST_CASE("coordinate hyperplanes") {
  // G(0, z2) = log|z2| for the polydisk; the ball gives log|z2| too.
  CHECK(green(unit_polydisk(2), cz(0.0, 0.5)) == doctest::Approx(std::log(0.5)));
  CHECK(green(unit_ball(2), cz(0.0, 0.5)) == doctest::Approx(std::log(0.5)));
  // The corner domain has G(0, z2) = log|z2| as well, the mixed piece is -inf.
  CHECK(green(corner_domain(), cz(0.0, 0.5)) == doctest::Approx(std::log(0.5)));
}

TEST_CASE("closed-form check passes") {
  for (const auto& d : {corner_domain(), unit_ball(2), unit_polydisk(3)}) {
    const auto check = check_green_closed_form(d, 1000, 64, 3);
    CHECK(check.passed);
    CHECK(check.max_excess <= 1e-12);
    CHECK(check.max_gap <= check.tolerance);
  }
}

TEST_CASE("support grid") {
  SupportGrid grid(unit_ball(2), 4);
  CHECK(grid.thetas().size() == 5);
  CHECK(grid.max_abs_support() == doctest::Approx(0.5 * std::log(2.0)));
}
