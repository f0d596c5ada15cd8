#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include "doctest.h"
#include "helix/grid.hpp"
#include "oracles.hpp"

using namespace helix;
using std::numbers::pi;

TEST_CASE("build_grid staggering and weights") {
  auto g = build_grid(8, 16);
  CHECK(g->r(0) == doctest::Approx(1.0 / 16).epsilon(1e-15));
  double s = 0;
  for (int j = 0; j < g->n_r(); ++j) s += g->weight(j) * g->n_theta();
  CHECK(std::abs(s - pi) < 1e-10 * pi);
  for (int j = 1; j < g->n_r(); ++j) CHECK(g->r(j) > g->r(j - 1));
  CHECK(g->r(g->n_r() - 1) < 1.0);

  auto big = build_grid(64, 128);
  CHECK(std::abs(l2_inner(sample(big, [](double, double) { return 1.0; }),
                          sample(big, [](double, double) { return 1.0; })) - pi) < 1e-10 * pi);
}

TEST_CASE("build_grid rejects bad sizes") {
  CHECK_THROWS_AS(build_grid(8, 15), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(4, 16), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(8, 6), std::invalid_argument);
}

TEST_CASE("l2_inner examples") {
  auto g = build_grid(64, 128);
  auto one = sample(g, [](double, double) { return 1.0; });
  auto y1 = sample(g, [](double a, double) { return a; });
  auto r2 = sample(g, [](double a, double b) { return a * a + b * b; });
  CHECK(std::abs(l2_inner(one, one) - pi) < 1e-10);
  CHECK(std::abs(l2_inner(one, y1)) < 1e-12);
  CHECK(std::abs(l2_inner(r2, r2) - pi / 3) < 1e-3);
  CHECK(l2_inner(y1, r2) == doctest::Approx(l2_inner(r2, y1)).epsilon(1e-14));
  auto other = build_grid(64, 128);
  CHECK_THROWS_AS(l2_inner(one, ScalarField(other)), std::invalid_argument);
}

TEST_CASE("lp_norm examples") {
  auto g = build_grid(64, 128);
  auto one = sample(g, [](double, double) { return 1.0; });
  auto r2 = sample(g, [](double a, double b) { return a * a + b * b; });
  CHECK(std::abs(lp_norm(one, 2) - std::sqrt(pi)) < 1e-10);
  CHECK(lp_norm(one, INFINITY) == 1.0);
  CHECK(std::abs(lp_norm(r2, 4) - std::pow(pi / 5, 0.25)) < 1e-3);
  CHECK_THROWS_AS(lp_norm(one, 0.5), std::invalid_argument);
}

TEST_CASE("quadrature order for r^(2k)") {
  // integral of r^(2k) over the disk is 2 pi / (2k + 2)
  for (int k = 1; k <= 2; ++k) {
    double err[3];
    int i = 0;
    for (int n : {32, 64, 128}) {
      auto g = build_grid(n, 16);
      auto f = sample(g, [k](double a, double b) { return std::pow(a * a + b * b, k); });
      auto one = sample(g, [](double, double) { return 1.0; });
      err[i++] = std::abs(l2_inner(f, one) - 2 * pi / (2 * k + 2));
    }
    CHECK(std::log2(err[0] / err[1]) >= 1.9);
    CHECK(std::log2(err[1] / err[2]) >= 1.9);
  }
}

TEST_CASE("azimuthal transform") {
  auto g = build_grid(16, 32);
  auto c = sample(g, [](double a, double b) { return a / std::hypot(a, b); }).to_modes();
  for (int j = 0; j < g->n_r(); ++j)
    for (int m = 0; m < g->n_modes(); ++m) {
      const double expect = (m == 1) ? 0.5 : 0.0;
      CHECK(std::abs(c.mode(j, m) - Complex(expect)) < 1e-14);
    }
  CHECK(std::abs(std::as_const(c).mode(3, -1) - Complex(0.5)) < 1e-14);

  auto one = azimuthal_transform(sample(g, [](double, double) { return 1.0; }), Direction::forward);
  for (int j = 0; j < g->n_r(); ++j) {
    CHECK(std::abs(one.mode(j, 0) - Complex(1.0)) < 1e-14);
    for (int m = 1; m < g->n_modes(); ++m) CHECK(std::abs(one.mode(j, m)) < 1e-14);
  }

  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  ScalarField f(g);
  for (auto& v : f.values()) v = nd(rng);
  auto fm = azimuthal_transform(f, Direction::forward);
  for (int j = 0; j < g->n_r(); ++j) {
    CHECK(std::abs(fm.mode(j, 0).imag()) < 1e-15);
    CHECK(std::abs(fm.mode(j, g->n_theta() / 2).imag()) < 1e-15);
  }
  auto back = azimuthal_transform(fm, Direction::inverse);
  CHECK(oracle::max_diff(back, f) <= 1e-12 * oracle::max_abs(f));

  CHECK_THROWS_AS(azimuthal_transform(fm, Direction::forward), std::logic_error);
  CHECK_THROWS_AS(azimuthal_transform(f, Direction::inverse), std::logic_error);
}

TEST_CASE("l2 positive definite") {
  auto g = build_grid(16, 16);
  ScalarField z(g);
  CHECK(l2_inner(z, z) == 0.0);
  z(3, 4) = 1e-3;
  CHECK(l2_inner(z, z) > 0.0);
}
