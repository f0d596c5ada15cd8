#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helix/operators.hpp"
#include "oracles.hpp"

using namespace helix;
using std::numbers::pi;

namespace {

double r2(double a, double b) { return a * a + b * b; }

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / x.size();
    my += y[i] / y.size();
  }
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("SigmaParam") {
  auto p = SigmaParam::planar();
  CHECK(p.is_planar());
  CHECK(p.coupling() == 0.0);
  CHECK(p.coupling_sq() == 0.0);
  auto s = SigmaParam::finite(2 * pi);
  CHECK(s.alpha() == doctest::Approx(1.0));
  CHECK(s.coupling() == doctest::Approx(1.0));
  CHECK_THROWS(SigmaParam::finite(0.5));
  CHECK_THROWS(p.alpha());
}

TEST_CASE("apply_E examples") {
  auto g = build_grid(32, 64);
  auto f = sample(g, r2);
  CHECK(oracle::max_abs(apply_E(f)) < 1e-13);
  auto e = apply_E(sample(g, [](double a, double) { return a; }));
  CHECK(oracle::max_diff(e, sample(g, [](double, double b) { return -b; })) < 1e-13);
  auto e2 = apply_E(sample(g, [](double a, double b) { return (1 - r2(a, b)) * a; }));
  CHECK(oracle::max_diff(e2, sample(g, [](double a, double b) { return -(1 - r2(a, b)) * b; })) < 1e-13);
}

TEST_CASE("apply_E matches a Cartesian stencil and is antisymmetric") {
  auto g = build_grid(32, 64);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 5; ++t) {
    auto fa = oracle::random_h10_field(rng);
    auto fb = oracle::random_h10_field(rng);
    auto f = sample(g, fa);
    auto h = sample(g, fb);
    auto ref = sample(g, [&](double a, double b) { return oracle::E(fa, a, b); });
    CHECK(oracle::max_diff(apply_E(f), ref) < 1e-6 * (1 + oracle::max_abs(ref)));
    const double lhs = l2_inner(apply_E(f), h);
    const double rhs = -l2_inner(f, apply_E(h));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + l2_norm(f) * l2_norm(h)));
  }
  // also on unstructured noise
  ScalarField f(g), h(g);
  std::normal_distribution<double> nd;
  for (auto& v : f.values()) v = nd(rng);
  for (auto& v : h.values()) v = nd(rng);
  CHECK(std::abs(l2_inner(apply_E(f), h) + l2_inner(f, apply_E(h))) <= 1e-12 * l2_norm(f) * l2_norm(h) * 64);
}

TEST_CASE("gradient examples") {
  auto g = build_grid(32, 64);
  auto gy = gradient(sample(g, [](double a, double) { return a; }));
  CHECK(oracle::max_diff(gy.w1, sample(g, [](double, double) { return 1.0; })) < 1e-12);
  CHECK(oracle::max_abs(gy.w2) < 1e-12);
  CHECK(oracle::max_abs(gy.w3) == 0.0);
  auto gq = gradient(sample(g, [](double a, double b) { return 0.5 * r2(a, b); }));
  CHECK(oracle::max_diff(gq.w1, sample(g, [](double a, double) { return a; })) < 1e-10);
  CHECK(oracle::max_diff(gq.w2, sample(g, [](double, double b) { return b; })) < 1e-10);
  auto gc = gradient(sample(g, [](double, double) { return 3.0; }));
  CHECK(oracle::max_abs(gc.w1) < 1e-12);
  CHECK(oracle::max_abs(gc.w2) < 1e-12);
}

TEST_CASE("gradient converges against a Cartesian stencil") {
  std::mt19937_64 rng(5);
  auto fa = oracle::random_h10_field(rng);
  double err[2];
  int i = 0;
  for (int n : {32, 64}) {
    auto g = build_grid(n, 64);
    auto gr = gradient(sample(g, fa));
    auto r1 = sample(g, [&](double a, double b) { return oracle::d1(fa, a, b); });
    auto r2f = sample(g, [&](double a, double b) { return oracle::d2(fa, a, b); });
    err[i++] = std::max(oracle::max_diff(gr.w1, r1), oracle::max_diff(gr.w2, r2f));
  }
  CHECK(err[1] < 1e-2);
  CHECK(std::log2(err[0] / err[1]) > 1.8);
}

TEST_CASE("divergence_h examples") {
  auto g = build_grid(32, 64);
  auto y1 = sample(g, [](double a, double) { return a; });
  auto y2 = sample(g, [](double, double b) { return b; });
  ScalarField z(g);
  auto d = divergence_h(VectorField3(y1, y2, sample(g, r2)));
  CHECK(oracle::max_diff(d, sample(g, [](double, double) { return 2.0; })) < 1e-12);
  CHECK(oracle::max_abs(divergence_h(VectorField3(-1.0 * y2, y1, z))) < 1e-12);
  // perp gradient of (1 - r^2)^2
  auto p1 = sample(g, [](double a, double b) { return 4 * (1 - r2(a, b)) * b; });
  auto p2 = sample(g, [](double a, double b) { return -4 * (1 - r2(a, b)) * a; });
  CHECK(oracle::max_abs(divergence_h(VectorField3(p1, p2, z))) < 1e-10);
  // non-swirl divergence-free field: perp gradient of (1 - r^2)^2 y1
  auto phi = [](double a, double b) { return std::pow(1 - r2(a, b), 2) * a; };
  double err[2];
  int i = 0;
  for (int n : {32, 64}) {
    auto gg = build_grid(n, 64);
    auto v1 = sample(gg, [&](double a, double b) { return -oracle::d2(phi, a, b); });
    auto v2 = sample(gg, [&](double a, double b) { return oracle::d1(phi, a, b); });
    err[i++] = l2_norm(divergence_h(VectorField3(v1, v2, ScalarField(gg)), Closure::vanishing));
  }
  CHECK(err[1] < 1e-2);
  CHECK(std::log2(err[0] / err[1]) > 1.5);
}

TEST_CASE("laplacian examples") {
  auto g = build_grid(32, 64);
  auto l = laplacian(sample(g, [](double a, double b) { return 1 - r2(a, b); }));
  CHECK(oracle::max_diff(l, sample(g, [](double, double) { return -4.0; })) < 1e-10);
  CHECK(oracle::max_abs(laplacian(sample(g, [](double, double) { return 2.0; }))) < 1e-10);
  auto f = [](double a, double b) { return r2(a, b) * a; };
  double err[3];
  int i = 0;
  for (int n : {32, 64, 128}) {
    auto gg = build_grid(n, 32);
    // the pole and wall rows are locally first order
    err[i++] = oracle::max_diff(laplacian(sample(gg, f)), sample(gg, [](double a, double) { return 8 * a; }), 0.9, 0.25);
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
  CHECK(std::log2(err[1] / err[2]) >= 1.9);
}

TEST_CASE("constraint_residual examples") {
  auto g = build_grid(32, 64);
  auto sp = SigmaParam::finite(4.0);
  ScalarField z(g);
  auto y1 = sample(g, [](double a, double) { return a; });
  auto res = constraint_residual(VectorField3(y1, z, z), sp, Closure::extrapolated);
  CHECK(oracle::max_diff(res, sample(g, [](double, double) { return 1.0; })) < 1e-12);
  auto p1 = sample(g, [](double a, double b) { return 4 * (1 - r2(a, b)) * b; });
  auto p2 = sample(g, [](double a, double b) { return -4 * (1 - r2(a, b)) * a; });
  CHECK(oracle::max_abs(constraint_residual(VectorField3(p1, p2, z), sp)) < 1e-10);
  // E term enters with 2 pi / sigma
  auto w3 = sample(g, [](double a, double) { return a; });
  auto r3 = constraint_residual(VectorField3(z, z, w3), sp);
  CHECK(oracle::max_diff(r3, sample(g, [&](double, double b) { return -sp.coupling() * b; })) < 1e-12);
}

TEST_CASE("pressure poisson: dirichlet examples") {
  auto g = build_grid(32, 64);
  auto four = sample(g, [](double, double) { return 4.0; });
  for (auto sp : {SigmaParam::planar(), SigmaParam::finite(1.0), SigmaParam::finite(8.0)}) {
    auto q = solve_pressure_poisson(four, sp, Closure::vanishing);
    CHECK(oracle::max_diff(q, sample(g, [](double a, double b) { return 1 - r2(a, b); })) < 1e-10);
  }
  CHECK(oracle::max_abs(solve_pressure_poisson(ScalarField(g), SigmaParam::finite(2), Closure::vanishing)) == 0.0);
  CHECK_THROWS_AS(solve_pressure_poisson(four, SigmaParam::planar(), Closure::extrapolated), std::invalid_argument);
}

TEST_CASE("pressure poisson: manufactured solution order") {
  for (auto sp : {SigmaParam::planar(), SigmaParam::finite(2.0)}) {
    const double c2 = sp.coupling_sq();
    auto psi = [](double a, double b) { return std::pow(1 - r2(a, b), 2) * a; };
    auto rhs = [c2](double a, double b) {
      const double r = std::sqrt(r2(a, b));
      const double ct = r > 0 ? a / r : 1.0;
      return (16 * r - 24 * r * r * r) * ct + c2 * r * std::pow(1 - r * r, 2) * ct;
    };
    std::vector<double> err, res;
    for (int n : {32, 64, 128}) {
      auto g = build_grid(n, 32);
      auto q = solve_pressure_poisson(sample(g, rhs), sp, Closure::vanishing);
      err.push_back(oracle::max_diff(q, sample(g, psi)));
      res.push_back(oracle::max_diff(apply_pressure_operator(sample(g, psi), sp), sample(g, rhs), 0.9, 0.25));
      CHECK(oracle::max_diff(apply_pressure_operator(q, sp), sample(g, rhs)) < 1e-9);
    }
    CHECK(std::log2(err[0] / err[1]) >= 1.9);
    CHECK(std::log2(err[1] / err[2]) >= 1.9);
    CHECK(std::log2(res[0] / res[1]) >= 1.9);
    CHECK(std::log2(res[1] / res[2]) >= 1.9);
  }
}

TEST_CASE("pressure poisson: neumann") {
  auto g = build_grid(64, 32);
  auto sp = SigmaParam::finite(3.0);
  auto rhs = sample(g, [](double a, double b) { return 8 * r2(a, b) - 4; });
  rhs.axpy(-mean(rhs), sample(g, [](double, double) { return 1.0; }));
  CHECK(std::abs(mean(rhs)) < 1e-12);
  auto q = solve_pressure_poisson(rhs, sp, Closure::neumann);
  CHECK(std::abs(mean(q)) < 1e-12);
  auto exact = sample(g, [](double a, double b) { const double s = r2(a, b); return s - s * s / 2 - 1.0 / 3; });
  CHECK(oracle::max_diff(q, exact) < 2e-3);
  CHECK_THROWS_AS(solve_pressure_poisson(sample(g, [](double, double) { return 1.0; }), sp, Closure::neumann),
                  std::invalid_argument);
}

TEST_CASE("metric matrices") {
  auto sp = SigmaParam::finite(2 * pi * 10);  // alpha = 10
  CHECK((metric_K(0, 0, sp) - Eigen::Matrix2d::Identity()).norm() < 1e-15);
  CHECK((metric_H(0, 0, sp) - Eigen::Matrix2d::Identity()).norm() < 1e-15);
  double worst = 0;
  for (int i = 0; i < 360; ++i) {
    const double t = 2 * pi * i / 360;
    Eigen::Matrix2d F = metric_K(std::cos(t), std::sin(t), sp) - Eigen::Matrix2d::Identity();
    worst = std::max(worst, F.jacobiSvd().singularValues()(0));
  }
  CHECK(std::abs(worst - 1.0 / 101) < 1e-10);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (double sigma : {1.0, 4.0, 50.0}) {
    auto s = SigmaParam::finite(sigma);
    const double a2 = s.alpha() * s.alpha();
    for (int i = 0; i < 100; ++i) {
      const double r = std::sqrt(u(rng)), t = 2 * pi * u(rng);
      const double y1 = r * std::cos(t), y2 = r * std::sin(t);
      Eigen::Matrix2d K = metric_K(y1, y2, s);
      CHECK((metric_H(y1, y2, s) * K - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(K);
      CHECK(es.eigenvalues()(0) >= a2 / (a2 + 1) - 1e-14);
      CHECK(es.eigenvalues()(1) <= 1 + 1e-14);
      CHECK((K - Eigen::Matrix2d::Identity()).jacobiSvd().singularValues()(0) <= 1 / (a2 + 1) + 1e-14);
    }
  }
  auto g = build_grid(16, 16);
  auto M = eval_metric(g, SigmaParam::finite(4.0));
  for (size_t i = 0; i < M.K.size(); ++i) CHECK((M.H[i] * M.K[i] - Eigen::Matrix2d::Identity()).norm() < 1e-12);
  auto P = eval_metric(g, SigmaParam::planar());
  CHECK((P.F[5]).norm() == 0.0);
}

TEST_CASE("sup norm of K - I decays like sigma^-2") {
  auto sup_F = [](double sigma) {
    auto s = SigmaParam::finite(sigma);
    return (metric_K(1.0, 0.0, s) - Eigen::Matrix2d::Identity()).jacobiSvd().singularValues()(0);
  };
  std::vector<double> x, y;
  for (double s : {32.0, 64.0, 128.0, 256.0}) {
    x.push_back(std::log(s));
    y.push_back(std::log(sup_F(s)));
  }
  CHECK(std::abs(slope(x, y) + 2) < 0.05);
  // over {4..256} the exact value 1/(alpha^2+1) is still pre-asymptotic
  std::vector<double> X, Y, Yref;
  for (double s = 4; s <= 256; s *= 2) {
    const double a = s / (2 * pi);
    X.push_back(std::log(s));
    Y.push_back(std::log(sup_F(s)));
    Yref.push_back(-std::log(a * a + 1));
  }
  CHECK(slope(X, Y) == doctest::Approx(slope(X, Yref)).epsilon(1e-10));
  CHECK(slope(X, Y) < -1.7);
}

TEST_CASE("apply_LH examples") {
  auto g = build_grid(32, 64);
  auto psi = sample(g, [](double a, double b) { return 1 - r2(a, b); });
  for (auto sp : {SigmaParam::planar(), SigmaParam::finite(1.0), SigmaParam::finite(10.0)})
    CHECK(oracle::max_diff(apply_LH(psi, sp), sample(g, [](double, double) { return -4.0; })) < 1e-10);
  std::mt19937_64 rng(2);
  auto f = sample(g, oracle::random_h10_field(rng));
  CHECK(oracle::max_diff(apply_LH(f, SigmaParam::planar()), laplacian(f, Closure::vanishing)) < 1e-12 * (1 + oracle::max_abs(laplacian(f, Closure::vanishing))));
}

TEST_CASE("apply_LH agrees with a Cartesian div(K grad) stencil") {
  std::mt19937_64 rng(17);
  auto sp = SigmaParam::finite(4.0);
  const double a2 = sp.alpha() * sp.alpha();
  for (int t = 0; t < 3; ++t) {
    auto fa = oracle::random_h10_field(rng);
    double err[2];
    int i = 0;
    for (int n : {32, 64}) {
      auto g = build_grid(n, 64);
      auto ref = sample(g, [&](double a, double b) { return oracle::div_K_grad(fa, a2, a, b); });
      err[i++] = oracle::max_diff(apply_LH(sample(g, fa), sp), ref, 0.9, 0.25);
    }
    CHECK(err[1] < 5e-2);
    CHECK(std::log2(err[0] / err[1]) > 1.5);
  }
}

TEST_CASE("solve_LH") {
  auto g = build_grid(32, 64);
  auto m4 = sample(g, [](double, double) { return -4.0; });
  for (auto sp : {SigmaParam::planar(), SigmaParam::finite(1.0), SigmaParam::finite(7.0)})
    CHECK(oracle::max_diff(solve_LH(m4, sp), sample(g, [](double a, double b) { return 1 - r2(a, b); })) < 1e-10);
  CHECK(oracle::max_abs(solve_LH(ScalarField(g), SigmaParam::finite(3))) == 0.0);

  std::mt19937_64 rng(4);
  auto v = sample(g, oracle::random_h10_field(rng));
  auto a = solve_LH(v, SigmaParam::finite(1e6));
  auto b = solve_LH(v, SigmaParam::planar());
  CHECK(l2_norm(a - b) <= 1e-9);
  CHECK(oracle::max_diff(apply_LH(a, SigmaParam::finite(1e6)), v) < 1e-9 * (1 + oracle::max_abs(v)));
}

TEST_CASE("solve_LH manufactured solution order") {
  auto sp = SigmaParam::finite(2.0);
  const double a2 = sp.alpha() * sp.alpha();
  auto psi = [](double a, double b) { return std::pow(1 - r2(a, b), 2) * a; };
  // L_H psi = Delta psi - m^2 / (a2 + r^2) * (-1) psi for m = 1
  auto rhs = [a2, psi](double a, double b) {
    const double r = std::sqrt(r2(a, b));
    const double ct = a / r;
    return (24 * r * r * r - 16 * r) * ct + psi(a, b) / (a2 + r * r);
  };
  std::vector<double> err;
  for (int n : {32, 64, 128}) {
    auto g = build_grid(n, 32);
    err.push_back(oracle::max_diff(solve_LH(sample(g, rhs), sp), sample(g, psi)));
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
  CHECK(std::log2(err[1] / err[2]) >= 1.9);
}
