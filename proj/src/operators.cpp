#include "helix/operators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "helix/spectral.hpp"

namespace helix {

SigmaParam SigmaParam::finite(double sigma) {
  if (!(sigma >= 1.0) || !std::isfinite(sigma))
    throw std::invalid_argument("SigmaParam: sigma must be finite and >= 1");
  SigmaParam sp;
  sp.planar_ = false;
  sp.sigma_ = sigma;
  sp.alpha_ = sigma / (2.0 * std::numbers::pi);
  return sp;
}

double SigmaParam::sigma() const {
  if (planar_) throw std::logic_error("SigmaParam: planar has no finite sigma");
  return sigma_;
}

double SigmaParam::alpha() const {
  if (planar_) throw std::logic_error("SigmaParam: planar has no finite alpha");
  return alpha_;
}

std::string SigmaParam::label() const {
  if (planar_) return "planar";
  std::ostringstream os;
  os.precision(17);
  os << sigma_;
  return os.str();
}

// ---- generic operators

ScalarField apply_E(const ScalarField& f) { return spectral::dtheta(f.to_modes()).to_physical(); }

VectorField3 gradient(const ScalarField& f, Closure closure) {
  const GridPtr& gp = f.grid_ptr();
  const DiskGrid& g = *gp;
  const ScalarField fm = f.to_modes();
  ScalarField gr(gp, Representation::modes), gt(gp, Representation::modes);
  const int n = g.n_r();
  std::vector<Complex> col(n), out(n);
  for (int m = 0; m < g.n_theta() / 2; ++m) {
    const auto D = radial::first_derivative(g, radial::parity(m), closure);
    for (int j = 0; j < n; ++j) col[j] = fm.mode(j, m);
    D.apply(col.data(), out.data());
    for (int j = 0; j < n; ++j) {
      gr.mode(j, m) = out[j];
      gt.mode(j, m) = Complex(0.0, m / g.r(j)) * col[j];
    }
  }
  ScalarField g1, g2;
  spectral::polar_to_cartesian(gr, gt, g1, g2);
  return VectorField3(g1.to_physical(), g2.to_physical(), ScalarField(gp));
}

ScalarField divergence_h(const VectorField3& v, Closure closure) {
  const GridPtr& gp = v.grid_ptr();
  const DiskGrid& g = *gp;
  ScalarField ur, ut;
  spectral::cartesian_to_polar(v.w1.to_modes(), v.w2.to_modes(), ur, ut);
  ScalarField out(gp, Representation::modes);
  const int n = g.n_r();
  const double h = g.dr();

  // m = 0: conservative face fluxes
  {
    std::vector<double> u(n), F(n + 1, 0.0);
    for (int j = 0; j < n; ++j) u[j] = ur.mode(j, 0).real();
    for (int j = 0; j + 1 < n; ++j) F[j + 1] = (g.r(j) + 0.5 * h) * 0.5 * (u[j] + u[j + 1]);
    if (closure == Closure::extrapolated)
      F[n] = (15.0 * u[n - 1] - 10.0 * u[n - 2] + 3.0 * u[n - 3]) / 8.0;
    for (int j = 0; j < n; ++j) out.mode(j, 0) = (F[j + 1] - F[j]) / (g.r(j) * h);
  }
  std::vector<Complex> col(n), dcol(n);
  for (int m = 1; m < g.n_theta() / 2; ++m) {
    const auto D = radial::first_derivative(g, radial::parity(m), closure);
    for (int j = 0; j < n; ++j) col[j] = g.r(j) * ur.mode(j, m);
    D.apply(col.data(), dcol.data());
    for (int j = 0; j < n; ++j)
      out.mode(j, m) = dcol[j] / g.r(j) + Complex(0.0, m / g.r(j)) * ut.mode(j, m);
  }
  return out.to_physical();
}

namespace {

// applies a per-mode radial stencil built by make(m) to every mode
template <class Make>
ScalarField per_mode(const ScalarField& f, Make make) {
  const DiskGrid& g = f.grid();
  const ScalarField fm = f.to_modes();
  ScalarField out(f.grid_ptr(), Representation::modes);
  const int n = g.n_r();
  std::vector<Complex> col(n), res(n);
  for (int m = 0; m < g.n_modes(); ++m) {
    const radial::Stencil s = make(m);
    for (int j = 0; j < n; ++j) col[j] = fm.mode(j, m);
    s.apply(col.data(), res.data());
    for (int j = 0; j < n; ++j) out.mode(j, m) = res[j];
  }
  return out.to_physical();
}

}  // namespace

ScalarField laplacian(const ScalarField& f, Closure closure) {
  const DiskGrid& g = f.grid();
  return per_mode(f, [&](int m) { return radial::second_order(g, radial::angular_coefficient(g, m), closure); });
}

ScalarField constraint_residual(const VectorField3& w, const SigmaParam& sp, Closure closure) {
  ScalarField res = divergence_h(w, closure);
  if (!sp.is_planar()) res.axpy(sp.coupling(), apply_E(w.w3));
  return res;
}

// ---- A A*

namespace {

std::vector<double> pressure_coefficient(const DiskGrid& g, int m, const SigmaParam& sp) {
  const double mm = (m == g.n_theta() / 2) ? 0.0 : double(m) * m;
  return radial::angular_coefficient(g, m, sp.coupling_sq() * mm);
}

}  // namespace

ScalarField apply_pressure_operator(const ScalarField& q, const SigmaParam& sp, Closure bc) {
  const DiskGrid& g = q.grid();
  ScalarField out = per_mode(q, [&](int m) { return radial::second_order(g, pressure_coefficient(g, m, sp), bc); });
  return -1.0 * out;
}

ScalarField solve_pressure_poisson(const ScalarField& rhs, const SigmaParam& sp, Closure bc) {
  if (bc != Closure::vanishing && bc != Closure::neumann)
    throw std::invalid_argument("solve_pressure_poisson: bc must be dirichlet or neumann");
  const GridPtr& gp = rhs.grid_ptr();
  const DiskGrid& g = *gp;
  const int n = g.n_r();
  if (bc == Closure::neumann) {
    const double scale = l2_norm(rhs) / std::sqrt(std::numbers::pi);
    if (std::abs(mean(rhs)) > 1e-8 * std::max(scale, 1e-300) && scale > 0.0)
      throw std::invalid_argument("solve_pressure_poisson: neumann rhs must have zero mean");
  }
  ScalarField fm = rhs.to_modes();
  std::vector<Complex> col(n);
  for (int m = 0; m < g.n_modes(); ++m) {
    radial::Stencil s = radial::second_order(g, pressure_coefficient(g, m, sp), bc);
    for (auto& v : s.lower) v = -v;
    for (auto& v : s.diag) v = -v;
    for (auto& v : s.upper) v = -v;
    for (int j = 0; j < n; ++j) col[j] = fm.mode(j, m);
    if (m == 0 && bc == Closure::neumann) {
      // bordered system with the mean-zero constraint
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, n + 1);
      A.topLeftCorner(n, n) = s.dense();
      for (int j = 0; j < n; ++j) {
        A(j, n) = g.r(j);
        A(n, j) = g.r(j);
      }
      Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
      for (int j = 0; j < n; ++j) b(j) = col[j].real();
      const Eigen::VectorXd x = A.partialPivLu().solve(b);
      for (int j = 0; j < n; ++j) col[j] = x(j);
    } else {
      radial::TridiagonalSolver(s).solve(col.data());
    }
    for (int j = 0; j < n; ++j) fm.mode(j, m) = col[j];
  }
  return fm.to_physical();
}

// ---- metric

Eigen::Matrix2d metric_K(double y1, double y2, const SigmaParam& sp) {
  if (sp.is_planar()) return Eigen::Matrix2d::Identity();
  const double a2 = sp.alpha() * sp.alpha();
  Eigen::Matrix2d K;
  K << a2 + y1 * y1, y1 * y2, y1 * y2, a2 + y2 * y2;
  return K / (a2 + y1 * y1 + y2 * y2);
}

Eigen::Matrix2d metric_H(double y1, double y2, const SigmaParam& sp) {
  if (sp.is_planar()) return Eigen::Matrix2d::Identity();
  const double a2 = sp.alpha() * sp.alpha();
  Eigen::Matrix2d H;
  H << a2 + y2 * y2, -y1 * y2, -y1 * y2, a2 + y1 * y1;
  return H / a2;
}

MetricMatrices eval_metric(const GridPtr& grid, const SigmaParam& sp) {
  MetricMatrices out;
  const int N = grid->size();
  out.K.resize(N);
  out.H.resize(N);
  out.F.resize(N);
  for (int j = 0; j < grid->n_r(); ++j)
    for (int k = 0; k < grid->n_theta(); ++k) {
      const int i = j * grid->n_theta() + k;
      out.K[i] = metric_K(grid->y1(j, k), grid->y2(j, k), sp);
      out.H[i] = metric_H(grid->y1(j, k), grid->y2(j, k), sp);
      out.F[i] = out.K[i] - Eigen::Matrix2d::Identity();
    }
  return out;
}

// ---- L_H

std::vector<double> lh_coefficient(const DiskGrid& g, int m, const SigmaParam& sp) {
  std::vector<double> c(g.n_r());
  for (int j = 0; j < g.n_r(); ++j) {
    const double r2 = g.r(j) * g.r(j);
    c[j] = double(m) * m / r2;
    if (!sp.is_planar()) {
      const double a2 = sp.alpha() * sp.alpha();
      c[j] *= a2 / (a2 + r2);
    }
  }
  return c;
}

ScalarField apply_LH(const ScalarField& psi, const SigmaParam& sp) {
  const DiskGrid& g = psi.grid();
  return per_mode(psi, [&](int m) { return radial::second_order(g, lh_coefficient(g, m, sp), Closure::vanishing); });
}

ScalarField solve_LH(const ScalarField& vort, const SigmaParam& sp) {
  const DiskGrid& g = vort.grid();
  const int n = g.n_r();
  ScalarField fm = vort.to_modes();
  std::vector<Complex> col(n);
  for (int m = 0; m < g.n_modes(); ++m) {
    const radial::TridiagonalSolver solver(radial::second_order(g, lh_coefficient(g, m, sp), Closure::vanishing));
    for (int j = 0; j < n; ++j) col[j] = fm.mode(j, m);
    solver.solve(col.data());
    for (int j = 0; j < n; ++j) fm.mode(j, m) = col[j];
  }
  return fm.to_physical();
}

}  // namespace helix
