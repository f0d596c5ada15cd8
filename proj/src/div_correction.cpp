#include "helix/div_correction.hpp"

#include <cmath>
#include <numbers>

#include "helix/spectral.hpp"

namespace helix {

namespace {

// -r * Delta_k with a linear wall ghost, symmetric
Eigen::MatrixXd stiffness(const DiskGrid& g, int k) {
  radial::Stencil s = radial::second_order(g, radial::angular_coefficient(g, k), Closure::neumann);
  const int n = g.n_r();
  s.diag[n - 1] -= 2.0 / (g.r(n - 1) * g.dr() * g.dr());
  Eigen::MatrixXd A = s.dense();
  for (int j = 0; j < n; ++j) A.row(j) *= -g.r(j);
  return A;
}

Eigen::VectorXd radii(const DiskGrid& g) {
  Eigen::VectorXd r(g.n_r());
  for (int j = 0; j < g.n_r(); ++j) r(j) = g.r(j);
  return r;
}

// face-form divergence of the mode-0 radial component, no flux through the wall
Eigen::MatrixXd face_divergence(const DiskGrid& g) {
  const int n = g.n_r();
  const double h = g.dr();
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double s = 1.0 / (g.r(j) * h);
    if (j + 1 < n) {
      const double rp = g.r(j) + 0.5 * h;
      R(j, j) += 0.5 * rp * s;
      R(j, j + 1) += 0.5 * rp * s;
    }
    if (j > 0) {
      const double rm = g.r(j) - 0.5 * h;
      R(j, j) -= 0.5 * rm * s;
      R(j, j - 1) -= 0.5 * rm * s;
    }
  }
  return R;
}

}  // namespace

BogovskiiSolver::BogovskiiSolver(GridPtr grid) : grid_(std::move(grid)) {
  const DiskGrid& g = *grid_;
  const int n = g.n_r();
  const Eigen::VectorXd r = radii(g);
  {
    // [[S, R^T, 0], [R, 0, w], [0, w^T, 0]]
    const Eigen::MatrixXd S = stiffness(g, 1);
    const Eigen::MatrixXd R = face_divergence(g);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * n + 1, 2 * n + 1);
    K.block(0, 0, n, n) = S;
    K.block(0, n, n, n) = R.transpose();
    K.block(n, 0, n, n) = R;
    K.block(n, 2 * n, n, 1) = r;
    K.block(2 * n, n, 1, n) = r.transpose();
    lu0_ = K.partialPivLu();
  }
  const int L = spectral::solve_limit(g);
  lu_.resize(L + 1);
  for (int m = 1; m <= L; ++m) {
    const Eigen::MatrixXd Dd = radial::first_derivative(g, radial::parity(m), Closure::vanishing).dense();
    const Eigen::MatrixXd R = r.cwiseInverse().asDiagonal() * Dd * r.asDiagonal();
    const Eigen::MatrixXd mr = (double(m) * r.cwiseInverse()).asDiagonal();
    const Eigen::MatrixXd Ba = 0.5 * (R + mr);
    const Eigen::MatrixXd Bc = 0.5 * (R - mr);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    K.block(0, 0, n, n) = stiffness(g, m + 1);
    K.block(n, n, n, n) = stiffness(g, m - 1);
    K.block(0, 2 * n, n, n) = Ba.transpose();
    K.block(n, 2 * n, n, n) = Bc.transpose();
    K.block(2 * n, 0, n, n) = Ba;
    K.block(2 * n, n, n, n) = Bc;
    lu_[m] = K.partialPivLu();
  }
}

VectorField3 BogovskiiSolver::solve(const ScalarField& f) const {
  const DiskGrid& g = *grid_;
  if (f.grid_ptr() != grid_) throw std::invalid_argument("bogovskii_solve: grid mismatch");
  const double nf = l2_norm(f);
  if (nf > 0.0 && std::abs(mean(f) * std::numbers::pi) / nf > 1e-8)
    throw std::invalid_argument("bogovskii_solve: f must have zero mean");
  const int n = g.n_r();
  const int L = spectral::solve_limit(g);
  const ScalarField fm = f.to_modes();

  spectral::ComplexModes W;
  W.n_r = n;
  W.k_max = spectral::cartesian_limit(g);
  W.a.assign(n * (2 * W.k_max + 1), Complex(0.0));

  {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * n + 1);
    for (int j = 0; j < n; ++j) b(n + j) = fm.mode(j, 0).real();
    const Eigen::VectorXd x = lu0_.solve(b);
    for (int j = 0; j < n; ++j) W(j, 1) += x(j);
  }
  for (int m = 1; m <= L; ++m) {
    Eigen::VectorXd bre = Eigen::VectorXd::Zero(3 * n), bim = Eigen::VectorXd::Zero(3 * n);
    for (int j = 0; j < n; ++j) {
      bre(2 * n + j) = fm.mode(j, m).real();
      bim(2 * n + j) = fm.mode(j, m).imag();
    }
    const Eigen::VectorXd xr = lu_[m].solve(bre);
    const Eigen::VectorXd xi = lu_[m].solve(bim);
    for (int j = 0; j < n; ++j) {
      W(j, m + 1) += Complex(xr(j), xi(j));
      W(j, 1 - m) += std::conj(Complex(xr(n + j), xi(n + j)));
    }
  }
  ScalarField v1(grid_, Representation::modes), v2(grid_, Representation::modes);
  spectral::from_complex_modes(W, v1, v2);
  return VectorField3(v1.to_physical(), v2.to_physical(), ScalarField(grid_));
}

VectorField3 bogovskii_solve(const ScalarField& f) { return BogovskiiSolver(f.grid_ptr()).solve(f); }

double wall_trace(const ScalarField& f) {
  const ScalarField p = f.to_physical();
  const DiskGrid& g = f.grid();
  const int n = g.n_r();
  double m = 0.0;
  for (int k = 0; k < g.n_theta(); ++k)
    m = std::max(m, std::abs(15.0 * p(n - 1, k) - 10.0 * p(n - 2, k) + 3.0 * p(n - 3, k)) / 8.0);
  return m;
}

namespace {

void check_planar_data(const VectorField3& w) {
  const double scale = std::max(max_abs(w), 1e-300);
  for (int i = 0; i < 3; ++i)
    if (wall_trace(w[i]) > 1e-2 * scale)
      throw std::invalid_argument("correct_initial_data: field does not vanish on the wall");
  double grad2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    const VectorField3 gr = gradient(w[i], Closure::vanishing);
    grad2 += l2_inner(gr.w1, gr.w1) + l2_inner(gr.w2, gr.w2);
  }
  const double div = l2_norm(divergence_h(w, Closure::vanishing));
  if (div > 1e-2 * std::sqrt(grad2))
    throw std::invalid_argument("correct_initial_data: horizontal part is not divergence free");
}

}  // namespace

VectorField3 helical_correction(const VectorField3& w, const SigmaParam& sp, const BogovskiiSolver& solver) {
  if (sp.is_planar()) return VectorField3(w.grid_ptr());
  return solver.solve(-sp.coupling() * apply_E(w.w3));
}

VectorField3 correct_initial_data_to_helical(const VectorField3& w_inf_0, const SigmaParam& sp,
                                             const BogovskiiSolver& solver) {
  check_planar_data(w_inf_0);
  if (sp.is_planar()) return w_inf_0;
  return w_inf_0 + helical_correction(w_inf_0, sp, solver);
}

VectorField3 correct_initial_data_to_helical(const VectorField3& w_inf_0, const SigmaParam& sp) {
  if (sp.is_planar()) {
    check_planar_data(w_inf_0);
    return w_inf_0;
  }
  return correct_initial_data_to_helical(w_inf_0, sp, BogovskiiSolver(w_inf_0.grid_ptr()));
}

VectorField3 correct_initial_data_to_planar(const VectorField3& w_sigma_0, const SigmaParam& sp) {
  const double res = l2_norm(constraint_residual(w_sigma_0, sp));
  if (res > 1e-6 * std::max(l2_norm(w_sigma_0), 1e-300))
    throw std::invalid_argument("correct_initial_data_to_planar: input violates the helical constraint");
  if (sp.is_planar()) return w_sigma_0;
  return w_sigma_0 - helical_correction(w_sigma_0, sp, BogovskiiSolver(w_sigma_0.grid_ptr()));
}

}  // namespace helix
