#include "helix/projection.hpp"

#include "helix/spectral.hpp"

namespace helix {

VectorField3 apply_A_star(const ScalarField& q, const SigmaParam& sp) {
  VectorField3 out = gradient(q, Closure::extrapolated);
  out *= -1.0;
  if (!sp.is_planar()) out.w3 = -sp.coupling() * apply_E(q);
  return out;
}

HelicalProjector::HelicalProjector(GridPtr grid, const SigmaParam& sp) : grid_(std::move(grid)), sp_(sp) {
  const DiskGrid& g = *grid_;
  const int n = g.n_r();
  const int L = spectral::solve_limit(g);
  lu_.resize(L + 1);
  Eigen::VectorXd r(n);
  for (int j = 0; j < n; ++j) r(j) = g.r(j);
  for (int m = 1; m <= L; ++m) {
    const int p = radial::parity(m);
    const Eigen::MatrixXd Dd = radial::first_derivative(g, p, Closure::vanishing).dense();
    const Eigen::MatrixXd De = radial::first_derivative(g, p, Closure::extrapolated).dense();
    // R_m = diag(1/r) Dd diag(r)
    const Eigen::MatrixXd R = r.cwiseInverse().asDiagonal() * Dd * r.asDiagonal();
    Eigen::MatrixXd M = -(R * De);
    for (int j = 0; j < n; ++j) M(j, j) += double(m) * m / (r(j) * r(j)) + sp.coupling_sq() * m * m;
    lu_[m] = M.partialPivLu();
  }
}

ProjectionResult HelicalProjector::project(const VectorField3& w_star) const {
  const DiskGrid& g = *grid_;
  if (w_star.grid_ptr() != grid_) throw std::invalid_argument("project: grid mismatch");
  const int n = g.n_r();
  const int L = spectral::solve_limit(g);
  const double c = sp_.coupling();
  const double h = g.dr();

  ScalarField ur, ut;
  spectral::cartesian_to_polar(w_star.w1.to_modes(), w_star.w2.to_modes(), ur, ut);
  ScalarField w3 = w_star.w3.to_modes();
  spectral::truncate(ur, L);
  spectral::truncate(ut, L);
  spectral::truncate(w3, L);

  ScalarField phi(grid_, Representation::modes);

  // m = 0: the radial component is a pure gradient
  {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j > 0) acc += 0.5 * h * (ur.mode(j - 1, 0).real() + ur.mode(j, 0).real());
      phi.mode(j, 0) = acc;
    }
    for (int j = 0; j < n; ++j) ur.mode(j, 0) = 0.0;
  }

  Eigen::VectorXcd rhs(n), col(n), dcol(n);
  for (int m = 1; m <= L; ++m) {
    const int p = radial::parity(m);
    const auto Dd = radial::first_derivative(g, p, Closure::vanishing);
    const auto De = radial::first_derivative(g, p, Closure::extrapolated);
    for (int j = 0; j < n; ++j) col(j) = g.r(j) * ur.mode(j, m);
    Dd.apply(col.data(), dcol.data());
    for (int j = 0; j < n; ++j)
      rhs(j) = dcol(j) / g.r(j) + Complex(0.0, m / g.r(j)) * ut.mode(j, m) + Complex(0.0, c * m) * w3.mode(j, m);
    const Eigen::VectorXd re = lu_[m].solve(rhs.real());
    const Eigen::VectorXd im = lu_[m].solve(rhs.imag());
    for (int j = 0; j < n; ++j) col(j) = -Complex(re(j), im(j));
    De.apply(col.data(), dcol.data());
    for (int j = 0; j < n; ++j) {
      phi.mode(j, m) = col(j);
      ur.mode(j, m) -= dcol(j);
      ut.mode(j, m) -= Complex(0.0, m / g.r(j)) * col(j);
      w3.mode(j, m) -= Complex(0.0, c * m) * col(j);
    }
  }

  ScalarField w1, w2;
  spectral::polar_to_cartesian(ur, ut, w1, w2);
  ProjectionResult out{VectorField3(w1.to_physical(), w2.to_physical(), w3.to_physical()), phi.to_physical()};
  const double mq = mean(out.q);
  for (auto& v : out.q.values()) v -= mq;
  return out;
}

std::pair<VectorField3, ScalarField> project(const VectorField3& w_star, const SigmaParam& sp) {
  HelicalProjector P(w_star.grid_ptr(), sp);
  auto r = P.project(w_star);
  return {std::move(r.w), std::move(r.q)};
}

}  // namespace helix
