#pragma once

#include <Eigen/Dense>
#include <vector>

#include "helix/euler.hpp"

namespace helix {

/// rotation-translation matrix M(rho)
Eigen::Matrix3d helical_M(double rho);

/// Samples of a helical field on D x [0, sigma): level l sits at x3 = l sigma / n_z,
/// each level sampled at the disk-grid nodes x' of the same grid.
struct HelicalField3D {
  SigmaParam sp;
  int n_z = 0;
  std::vector<VectorField3> levels;

  double dz() const { return sp.sigma() / n_z; }
  double x3(int l) const { return l * dz(); }
  const DiskGrid& grid() const { return levels.front().grid(); }
};

/// u(x', x3) = M(2 pi x3 / sigma) w(y(x)) at one height, by exact per-mode phase shift
VectorField3 lift_level(const VectorField3& w, const SigmaParam& sp, double x3);
HelicalField3D lift(const VectorField3& w, const SigmaParam& sp, int n_z = 32);

/// M^T u(m^T x') at level l; level 0 is the x3 = 0 slice
VectorField3 restrict(const HelicalField3D& u, int level = 0);

/// trigonometric evaluation of u at (r_j, theta, x3) straight from w
Eigen::Vector3d evaluate(const VectorField3& w, const SigmaParam& sp, int j, double theta, double x3);

struct ScalingReport {
  double l2_u = 0.0;          ///< ||u||_{L2(Omega)}, direct 3D quadrature
  double l2_w = 0.0;          ///< ||w||_{L2(D)}
  double equality_residual = 0.0;  ///< |l2_u - sqrt(sigma) l2_w| / (sqrt(sigma) l2_w)
  double grad_h_u = 0.0;      ///< ||grad_H u||
  double grad_w = 0.0;        ///< ||grad w||
  double grad_slack = 0.0;    ///< sqrt(sigma) ||grad w|| - ||grad_H u||
  double dx3_u = 0.0;         ///< ||d_x3 u||
  double h1_w = 0.0;          ///< ||w||_{H1}
  double dx3_slack = 0.0;     ///< ||w||_{H1} / sqrt(sigma) - ||d_x3 u||
  double dx3_constant = 0.0;  ///< ||d_x3 u|| sqrt(sigma) / ||w||_{H1}
  bool equality_ok = false;
  bool grad_ok = false;
  bool dx3_ok = false;
};

ScalingReport verify_scalings(const VectorField3& w0, const SigmaParam& sp, int n_z = 32);

/// max |u . xi| / (|u| |xi|) with xi = (x2, -x1, sigma / 2 pi); 0/0 counts as 0
double no_swirl_residual(const HelicalField3D& u);

/// d/dx3 by periodic fourth-order differences across levels
std::vector<VectorField3> dx3(const HelicalField3D& u);
std::vector<ScalarField> divergence3d(const HelicalField3D& u);
std::vector<VectorField3> curl3d(const HelicalField3D& u);

struct VorticityReport {
  double parallel_residual = 0.0;   ///< max |curl u x xi| / (max|curl u| max|xi|)
  double magnitude_residual = 0.0;  ///< max |curl u - (2 pi / sigma) omega3 xi| / max |curl u|
  double vort_mismatch = 0.0;       ///< omega3 at x3 = 0 against the state vorticity, relative
};

VorticityReport vorticity3d_check(const EulerState& state, const SigmaParam& sp, int n_z = 32);

}  // namespace helix
