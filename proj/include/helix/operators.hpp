#pragma once

#include <Eigen/Dense>
#include <string>

#include "helix/grid.hpp"
#include "helix/radial.hpp"

namespace helix {

/// Helical step sigma, or the planar limit sigma = infinity.
class SigmaParam {
 public:
  /// planar
  SigmaParam() = default;
  static SigmaParam planar() { return SigmaParam(); }
  static SigmaParam finite(double sigma);

  bool is_planar() const { return planar_; }
  double sigma() const;
  /// sigma / 2 pi
  double alpha() const;
  /// 2 pi / sigma, zero when planar
  double coupling() const { return planar_ ? 0.0 : 1.0 / alpha_; }
  double coupling_sq() const { return coupling() * coupling(); }
  std::string label() const;

 private:
  bool planar_ = true;
  double sigma_ = 0.0;
  double alpha_ = 0.0;
};

/// y_perp . grad f = d/dtheta f, exact per mode
ScalarField apply_E(const ScalarField& f);

/// Cartesian gradient, third component zero
VectorField3 gradient(const ScalarField& f, Closure closure = Closure::extrapolated);

/// d1 v1 + d2 v2
ScalarField divergence_h(const VectorField3& v, Closure closure = Closure::extrapolated);

ScalarField laplacian(const ScalarField& f, Closure closure = Closure::extrapolated);

/// div w_H + (2 pi / sigma) E w3
ScalarField constraint_residual(const VectorField3& w, const SigmaParam& sp,
                                Closure closure = Closure::vanishing);

/// A A* = -Delta - (4 pi^2 / sigma^2) E^2 with the given boundary closure
ScalarField apply_pressure_operator(const ScalarField& q, const SigmaParam& sp,
                                    Closure bc = Closure::vanishing);

/// bc: Closure::vanishing (Dirichlet) or Closure::neumann
ScalarField solve_pressure_poisson(const ScalarField& rhs, const SigmaParam& sp,
                                   Closure bc = Closure::neumann);

Eigen::Matrix2d metric_K(double y1, double y2, const SigmaParam& sp);
Eigen::Matrix2d metric_H(double y1, double y2, const SigmaParam& sp);

struct MetricMatrices {
  // node (j, k) stored at j * n_theta + k
  std::vector<Eigen::Matrix2d> K, H, F;
};

MetricMatrices eval_metric(const GridPtr& grid, const SigmaParam& sp);

/// per-mode coefficient of psi_m in L_H
std::vector<double> lh_coefficient(const DiskGrid& g, int m, const SigmaParam& sp);

ScalarField apply_LH(const ScalarField& psi, const SigmaParam& sp);
ScalarField solve_LH(const ScalarField& vort, const SigmaParam& sp);

}  // namespace helix
