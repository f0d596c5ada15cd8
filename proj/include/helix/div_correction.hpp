#pragma once

#include <Eigen/Dense>

#include "helix/operators.hpp"

namespace helix {

/// Minimal-H1 solution of div v = f with v = 0 on the wall, per azimuthal mode.
class BogovskiiSolver {
 public:
  explicit BogovskiiSolver(GridPtr grid);
  /// third component of the result is zero
  VectorField3 solve(const ScalarField& f) const;
  const GridPtr& grid() const { return grid_; }

 private:
  GridPtr grid_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu0_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;  // index m >= 1
};

VectorField3 bogovskii_solve(const ScalarField& f);

/// quadratic extrapolation of f to r = 1, max over angles
double wall_trace(const ScalarField& f);

/// v with div v = -(2 pi / sigma) E w3
VectorField3 helical_correction(const VectorField3& w, const SigmaParam& sp, const BogovskiiSolver& solver);

/// w_inf + (v, 0)
VectorField3 correct_initial_data_to_helical(const VectorField3& w_inf_0, const SigmaParam& sp);
VectorField3 correct_initial_data_to_helical(const VectorField3& w_inf_0, const SigmaParam& sp,
                                             const BogovskiiSolver& solver);
/// w_sigma - (v, 0)
VectorField3 correct_initial_data_to_planar(const VectorField3& w_sigma_0, const SigmaParam& sp);

}  // namespace helix
