#pragma once

#include <Eigen/Dense>
#include <utility>

#include "helix/operators.hpp"

namespace helix {

/// A* q = (-grad q, -(2 pi / sigma) E q)
VectorField3 apply_A_star(const ScalarField& q, const SigmaParam& sp);

struct ProjectionResult {
  VectorField3 w;
  ScalarField q;  ///< w = w_star + A* q, mean zero
};

/// Discrete helical projection. Per mode m >= 1 the composition A A* of the
/// discrete divergence and gradient is factored once; m = 0 carries no
/// radial velocity.
class HelicalProjector {
 public:
  HelicalProjector(GridPtr grid, const SigmaParam& sp);
  ProjectionResult project(const VectorField3& w_star) const;
  const SigmaParam& sigma() const { return sp_; }

 private:
  GridPtr grid_;
  SigmaParam sp_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;  // index m, m >= 1
};

std::pair<VectorField3, ScalarField> project(const VectorField3& w_star, const SigmaParam& sp);

}  // namespace helix
