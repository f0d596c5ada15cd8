#pragma once

#include <Eigen/Dense>

#include "helix/grid.hpp"

namespace helix {

/// Outer closure for radial stencils at r = 1.
///  vanishing:    the field is zero at r = 1 (quadratic ghost through the wall value)
///  extrapolated: quadratic extrapolation from the last three nodes
///  neumann:      zero radial flux (second-order operators only)
enum class Closure { vanishing, extrapolated, neumann };

namespace radial {

/// parity of mode m under r -> -r
inline int parity(int m) { return (m % 2 == 0) ? 1 : -1; }

/// Banded per-mode operator: tridiagonal plus one corner entry at (n-1, n-3).
struct Stencil {
  std::vector<double> lower, diag, upper;  // lower[j] couples j-1, upper[j] couples j+1
  double corner = 0.0;

  int size() const { return static_cast<int>(diag.size()); }
  void apply(const Complex* in, Complex* out) const;
  Eigen::MatrixXd dense() const;
};

/// centered d/dr with pole reflection of the given parity
Stencil first_derivative(const DiskGrid& g, int parity, Closure closure);

/// (1/r)(r f')' - c_j f in finite-volume form (no pole ghost needed)
Stencil second_order(const DiskGrid& g, const std::vector<double>& c, Closure closure);

/// c_j = m^2 / r_j^2 + shift
std::vector<double> angular_coefficient(const DiskGrid& g, int m, double shift = 0.0);

/// Thomas factorization of a (corner-free) stencil; real matrix, complex rhs.
class TridiagonalSolver {
 public:
  TridiagonalSolver() = default;
  explicit TridiagonalSolver(const Stencil& s);
  /// in-place solve
  void solve(Complex* x) const;
  int size() const { return static_cast<int>(diag_.size()); }

 private:
  std::vector<double> lower_, diag_, upper_;
};

/// I - a * S
Stencil shifted(const Stencil& s, double a);

}  // namespace radial
}  // namespace helix
