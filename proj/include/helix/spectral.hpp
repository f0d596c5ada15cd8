#pragma once

#include "helix/grid.hpp"

// Mode-space helpers shared by the operator, projection and solver code.
namespace helix::spectral {

/// highest Cartesian mode kept by vector conversions
inline int cartesian_limit(const DiskGrid& g) { return g.n_theta() / 2 - 2; }
/// highest polar mode solved by the projection and correction solvers
inline int solve_limit(const DiskGrid& g) { return g.n_theta() / 2 - 3; }

/// polar components (u_r, u_theta) of a Cartesian pair, all in mode form
void cartesian_to_polar(const ScalarField& w1, const ScalarField& w2, ScalarField& ur, ScalarField& ut);
/// inverse of cartesian_to_polar; drops Cartesian modes above cartesian_limit
void polar_to_cartesian(const ScalarField& ur, const ScalarField& ut, ScalarField& w1, ScalarField& w2);

/// multiply mode m by i*m, Nyquist zeroed (mode form in, mode form out)
ScalarField dtheta(const ScalarField& fm);
/// zero all modes above m_max
void truncate(ScalarField& fm, int m_max);

/// W_k = w1_k + i w2_k for |k| <= cartesian_limit, stored at index k + offset
struct ComplexModes {
  int n_r = 0, k_max = 0;
  std::vector<Complex> a;  // n_r x (2 k_max + 1)
  Complex& operator()(int j, int k) { return a[j * (2 * k_max + 1) + k + k_max]; }
  Complex operator()(int j, int k) const {
    if (k < -k_max || k > k_max) return Complex(0.0);
    return a[j * (2 * k_max + 1) + k + k_max];
  }
};
ComplexModes to_complex_modes(const ScalarField& w1m, const ScalarField& w2m);
void from_complex_modes(const ComplexModes& W, ScalarField& w1m, ScalarField& w2m);

}  // namespace helix::spectral
