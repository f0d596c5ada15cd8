#include "helix/spectral.hpp"

namespace helix::spectral {

namespace {

Complex at(const ScalarField& f, int j, int m, int limit) {
  if (m > limit || -m > limit) return Complex(0.0);
  return f.mode(j, m);
}

}  // namespace

ComplexModes to_complex_modes(const ScalarField& w1m, const ScalarField& w2m) {
  const DiskGrid& g = w1m.grid();
  ComplexModes W;
  W.n_r = g.n_r();
  W.k_max = cartesian_limit(g);
  W.a.assign(W.n_r * (2 * W.k_max + 1), Complex(0.0));
  const Complex I(0.0, 1.0);
  for (int j = 0; j < g.n_r(); ++j)
    for (int k = -W.k_max; k <= W.k_max; ++k) W(j, k) = w1m.mode(j, k) + I * w2m.mode(j, k);
  return W;
}

void from_complex_modes(const ComplexModes& W, ScalarField& w1m, ScalarField& w2m) {
  const DiskGrid& g = w1m.grid();
  const Complex I(0.0, 1.0);
  for (int j = 0; j < g.n_r(); ++j)
    for (int k = 0; k < g.n_modes(); ++k) {
      if (k > W.k_max) {
        w1m.mode(j, k) = w2m.mode(j, k) = 0.0;
        continue;
      }
      const Complex p = W(j, k);
      const Complex q = std::conj(W(j, -k));
      w1m.mode(j, k) = 0.5 * (p + q);
      w2m.mode(j, k) = (p - q) / (2.0 * I);
    }
}

void cartesian_to_polar(const ScalarField& w1, const ScalarField& w2, ScalarField& ur, ScalarField& ut) {
  const DiskGrid& g = w1.grid();
  const ComplexModes W = to_complex_modes(w1, w2);
  ur = ScalarField(w1.grid_ptr(), Representation::modes);
  ut = ScalarField(w1.grid_ptr(), Representation::modes);
  const Complex I(0.0, 1.0);
  const int top = g.n_theta() / 2 - 1;
  for (int j = 0; j < g.n_r(); ++j)
    for (int m = 0; m <= top; ++m) {
      const Complex p = W(j, m + 1);
      const Complex q = std::conj(W(j, 1 - m));
      ur.mode(j, m) = 0.5 * (p + q);
      ut.mode(j, m) = (p - q) / (2.0 * I);
    }
}

void polar_to_cartesian(const ScalarField& ur, const ScalarField& ut, ScalarField& w1, ScalarField& w2) {
  const DiskGrid& g = ur.grid();
  const int top = g.n_theta() / 2 - 1;
  const Complex I(0.0, 1.0);
  ComplexModes W;
  W.n_r = g.n_r();
  W.k_max = cartesian_limit(g);
  W.a.assign(W.n_r * (2 * W.k_max + 1), Complex(0.0));
  for (int j = 0; j < g.n_r(); ++j)
    for (int k = -W.k_max; k <= W.k_max; ++k)
      W(j, k) = at(ur, j, k - 1, top) + I * at(ut, j, k - 1, top);
  w1 = ScalarField(ur.grid_ptr(), Representation::modes);
  w2 = ScalarField(ur.grid_ptr(), Representation::modes);
  from_complex_modes(W, w1, w2);
}

ScalarField dtheta(const ScalarField& fm) {
  ScalarField out(fm.grid_ptr(), Representation::modes);
  const DiskGrid& g = fm.grid();
  const int nyq = g.n_theta() / 2;
  for (int j = 0; j < g.n_r(); ++j)
    for (int m = 0; m < nyq; ++m) out.mode(j, m) = Complex(0.0, m) * fm.mode(j, m);
  return out;
}

void truncate(ScalarField& fm, int m_max) {
  const DiskGrid& g = fm.grid();
  for (int j = 0; j < g.n_r(); ++j)
    for (int m = m_max + 1; m < g.n_modes(); ++m) fm.mode(j, m) = 0.0;
}

}  // namespace helix::spectral
