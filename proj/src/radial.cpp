#include "helix/radial.hpp"

#include <stdexcept>

namespace helix::radial {

void Stencil::apply(const Complex* in, Complex* out) const {
  const int n = size();
  for (int j = 0; j < n; ++j) {
    Complex v = diag[j] * in[j];
    if (j > 0) v += lower[j] * in[j - 1];
    if (j + 1 < n) v += upper[j] * in[j + 1];
    out[j] = v;
  }
  if (corner != 0.0) out[n - 1] += corner * in[n - 3];
}

Eigen::MatrixXd Stencil::dense() const {
  const int n = size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    a(j, j) = diag[j];
    if (j > 0) a(j, j - 1) = lower[j];
    if (j + 1 < n) a(j, j + 1) = upper[j];
  }
  if (corner != 0.0) a(n - 1, n - 3) += corner;
  return a;
}

Stencil first_derivative(const DiskGrid& g, int parity, Closure closure) {
  const int n = g.n_r();
  const double h = g.dr();
  Stencil s;
  s.lower.assign(n, -0.5 / h);
  s.diag.assign(n, 0.0);
  s.upper.assign(n, 0.5 / h);
  s.lower[0] = 0.0;
  s.upper[n - 1] = 0.0;
  s.diag[0] = -0.5 * parity / h;
  switch (closure) {
    case Closure::vanishing:
      s.diag[n - 1] = -1.0 / h;
      s.lower[n - 1] = -1.0 / (3.0 * h);
      break;
    case Closure::extrapolated:
      s.diag[n - 1] = 1.5 / h;
      s.lower[n - 1] = -2.0 / h;
      s.corner = 0.5 / h;
      break;
    case Closure::neumann:
      s.diag[n - 1] = 0.5 / h;
      break;
  }
  return s;
}

Stencil second_order(const DiskGrid& g, const std::vector<double>& c, Closure closure) {
  const int n = g.n_r();
  const double h = g.dr();
  Stencil s;
  s.lower.assign(n, 0.0);
  s.diag.assign(n, 0.0);
  s.upper.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double rj = g.r(j);
    const double rp = rj + 0.5 * h;
    const double rm = rj - 0.5 * h;
    const double scale = 1.0 / (rj * h * h);
    if (j + 1 < n) {
      s.upper[j] = rp * scale;
      s.diag[j] -= rp * scale;
    }
    if (j > 0) {
      s.lower[j] = rm * scale;
      s.diag[j] -= rm * scale;
    }
    s.diag[j] -= c[j];
  }
  const double b = 1.0 / (g.r(n - 1) * h * h);  // r_{n-1/2} = 1
  switch (closure) {
    case Closure::vanishing:
      s.diag[n - 1] -= 3.0 * b;
      s.lower[n - 1] += b / 3.0;
      break;
    case Closure::extrapolated:
      s.diag[n - 1] += 2.0 * b;
      s.lower[n - 1] -= 3.0 * b;
      s.corner = b;
      break;
    case Closure::neumann:
      break;
  }
  return s;
}

std::vector<double> angular_coefficient(const DiskGrid& g, int m, double shift) {
  std::vector<double> c(g.n_r());
  for (int j = 0; j < g.n_r(); ++j) c[j] = double(m) * m / (g.r(j) * g.r(j)) + shift;
  return c;
}

Stencil shifted(const Stencil& s, double a) {
  Stencil out = s;
  for (int j = 0; j < s.size(); ++j) {
    out.lower[j] = -a * s.lower[j];
    out.upper[j] = -a * s.upper[j];
    out.diag[j] = 1.0 - a * s.diag[j];
  }
  out.corner = -a * s.corner;
  return out;
}

TridiagonalSolver::TridiagonalSolver(const Stencil& s)
    : lower_(s.lower), diag_(s.diag), upper_(s.upper) {
  if (s.corner != 0.0) throw std::invalid_argument("TridiagonalSolver: stencil has a corner entry");
  const int n = size();
  // LU without pivoting; diag_ becomes the pivots, lower_ the multipliers
  for (int j = 1; j < n; ++j) {
    if (diag_[j - 1] == 0.0) throw SolverError("TridiagonalSolver: zero pivot", j - 1);
    lower_[j] /= diag_[j - 1];
    diag_[j] -= lower_[j] * upper_[j - 1];
  }
  if (diag_[n - 1] == 0.0) throw SolverError("TridiagonalSolver: zero pivot", n - 1);
}

void TridiagonalSolver::solve(Complex* x) const {
  const int n = size();
  for (int j = 1; j < n; ++j) x[j] -= lower_[j] * x[j - 1];
  x[n - 1] /= diag_[n - 1];
  for (int j = n - 2; j >= 0; --j) x[j] = (x[j] - upper_[j] * x[j + 1]) / diag_[j];
}

}  // namespace helix::radial
