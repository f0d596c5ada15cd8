#include "helix/lift.hpp"

#include <cmath>
#include <numbers>

#include "helix/diagnostics.hpp"

namespace helix {

namespace {

void require_finite(const SigmaParam& sp, const char* who) {
  if (sp.is_planar()) throw std::invalid_argument(std::string(who) + ": needs a finite sigma");
}

// f(r, theta + phi) by phase shift; Nyquist dropped
ScalarField rotate(const ScalarField& f, double phi) {
  ScalarField fm = f.to_modes();
  const DiskGrid& g = f.grid();
  for (int m = 0; m < g.n_modes(); ++m) {
    const Complex ph = (m == g.n_theta() / 2) ? Complex(0.0) : std::polar(1.0, m * phi);
    for (int j = 0; j < g.n_r(); ++j) fm.mode(j, m) *= ph;
  }
  return fm.to_physical();
}

// M(rho) applied nodewise
VectorField3 apply_M(const VectorField3& w, double rho) {
  const double c = std::cos(rho), s = std::sin(rho);
  VectorField3 out = w;
  out.w1 = c * w.w1 + s * w.w2;
  out.w2 = (-s) * w.w1 + c * w.w2;
  return out;
}

}  // namespace

Eigen::Matrix3d helical_M(double rho) {
  Eigen::Matrix3d M;
  M << std::cos(rho), std::sin(rho), 0, -std::sin(rho), std::cos(rho), 0, 0, 0, 1;
  return M;
}

VectorField3 lift_level(const VectorField3& w, const SigmaParam& sp, double x3) {
  require_finite(sp, "lift");
  const double phi = sp.coupling() * x3;
  VectorField3 r(rotate(w.w1, phi), rotate(w.w2, phi), rotate(w.w3, phi));
  return apply_M(r, phi);
}

HelicalField3D lift(const VectorField3& w, const SigmaParam& sp, int n_z) {
  require_finite(sp, "lift");
  if (n_z < 4) throw std::invalid_argument("lift: n_z must be >= 4");
  HelicalField3D u;
  u.sp = sp;
  u.n_z = n_z;
  u.levels.push_back(VectorField3(w.w1.to_physical(), w.w2.to_physical(), w.w3.to_physical()));
  for (int l = 1; l < n_z; ++l) u.levels.push_back(lift_level(w, sp, u.x3(l)));
  return u;
}

VectorField3 restrict(const HelicalField3D& u, int level) {
  if (level < 0 || level >= u.n_z) throw std::out_of_range("restrict: level out of range");
  if (level == 0) return u.levels[0];
  const double phi = u.sp.coupling() * u.x3(level);
  const VectorField3 b = apply_M(u.levels[level], -phi);
  return VectorField3(rotate(b.w1, -phi), rotate(b.w2, -phi), rotate(b.w3, -phi));
}

Eigen::Vector3d evaluate(const VectorField3& w, const SigmaParam& sp, int j, double theta, double x3) {
  require_finite(sp, "evaluate");
  const double phi = sp.coupling() * x3;
  const DiskGrid& g = w.grid();
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    const ScalarField fm = w[i].to_modes();
    double s = fm.mode(j, 0).real();
    for (int m = 1; m < g.n_theta() / 2; ++m) s += 2.0 * (fm.mode(j, m) * std::polar(1.0, m * (theta + phi))).real();
    v(i) = s;
  }
  return helical_M(phi) * v;
}

// ---- scalings

ScalingReport verify_scalings(const VectorField3& w0, const SigmaParam& sp, int n_z) {
  require_finite(sp, "verify_scalings");
  const HelicalField3D u = lift(w0, sp, n_z);
  const double dz = u.dz(), sq = std::sqrt(sp.sigma());
  ScalingReport r;
  double u2 = 0.0, gu2 = 0.0, zu2 = 0.0;
  const auto dz_u = dx3(u);
  for (int l = 0; l < n_z; ++l) {
    u2 += dz * std::pow(l2_norm(u.levels[l]), 2);
    gu2 += dz * std::pow(h1_seminorm(u.levels[l]), 2);
    zu2 += dz * std::pow(l2_norm(dz_u[l]), 2);
  }
  r.l2_u = std::sqrt(u2);
  r.l2_w = l2_norm(w0);
  r.equality_residual = r.l2_w > 0.0 ? std::abs(r.l2_u - sq * r.l2_w) / (sq * r.l2_w) : r.l2_u;
  r.grad_h_u = std::sqrt(gu2);
  r.grad_w = h1_seminorm(w0);
  r.grad_slack = sq * r.grad_w - r.grad_h_u;
  r.dx3_u = std::sqrt(zu2);
  r.h1_w = std::sqrt(r.l2_w * r.l2_w + r.grad_w * r.grad_w);
  r.dx3_slack = r.h1_w / sq - r.dx3_u;
  r.dx3_constant = r.h1_w > 0.0 ? r.dx3_u * sq / r.h1_w : 0.0;
  r.equality_ok = r.equality_residual <= 1e-8;
  r.grad_ok = r.grad_slack >= -1e-10 * std::max(1.0, sq * r.grad_w);
  r.dx3_ok = r.dx3_slack >= -1e-10 * std::max(1.0, r.h1_w);
  return r;
}

// ---- geometry

double no_swirl_residual(const HelicalField3D& u) {
  const DiskGrid& g = u.grid();
  const double a = u.sp.alpha();
  double worst = 0.0;
  for (int l = 0; l < u.n_z; ++l) {
    const VectorField3& v = u.levels[l];
    for (int j = 0; j < g.n_r(); ++j)
      for (int k = 0; k < g.n_theta(); ++k) {
        const double x1 = g.y1(j, k), x2 = g.y2(j, k);
        const double dot = v.w1(j, k) * x2 - v.w2(j, k) * x1 + v.w3(j, k) * a;
        const double nu = std::hypot(v.w1(j, k), v.w2(j, k), v.w3(j, k));
        const double nx = std::hypot(x2, x1, a);
        if (nu > 0.0) worst = std::max(worst, std::abs(dot) / (nu * nx));
      }
  }
  return worst;
}

std::vector<VectorField3> dx3(const HelicalField3D& u) {
  const int n = u.n_z;
  const double s = 1.0 / (12.0 * u.dz());
  std::vector<VectorField3> out;
  for (int l = 0; l < n; ++l) {
    auto at = [&](int k) -> const VectorField3& { return u.levels[((l + k) % n + n) % n]; };
    VectorField3 d = 8.0 * (at(1) - at(-1)) - (at(2) - at(-2));
    out.push_back(s * d);
  }
  return out;
}

std::vector<ScalarField> divergence3d(const HelicalField3D& u) {
  const auto dz = dx3(u);
  std::vector<ScalarField> out;
  for (int l = 0; l < u.n_z; ++l) out.push_back(divergence_h(u.levels[l], Closure::vanishing) + dz[l].w3);
  return out;
}

std::vector<VectorField3> curl3d(const HelicalField3D& u) {
  const auto dz = dx3(u);
  std::vector<VectorField3> out;
  for (int l = 0; l < u.n_z; ++l) {
    const VectorField3& v = u.levels[l];
    const VectorField3 g1 = gradient(v.w1, Closure::extrapolated);
    const VectorField3 g2 = gradient(v.w2, Closure::extrapolated);
    const VectorField3 g3 = gradient(v.w3, Closure::extrapolated);
    out.emplace_back(g3.w2 - dz[l].w2, dz[l].w1 - g3.w1, g2.w1 - g1.w2);
  }
  return out;
}

VorticityReport vorticity3d_check(const EulerState& state, const SigmaParam& sp, int n_z) {
  require_finite(sp, "vorticity3d_check");
  const VectorField3 w = velocity_from_stream(state.psi, sp);
  const HelicalField3D u = lift(w, sp, n_z);
  const auto cu = curl3d(u);
  const DiskGrid& g = w.grid();
  const double a = sp.alpha(), c = sp.coupling();
  double cmax = 0.0, xmax = 0.0, cross = 0.0, mag = 0.0;
  for (int l = 0; l < n_z; ++l)
    for (int j = 0; j < g.n_r(); ++j)
      for (int k = 0; k < g.n_theta(); ++k) {
        const Eigen::Vector3d xi(g.y2(j, k), -g.y1(j, k), a);
        const Eigen::Vector3d v(cu[l].w1(j, k), cu[l].w2(j, k), cu[l].w3(j, k));
        cmax = std::max(cmax, v.norm());
        xmax = std::max(xmax, xi.norm());
        cross = std::max(cross, v.cross(xi).norm());
        mag = std::max(mag, (v - c * v(2) * xi).norm());
      }
  VorticityReport r;
  if (cmax == 0.0) return r;
  r.parallel_residual = cross / (cmax * xmax);
  r.magnitude_residual = mag / cmax;
  const double vs = lp_norm(state.vort, INFINITY);
  r.vort_mismatch = vs > 0.0 ? l2_norm(cu[0].w3 - state.vort) / l2_norm(state.vort) : 0.0;
  return r;
}

}  // namespace helix
