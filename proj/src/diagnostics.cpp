#include "helix/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "helix/div_correction.hpp"

namespace helix {

double h1_seminorm(const ScalarField& f) {
  const VectorField3 g = gradient(f, Closure::vanishing);
  return std::sqrt(l2_inner(g.w1, g.w1) + l2_inner(g.w2, g.w2));
}

double h1_seminorm(const VectorField3& w) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += std::pow(h1_seminorm(w[i]), 2);
  return std::sqrt(s);
}

double dissipation_gradient(const VectorField3& w) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s -= l2_inner(w[i], laplacian(w[i], Closure::vanishing));
  return s;
}

double dissipation_sigma(const VectorField3& w, const SigmaParam& sp) {
  if (sp.is_planar()) return 0.0;
  const ScalarField e3 = apply_E(w.w3);
  const ScalarField a = apply_E(w.w1) + w.w2;
  const ScalarField b = apply_E(w.w2) - w.w1;
  return sp.coupling_sq() * (l2_inner(e3, e3) + l2_inner(a, a) + l2_inner(b, b));
}

std::vector<EnergyBudget> energy_budget(const std::vector<NSState>& trajectory) {
  std::vector<EnergyBudget> out;
  if (trajectory.empty()) return out;
  const double k0 = std::pow(l2_norm(trajectory.front().w), 2);
  double dg_prev = 0.0, ds_prev = 0.0, acc_g = 0.0, acc_s = 0.0;
  for (size_t i = 0; i < trajectory.size(); ++i) {
    const NSState& s = trajectory[i];
    const double dg = dissipation_gradient(s.w);
    const double ds = dissipation_sigma(s.w, s.sp);
    if (i > 0) {
      const double dt = s.t - trajectory[i - 1].t;
      acc_g += 0.5 * dt * (dg + dg_prev) * 2.0 * s.nu;
      acc_s += 0.5 * dt * (ds + ds_prev) * 2.0 * s.nu;
    }
    dg_prev = dg;
    ds_prev = ds;
    EnergyBudget b;
    b.t = s.t;
    b.kinetic = std::pow(l2_norm(s.w), 2);
    b.dissipation = acc_g;
    b.sigma_dissipation = acc_s;
    b.residual = k0 > 0.0 ? (b.kinetic + acc_g + acc_s - k0) / k0 : 0.0;
    out.push_back(b);
  }
  return out;
}

std::vector<double> energy_identity_residual(const std::vector<NSState>& trajectory, const SigmaParam& sp) {
  for (const auto& s : trajectory)
    if (s.sp.is_planar() != sp.is_planar() || (!sp.is_planar() && s.sp.sigma() != sp.sigma()))
      throw std::invalid_argument("energy_identity_residual: trajectory sigma mismatch");
  std::vector<double> out;
  for (const auto& b : energy_budget(trajectory)) out.push_back(std::abs(b.residual));
  return out;
}

LadyzhenskayaResult ladyzhenskaya_check(const ScalarField& f) {
  const double scale = lp_norm(f, INFINITY);
  const double h = f.grid().dr();
  if (wall_trace(f) > 10.0 * h * h * scale) throw std::invalid_argument("ladyzhenskaya_check: f does not vanish on the wall");
  LadyzhenskayaResult r;
  r.lhs = std::pow(lp_norm(f, 4.0), 4);
  r.rhs = 2.0 * std::pow(l2_norm(f), 2) * std::pow(h1_seminorm(f), 2);
  return r;
}

ThetaNorms theta_norms(const VectorField3& w_sigma, const VectorField3& w_inf) {
  if (w_sigma.grid_ptr() != w_inf.grid_ptr()) throw std::invalid_argument("theta_norms: grid mismatch");
  const VectorField3 d = w_sigma - w_inf;
  return {l2_norm(d), h1_seminorm(d)};
}

RateFit fit_rate(const std::vector<double>& sigma, const std::vector<double>& error, double floor) {
  if (sigma.size() != error.size()) throw std::invalid_argument("fit_rate: length mismatch");
  RateFit f;
  const size_t n = sigma.size();
  for (double e : error)
    if (!(e > floor)) f.degenerate = true;
  if (n < 2 || f.degenerate) {
    f.degenerate = true;
    f.slope = f.intercept = std::numeric_limits<double>::quiet_NaN();
    return f;
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(sigma[i]) / n;
    my += std::log(error[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(sigma[i]) - mx;
    sxy += dx * (std::log(error[i]) - my);
    sxx += dx * dx;
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (size_t i = 0; i + 1 < n; ++i)
    f.pair_slopes.push_back(std::log(error[i + 1] / error[i]) / std::log(sigma[i + 1] / sigma[i]));
  return f;
}

double fit_rate(ConvergenceReport& report, double floor) {
  const RateFit f = fit_rate(report.sigma_values, report.error_l2, floor);
  report.fitted_slope = f.slope;
  report.intercept = f.intercept;
  report.pair_slopes = f.pair_slopes;
  report.degenerate = f.degenerate;
  return f.slope;
}

}  // namespace helix
