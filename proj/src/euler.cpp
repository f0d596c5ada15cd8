#include "helix/euler.hpp"

#include <cmath>

#include "helix/spectral.hpp"

namespace helix {

namespace {

// d/dr per mode with the given closure, mode form in and out
ScalarField radial_derivative(const ScalarField& fm, Closure closure) {
  const DiskGrid& g = fm.grid();
  ScalarField out(fm.grid_ptr(), Representation::modes);
  const int n = g.n_r();
  std::vector<Complex> col(n), res(n);
  for (int m = 0; m < g.n_theta() / 2; ++m) {
    const auto D = radial::first_derivative(g, radial::parity(m), closure);
    for (int j = 0; j < n; ++j) col[j] = fm.mode(j, m);
    D.apply(col.data(), res.data());
    for (int j = 0; j < n; ++j) out.mode(j, m) = res[j];
  }
  return out;
}

ScalarField jacobian_rate(const ScalarField& psi, const ScalarField& vort, bool dealias) {
  const DiskGrid& g = psi.grid();
  const ScalarField pm = psi.to_modes(), vm = vort.to_modes();
  const ScalarField pr = radial_derivative(pm, Closure::vanishing).to_physical();
  const ScalarField pt = spectral::dtheta(pm).to_physical();
  const ScalarField vr = radial_derivative(vm, Closure::extrapolated).to_physical();
  const ScalarField vt = spectral::dtheta(vm).to_physical();
  ScalarField J(psi.grid_ptr());
  for (int j = 0; j < g.n_r(); ++j)
    for (int k = 0; k < g.n_theta(); ++k)
      J(j, k) = -(pr(j, k) * vt(j, k) - pt(j, k) * vr(j, k)) / g.r(j);
  if (!dealias) return J;
  ScalarField Jm = J.to_modes();
  spectral::truncate(Jm, g.n_theta() / 3);
  return Jm.to_physical();
}

}  // namespace

VectorField3 velocity_from_stream(const ScalarField& psi, const SigmaParam& sp) {
  const GridPtr& gp = psi.grid_ptr();
  const DiskGrid& g = *gp;
  const VectorField3 gr = gradient(psi, Closure::vanishing);
  VectorField3 w(gp);
  const double c = sp.coupling();
  for (int j = 0; j < g.n_r(); ++j)
    for (int k = 0; k < g.n_theta(); ++k) {
      const double y1 = g.y1(j, k), y2 = g.y2(j, k);
      const Eigen::Vector2d u = metric_K(y1, y2, sp) * Eigen::Vector2d(-gr.w2(j, k), gr.w1(j, k));
      w.w1(j, k) = u(0);
      w.w2(j, k) = u(1);
      w.w3(j, k) = c * (-y2 * u(0) + y1 * u(1));
    }
  return w;
}

ScalarField transport_rate(const ScalarField& vort, const SigmaParam& sp, bool dealias) {
  return jacobian_rate(solve_LH(vort, sp), vort, dealias);
}

ScalarField transport_rate_alternative(const ScalarField& vort, const SigmaParam& sp) {
  const VectorField3 w = velocity_from_stream(solve_LH(vort, sp), sp);
  const VectorField3 gv = gradient(vort, Closure::extrapolated);
  ScalarField out = multiply(w.w1, gv.w1) + multiply(w.w2, gv.w2);
  if (!sp.is_planar()) out.axpy(sp.coupling(), multiply(w.w3, apply_E(vort)));
  return -1.0 * out;
}

double stream_energy(const ScalarField& psi, const SigmaParam& sp) {
  const DiskGrid& g = psi.grid();
  const VectorField3 gr = gradient(psi, Closure::vanishing);
  double s = 0.0;
  for (int j = 0; j < g.n_r(); ++j)
    for (int k = 0; k < g.n_theta(); ++k) {
      const Eigen::Vector2d v(gr.w1(j, k), gr.w2(j, k));
      s += g.weight(j) * v.dot(metric_K(g.y1(j, k), g.y2(j, k), sp) * v);
    }
  return s;
}

// ---- solver

EulerSolver::EulerSolver(GridPtr grid, const SigmaParam& sp, NSConfig cfg)
    : grid_(std::move(grid)), sp_(sp), cfg_(cfg) {
  if (!(cfg_.dt > 0.0)) throw std::invalid_argument("NSConfig: dt must be positive");
  if (cfg_.t_end < 0.0) throw std::invalid_argument("NSConfig: t_end must be non-negative");
  const DiskGrid& g = *grid_;
  for (int m = 0; m < g.n_modes(); ++m)
    lh_.emplace_back(radial::second_order(g, lh_coefficient(g, m, sp_), Closure::vanishing));
}

ScalarField EulerSolver::stream(const ScalarField& vort) const {
  const DiskGrid& g = *grid_;
  ScalarField fm = vort.to_modes();
  std::vector<Complex> col(g.n_r());
  for (int m = 0; m < g.n_modes(); ++m) {
    for (int j = 0; j < g.n_r(); ++j) col[j] = fm.mode(j, m);
    lh_[m].solve(col.data());
    for (int j = 0; j < g.n_r(); ++j) fm.mode(j, m) = col[j];
  }
  return fm.to_physical();
}

ScalarField EulerSolver::rate(const ScalarField& vort) const {
  return jacobian_rate(stream(vort), vort, cfg_.dealias);
}

EulerState EulerSolver::initial_state(const ScalarField& vort0) const {
  if (vort0.grid_ptr() != grid_) throw std::invalid_argument("initial_state: grid mismatch");
  const ScalarField v = vort0.to_physical();
  for (double x : v.values())
    if (!std::isfinite(x)) throw std::invalid_argument("run_euler: initial vorticity is not bounded");
  EulerState s;
  s.vort = v;
  s.psi = stream(v);
  s.sp = sp_;
  return s;
}

void EulerSolver::step(EulerState& s, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const double vmax = max_abs(gradient(s.psi, Closure::vanishing));
  const double cfl = dt * vmax / grid_->dr();
  if (cfl > cfg_.cfl) throw SolverError("advect_vorticity: CFL bound exceeded", cfl);
  const ScalarField& v = s.vort;
  ScalarField k1 = v;
  k1.axpy(dt, jacobian_rate(s.psi, v, cfg_.dealias));
  ScalarField k2 = 0.75 * v;
  k2.axpy(0.25, k1);
  k2.axpy(0.25 * dt, rate(k1));
  ScalarField out = (1.0 / 3.0) * v;
  out.axpy(2.0 / 3.0, k2);
  out.axpy(2.0 / 3.0 * dt, rate(k2));
  s.vort = std::move(out);
  s.psi = stream(s.vort);
  s.t += dt;
}

std::vector<EulerState> EulerSolver::run(const ScalarField& vort0,
                                         const std::function<void(const EulerState&)>& observer) const {
  EulerState s = initial_state(vort0);
  std::vector<EulerState> out{s};
  if (observer) observer(s);
  const double dt = cfg_.dt;
  const long n_full = static_cast<long>(std::floor(cfg_.t_end / dt + 1e-9));
  const double rest = cfg_.t_end - n_full * dt;
  const long stride =
      cfg_.snapshot_interval > 0.0 ? std::max(1L, std::lround(cfg_.snapshot_interval / dt)) : 1L;
  for (long i = 1; i <= n_full; ++i) {
    step(s, dt);
    if (observer) observer(s);
    if (i % stride == 0 || (i == n_full && rest <= 1e-12 * dt)) out.push_back(s);
  }
  if (rest > 1e-12 * dt) {
    step(s, rest);
    if (observer) observer(s);
    out.push_back(s);
  }
  if (out.size() > 1 && out[out.size() - 2].t == out.back().t) out.pop_back();
  return out;
}

EulerState advect_vorticity(const EulerState& state, double dt) {
  NSConfig cfg;
  cfg.dt = dt;
  EulerSolver solver(state.vort.grid_ptr(), state.sp, cfg);
  EulerState next = state;
  solver.step(next, dt);
  return next;
}

std::vector<EulerState> run_euler(const ScalarField& vort0, const SigmaParam& sp, const NSConfig& cfg) {
  return EulerSolver(vort0.grid_ptr(), sp, cfg).run(vort0);
}

}  // namespace helix
