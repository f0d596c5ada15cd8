#include "helix/navier_stokes.hpp"

#include <cmath>

#include "helix/spectral.hpp"

namespace helix {

namespace {

radial::Stencil horizontal_stencil(const DiskGrid& g, int k, const SigmaParam& sp) {
  return radial::second_order(g, radial::angular_coefficient(g, k, sp.coupling_sq() * (k - 1) * (k - 1)),
                              Closure::vanishing);
}

radial::Stencil vertical_stencil(const DiskGrid& g, int m, const SigmaParam& sp) {
  return radial::second_order(g, radial::angular_coefficient(g, m, sp.coupling_sq() * m * m), Closure::vanishing);
}

// applies hop to every horizontal W-mode column and vop to every w3 mode column
template <class H, class V>
VectorField3 per_mode_vector(const VectorField3& w, H hop, V vop) {
  const GridPtr& gp = w.grid_ptr();
  const DiskGrid& g = *gp;
  const int n = g.n_r();
  spectral::ComplexModes W = spectral::to_complex_modes(w.w1.to_modes(), w.w2.to_modes());
  std::vector<Complex> col(n);
  for (int k = -W.k_max; k <= W.k_max; ++k) {
    for (int j = 0; j < n; ++j) col[j] = W(j, k);
    hop(k, col.data());
    for (int j = 0; j < n; ++j) W(j, k) = col[j];
  }
  ScalarField w1(gp, Representation::modes), w2(gp, Representation::modes);
  spectral::from_complex_modes(W, w1, w2);
  ScalarField w3 = w.w3.to_modes();
  for (int m = 0; m < g.n_modes(); ++m) {
    if (m == g.n_theta() / 2) {
      for (int j = 0; j < n; ++j) w3.mode(j, m) = 0.0;
      continue;
    }
    for (int j = 0; j < n; ++j) col[j] = w3.mode(j, m);
    vop(m, col.data());
    for (int j = 0; j < n; ++j) w3.mode(j, m) = col[j];
  }
  return VectorField3(w1.to_physical(), w2.to_physical(), w3.to_physical());
}

ScalarField dealiased(ScalarField f, bool on) {
  if (!on) return f;
  ScalarField fm = f.to_modes();
  spectral::truncate(fm, f.grid().n_theta() / 3);
  return fm.to_physical();
}

// 1/2 [(w_H . grad) f + div(w_H f)] + (c/2) [w3 E f + E(w3 f)]
ScalarField advect(const VectorField3& w, const ScalarField& f, double c) {
  const VectorField3 gf = gradient(f, Closure::vanishing);
  ScalarField a = multiply(w.w1, gf.w1) + multiply(w.w2, gf.w2);
  const ScalarField b = gradient(multiply(w.w1, f), Closure::vanishing).w1 +
                        gradient(multiply(w.w2, f), Closure::vanishing).w2;
  a += b;
  a *= 0.5;
  if (c != 0.0) {
    const ScalarField e = multiply(w.w3, apply_E(f)) + apply_E(multiply(w.w3, f));
    a.axpy(0.5 * c, e);
  }
  return a;
}

}  // namespace

VectorField3 nonlinear_term(const VectorField3& w, const SigmaParam& sp, bool dealias) {
  const double c = sp.coupling();
  VectorField3 N(-1.0 * advect(w, w.w1, c), -1.0 * advect(w, w.w2, c), -1.0 * advect(w, w.w3, c));
  if (c != 0.0) {
    N.w1.axpy(-c, multiply(w.w3, w.w2));
    N.w2.axpy(c, multiply(w.w3, w.w1));
  }
  for (int i = 0; i < 3; ++i) N[i] = dealiased(N[i], dealias);
  return N;
}

VectorField3 sigma_viscous_term(const VectorField3& w, const SigmaParam& sp) {
  const GridPtr& gp = w.grid_ptr();
  if (sp.is_planar()) return VectorField3(gp);
  const double c2 = sp.coupling_sq();
  // E^2 w - 2 E w_perp - w_H with w_perp = (-w2, w1)
  ScalarField a = apply_E(apply_E(w.w1)) + 2.0 * apply_E(w.w2) - w.w1;
  ScalarField b = apply_E(apply_E(w.w2)) - 2.0 * apply_E(w.w1) - w.w2;
  ScalarField d = apply_E(apply_E(w.w3));
  return c2 * VectorField3(a, b, d);
}

VectorField3 ns_rhs(const VectorField3& w, const SigmaParam& sp, bool dealias) {
  VectorField3 out = nonlinear_term(w, sp, dealias);
  out += sigma_viscous_term(w, sp);
  return out;
}

VectorField3 apply_viscous_operator(const VectorField3& w, const SigmaParam& sp) {
  const DiskGrid& g = w.grid();
  std::vector<Complex> tmp(g.n_r());
  return per_mode_vector(
      w,
      [&](int k, Complex* col) {
        horizontal_stencil(g, k, sp).apply(col, tmp.data());
        std::copy(tmp.begin(), tmp.end(), col);
      },
      [&](int m, Complex* col) {
        vertical_stencil(g, m, sp).apply(col, tmp.data());
        std::copy(tmp.begin(), tmp.end(), col);
      });
}

// ---- solver

NavierStokesSolver::NavierStokesSolver(GridPtr grid, const SigmaParam& sp, NSConfig cfg)
    : grid_(std::move(grid)), sp_(sp), cfg_(cfg), projector_(grid_, sp) {
  if (!(cfg_.dt > 0.0)) throw std::invalid_argument("NSConfig: dt must be positive");
  if (cfg_.t_end < 0.0) throw std::invalid_argument("NSConfig: t_end must be non-negative");
}

const NavierStokesSolver::Factors& NavierStokesSolver::factors(double dt) {
  auto it = cache_.find(dt);
  if (it != cache_.end()) return it->second;
  const DiskGrid& g = *grid_;
  const double a = 0.5 * dt * cfg_.nu;
  Factors f;
  const int K = spectral::cartesian_limit(g);
  for (int k = -K; k <= K; ++k) f.horizontal.emplace_back(radial::shifted(horizontal_stencil(g, k, sp_), a));
  for (int m = 0; m < g.n_modes(); ++m) f.vertical.emplace_back(radial::shifted(vertical_stencil(g, m, sp_), a));
  if (cache_.size() > 4) cache_.clear();
  return cache_.emplace(dt, std::move(f)).first->second;
}

NSState NavierStokesSolver::initial_state(const VectorField3& w0) const {
  if (w0.grid_ptr() != grid_) throw std::invalid_argument("initial_state: grid mismatch");
  NSState s;
  s.w = projector_.project(w0).w;
  s.q = ScalarField(grid_);
  s.t = 0.0;
  s.sp = sp_;
  s.nu = cfg_.nu;
  return s;
}

void NavierStokesSolver::step(NSState& state, double dt) {
  const DiskGrid& g = *grid_;
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const double wmax = max_abs(state.w);
  if (dt * wmax / g.dr() > cfg_.cfl) throw SolverError("step: CFL bound exceeded", dt * wmax / g.dr());

  const Factors& F = factors(dt);
  const int K = spectral::cartesian_limit(g);

  VectorField3 rhs = state.w;
  rhs.axpy(dt, nonlinear_term(state.w, sp_, cfg_.dealias));
  rhs.axpy(dt, apply_A_star(state.q, sp_));
  rhs.axpy(0.5 * dt * cfg_.nu, apply_viscous_operator(state.w, sp_));
  const VectorField3 w_star = per_mode_vector(
      rhs, [&](int k, Complex* col) { F.horizontal[k + K].solve(col); },
      [&](int m, Complex* col) { F.vertical[m].solve(col); });

  ProjectionResult pr = projector_.project(w_star);
  const double res = lp_norm(constraint_residual(pr.w, sp_), INFINITY);
  if (res > cfg_.projection_tol) throw SolverError("step: constraint residual above tolerance", res);
  state.w = std::move(pr.w);
  state.q.axpy(1.0 / dt, pr.q);
  const double mq = mean(state.q);
  for (auto& v : state.q.values()) v -= mq;
  state.t += dt;
}

std::vector<NSState> NavierStokesSolver::run(const VectorField3& w0,
                                             const std::function<void(const NSState&)>& observer) {
  NSState s = initial_state(w0);
  std::vector<NSState> out{s};
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

NSState step(const NSState& state, double dt) {
  NSConfig cfg;
  cfg.dt = dt;
  cfg.nu = state.nu;
  NavierStokesSolver solver(state.w.grid_ptr(), state.sp, cfg);
  NSState next = state;
  solver.step(next, dt);
  return next;
}

std::vector<NSState> run(const VectorField3& initial, const SigmaParam& sp, const NSConfig& cfg) {
  NavierStokesSolver solver(initial.grid_ptr(), sp, cfg);
  return solver.run(initial);
}

}  // namespace helix
