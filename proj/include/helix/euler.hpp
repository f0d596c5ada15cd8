#pragma once

#include <functional>
#include <vector>

#include "helix/navier_stokes.hpp"

namespace helix {

struct EulerState {
  ScalarField vort;
  ScalarField psi;
  double t = 0.0;
  SigmaParam sp;
};

/// w_H = K grad_perp psi, w3 = (2 pi / sigma) y_perp . w_H
VectorField3 velocity_from_stream(const ScalarField& psi, const SigmaParam& sp);

/// -(d1 psi d2 vort - d2 psi d1 vort), psi from solve_LH
ScalarField transport_rate(const ScalarField& vort, const SigmaParam& sp, bool dealias = true);
/// -[w_H . grad vort + (2 pi / sigma) w3 E vort] on the constructed velocity
ScalarField transport_rate_alternative(const ScalarField& vort, const SigmaParam& sp);

/// int grad psi . K grad psi
double stream_energy(const ScalarField& psi, const SigmaParam& sp);

class EulerSolver {
 public:
  /// uses cfg.dt, cfg.t_end, cfg.dealias, cfg.cfl and cfg.snapshot_interval
  EulerSolver(GridPtr grid, const SigmaParam& sp, NSConfig cfg);

  EulerState initial_state(const ScalarField& vort0) const;
  ScalarField stream(const ScalarField& vort) const;
  ScalarField rate(const ScalarField& vort) const;
  /// SSP-RK3
  void step(EulerState& state, double dt) const;
  std::vector<EulerState> run(const ScalarField& vort0,
                              const std::function<void(const EulerState&)>& observer = {}) const;

 private:
  GridPtr grid_;
  SigmaParam sp_;
  NSConfig cfg_;
  std::vector<radial::TridiagonalSolver> lh_;  // per mode
};

EulerState advect_vorticity(const EulerState& state, double dt);
std::vector<EulerState> run_euler(const ScalarField& vort0, const SigmaParam& sp, const NSConfig& cfg);

}  // namespace helix
