#pragma once

#include <functional>
#include <map>
#include <vector>

#include "helix/projection.hpp"

namespace helix {

struct NSConfig {
  double dt = 1e-3;
  double t_end = 0.0;
  double nu = 1.0;
  int n_r = 64;
  int n_theta = 128;
  double projection_tol = 1e-8;
  bool dealias = true;
  /// dt * max|w| / dr must not exceed this
  double cfl = 1.0;
  /// spacing of stored snapshots; 0 stores every step
  double snapshot_interval = 0.0;
};

struct NSState {
  VectorField3 w;
  ScalarField q;
  double t = 0.0;
  SigmaParam sp;
  double nu = 1.0;
};

/// skew-symmetric advection plus the w3 rotation terms, explicit part only
VectorField3 nonlinear_term(const VectorField3& w, const SigmaParam& sp, bool dealias = true);
/// (4 pi^2 / sigma^2) [E^2 w - 2 E w_perp - w_H]
VectorField3 sigma_viscous_term(const VectorField3& w, const SigmaParam& sp);
/// nonlinear_term + sigma_viscous_term
VectorField3 ns_rhs(const VectorField3& w, const SigmaParam& sp, bool dealias = true);

/// Full viscous operator L (Laplacian plus the sigma terms) per mode, Dirichlet walls.
VectorField3 apply_viscous_operator(const VectorField3& w, const SigmaParam& sp);

class NavierStokesSolver {
 public:
  NavierStokesSolver(GridPtr grid, const SigmaParam& sp, NSConfig cfg);

  /// projects w0 and sets q = 0
  NSState initial_state(const VectorField3& w0) const;
  void step(NSState& state, double dt);
  /// snapshots at cfg.snapshot_interval; observer sees every step
  std::vector<NSState> run(const VectorField3& w0,
                           const std::function<void(const NSState&)>& observer = {});

  const NSConfig& config() const { return cfg_; }

 private:
  struct Factors {
    std::vector<radial::TridiagonalSolver> horizontal;  // k + k_max
    std::vector<radial::TridiagonalSolver> vertical;    // m
  };
  const Factors& factors(double dt);

  GridPtr grid_;
  SigmaParam sp_;
  NSConfig cfg_;
  HelicalProjector projector_;
  std::map<double, Factors> cache_;
};

NSState step(const NSState& state, double dt);
std::vector<NSState> run(const VectorField3& initial, const SigmaParam& sp, const NSConfig& cfg);

}  // namespace helix
