#pragma once

#include <map>
#include <string>
#include <vector>

#include "helix/navier_stokes.hpp"

namespace helix {

/// ||grad f||_{L2} with the wall-vanishing closure
double h1_seminorm(const ScalarField& f);
double h1_seminorm(const VectorField3& w);

/// -<w, Delta w>, the discrete ||grad w||^2 used by the stepper
double dissipation_gradient(const VectorField3& w);
/// (4 pi^2 / sigma^2) (||E w3||^2 + ||E w_H - w_perp||^2)
double dissipation_sigma(const VectorField3& w, const SigmaParam& sp);

struct EnergyBudget {
  double t = 0.0;
  double kinetic = 0.0;            ///< ||w(t)||^2
  double dissipation = 0.0;        ///< 2 nu int ||grad w||^2
  double sigma_dissipation = 0.0;  ///< 2 nu int sigma terms
  double residual = 0.0;           ///< relative to ||w0||^2
};

std::vector<EnergyBudget> energy_budget(const std::vector<NSState>& trajectory);
std::vector<double> energy_identity_residual(const std::vector<NSState>& trajectory, const SigmaParam& sp);

struct LadyzhenskayaResult {
  double lhs = 0.0;  ///< ||f||_4^4
  double rhs = 0.0;  ///< 2 ||f||^2 ||grad f||^2
};
LadyzhenskayaResult ladyzhenskaya_check(const ScalarField& f);

struct ThetaNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
};
ThetaNorms theta_norms(const VectorField3& w_sigma, const VectorField3& w_inf);

struct ConvergenceReport {
  std::vector<double> sigma_values;
  std::vector<double> error_l2;
  std::vector<double> error_h1;
  double fitted_slope = 0.0;
  double intercept = 0.0;
  std::vector<double> pair_slopes;
  bool degenerate = false;
  double t_star = 0.0;
  std::map<std::string, std::string> manifest;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> pair_slopes;
  /// some error is at or below the floor; slope is not meaningful
  bool degenerate = false;
};

/// least squares on (log sigma, log error)
RateFit fit_rate(const std::vector<double>& sigma, const std::vector<double>& error, double floor = 0.0);
/// fits error_l2, stores slope, intercept, pair slopes and the degenerate flag
double fit_rate(ConvergenceReport& report, double floor = 0.0);

}  // namespace helix
