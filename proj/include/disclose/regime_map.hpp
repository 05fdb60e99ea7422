#pragma once
#include <string>
#include <vector>

#include "disclose/families.hpp"

namespace disclose {

struct RegimeMapOptions {
  double gamma_lo = 0, gamma_hi = 2.5;
  double rho_lo = 0, rho_hi = 2.5;
  int resolution = 26;     // lattice points per axis before band removal
  double eps = 0.02;       // half-width of the excluded band around 1
  int validate_every = 4;  // cross-validate lattice points with both indices % this == 0
  CrraParams base{0, 0, 0.5, 0.5};  // gamma/rho overwritten per cell
  double state_lo = 1.0, state_hi = 2.0;
  int grid_states = 101, grid_actions = 201;  // checker grid for validation
};

struct RegimeCell {
  double gamma = 0, rho = 0;
  Regime regime = Regime::Inconclusive;
  bool validated = false;
  bool agree = true;  // meaningful only when validated
  std::string note;   // disagreement detail
};

struct RegimeMapReport {
  std::vector<double> gammas, rhos;  // axis values after band removal
  std::vector<RegimeCell> cells;     // row-major: gamma outer, rho inner
  int disagreements = 0;
};

// Classifies every lattice point analytically and cross-validates a subsample
// against the grid checkers (optimal -> opposite-sign condition holds and no
// suboptimality witness; suboptimal -> witness found; inconclusive -> the
// condition is violated yet no witness exists). Throws ConfigError when a
// range crosses 1 with eps <= 0.
RegimeMapReport regime_map(const RegimeMapOptions& opt);

}  // namespace disclose
