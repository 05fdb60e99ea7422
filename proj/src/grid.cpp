#include "disclose/grid.hpp"

#include <algorithm>

#include "disclose/solve.hpp"

namespace disclose {

GridSpec GridSpec::uniform(const StateActionModel& m, int n_states, int n_actions) {
  if (n_states < 2 || n_actions < 2) throw DomainError("grid needs at least 2 points per axis");
  GridSpec g;
  g.state_points = VectorXd::LinSpaced(n_states, m.state_domain.lo, m.state_domain.hi);
  double lo_br = std::numeric_limits<double>::infinity(), hi_br = -lo_br;
  for (Eigen::Index i = 0; i < g.state_points.size(); ++i) {
    const double a = best_response(m, Posterior::point_mass(g.state_points[i]));
    lo_br = std::min(lo_br, a);
    hi_br = std::max(hi_br, a);
  }
  double lo = std::max(0.5 * lo_br, m.action_domain.lo);
  double hi = std::min(1.5 * hi_br, m.action_domain.hi);
  if (!(hi > lo)) {  // collapsed auto range: fall back to the full domain
    lo = m.action_domain.lo;
    hi = m.action_domain.hi;
  }
  g.action_points = VectorXd::LinSpaced(n_actions, lo, hi);
  return g;
}

GridSpec GridSpec::uniform_rect(Interval states, Interval actions, int n_states, int n_actions) {
  if (n_states < 2 || n_actions < 2) throw DomainError("grid needs at least 2 points per axis");
  if (!(states.hi > states.lo) || !(actions.hi > actions.lo))
    throw DomainError("grid rectangle must have positive extent");
  GridSpec g;
  g.state_points = VectorXd::LinSpaced(n_states, states.lo, states.hi);
  g.action_points = VectorXd::LinSpaced(n_actions, actions.lo, actions.hi);
  return g;
}

void validate_grid(const StateActionModel& m, const GridSpec& grid) {
  if (grid.n_states() < 2 || grid.n_actions() < 2)
    throw DomainError("grid needs at least 2 points per axis");
  for (Eigen::Index i = 0; i < grid.n_states(); ++i) {
    if (!m.state_domain.contains(grid.state_points[i]))
      throw DomainError("grid state point outside the model domain");
    if (i > 0 && !(grid.state_points[i] > grid.state_points[i - 1]))
      throw DomainError("grid state points must be strictly increasing");
  }
  for (Eigen::Index j = 0; j < grid.n_actions(); ++j) {
    if (!m.action_domain.contains(grid.action_points[j]))
      throw DomainError("grid action point outside the model domain");
    if (j > 0 && !(grid.action_points[j] > grid.action_points[j - 1]))
      throw DomainError("grid action points must be strictly increasing");
  }
}

}  // namespace disclose
