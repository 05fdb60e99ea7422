#pragma once
#include "disclose/model.hpp"

namespace disclose {

// Evaluation lattice for the condition checkers. Both axes are strictly
// increasing and lie inside the model's rectangle.
struct GridSpec {
  VectorXd state_points;
  VectorXd action_points;

  Eigen::Index n_states() const { return state_points.size(); }
  Eigen::Index n_actions() const { return action_points.size(); }

  // Uniform lattice over the state domain, with the action range auto-set to
  // [0.5 * min_w a*(w), 1.5 * max_w a*(w)] (clamped to the action domain) so
  // both marginal-utility sign regions are populated.
  static GridSpec uniform(const StateActionModel& m, int n_states, int n_actions);

  // Uniform lattice over an explicit rectangle.
  static GridSpec uniform_rect(Interval states, Interval actions, int n_states,
                               int n_actions);
};

void validate_grid(const StateActionModel& m, const GridSpec& grid);

}  // namespace disclose
