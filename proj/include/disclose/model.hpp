#pragma once
#include <Eigen/Dense>
#include <functional>
#include <string>

#include "disclose/errors.hpp"

namespace disclose {

using Eigen::VectorXd;

// (state, action) -> value
using ScalarField = std::function<double(double, double)>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Two-party utility model over a rectangle of (state, action) pairs.
// U is the acting party's utility, strictly concave in the action; V is the
// designing party's utility. U, V, Ua, Uaa, Va are required; the higher
// partials are optional and central finite differences fill in when absent.
// Instances are immutable after construction and safe to share across threads.
struct StateActionModel {
  Interval state_domain;
  Interval action_domain;
  ScalarField U, V, Ua, Uaa, Va;
  ScalarField Uaw, Uaaa, Uaaw, Vaa, Vaw;  // optional, may be empty
  bool linear_receiver_form = false;      // U_a = lambda * (state - action), lambda > 0
  std::string family;                     // reporting tag ("crra", "quadratic_cs", ...)
  double fd_step = 1e-4;                  // default step for fallback differences

  bool has_higher_partials() const { return Uaw && Uaaa && Uaaw && Vaa && Vaw; }
};

struct Partials {
  double Uaw = 0, Uaaa = 0, Uaaw = 0, Vaa = 0, Vaw = 0;
};

// Finite-support distribution over states. Support is kept strictly
// increasing (canonical order) so posterior equality is well defined;
// probabilities are strictly positive and sum to 1 within 1e-12.
class Posterior {
 public:
  Posterior(VectorXd states, VectorXd probs);
  static Posterior point_mass(double state);
  static Posterior two_point(double s1, double s2, double p1);

  const VectorXd& states() const { return states_; }
  const VectorXd& probs() const { return probs_; }
  Eigen::Index size() const { return states_.size(); }
  double mean() const { return states_.dot(probs_); }

 private:
  VectorXd states_, probs_;
};

void require_in_state_domain(const StateActionModel& m, const Posterior& post);

// Samples the rectangle and throws ConcavityViolation if U_aa >= 0 anywhere,
// NoInteriorRoot if some state's marginal utility does not cross zero across
// the action domain (an exact zero at an endpoint counts as a crossing).
void validate_model(const StateActionModel& m, int n_states = 17, int n_actions = 33);

}  // namespace disclose
