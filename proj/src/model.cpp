#include "disclose/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace disclose {

Posterior::Posterior(VectorXd states, VectorXd probs) {
  if (states.size() == 0 || states.size() != probs.size())
    throw DomainError("posterior needs matching, non-empty state and probability lists");
  const Eigen::Index n = states.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return states[a] < states[b]; });
  states_.resize(n);
  probs_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    states_[i] = states[order[static_cast<std::size_t>(i)]];
    probs_[i] = probs[order[static_cast<std::size_t>(i)]];
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(states_[i]) || !std::isfinite(probs_[i]))
      throw DomainError("posterior entries must be finite");
    if (probs_[i] <= 0) throw DomainError("posterior probabilities must be strictly positive");
    if (i > 0 && states_[i] <= states_[i - 1])
      throw DomainError("posterior support states must be distinct");
  }
  if (std::abs(probs_.sum() - 1.0) > 1e-12)
    throw DomainError("posterior probabilities must sum to 1 within 1e-12");
}

Posterior Posterior::point_mass(double state) {
  VectorXd s(1), p(1);
  s << state;
  p << 1.0;
  return Posterior(std::move(s), std::move(p));
}

Posterior Posterior::two_point(double s1, double s2, double p1) {
  if (!(p1 > 0 && p1 < 1)) throw DomainError("two-point posterior needs p1 strictly in (0,1)");
  VectorXd s(2), p(2);
  s << s1, s2;
  p << p1, 1.0 - p1;
  return Posterior(std::move(s), std::move(p));
}

void require_in_state_domain(const StateActionModel& m, const Posterior& post) {
  for (Eigen::Index i = 0; i < post.size(); ++i)
    if (!m.state_domain.contains(post.states()[i]))
      throw DomainError("posterior support leaves the state domain");
}

void validate_model(const StateActionModel& m, int n_states, int n_actions) {
  if (n_states < 2 || n_actions < 2) throw DomainError("validation grid too small");
  const VectorXd ws = VectorXd::LinSpaced(n_states, m.state_domain.lo, m.state_domain.hi);
  const VectorXd as = VectorXd::LinSpaced(n_actions, m.action_domain.lo, m.action_domain.hi);
  for (Eigen::Index i = 0; i < ws.size(); ++i) {
    for (Eigen::Index j = 0; j < as.size(); ++j) {
      if (!(m.Uaa(ws[i], as[j]) < 0))
        throw ConcavityViolation("U_aa >= 0 inside the domain rectangle");
    }
    // strict concavity makes U_a(w, .) decreasing: a crossing needs
    // U_a >= 0 at the bottom and <= 0 at the top of the action domain
    const double glo = m.Ua(ws[i], as[0]);
    const double ghi = m.Ua(ws[i], as[as.size() - 1]);
    if (!(glo >= 0 && ghi <= 0))
      throw NoInteriorRoot("U_a does not cross zero on the action domain for some state");
  }
}

}  // namespace disclose
