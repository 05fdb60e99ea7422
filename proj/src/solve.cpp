#include "disclose/solve.hpp"

#include <cmath>
#include <limits>

namespace disclose {

namespace {

constexpr int kScanPoints = 64;
constexpr double kBracketWidth = 1e-13;

double foc(const StateActionModel& m, const Posterior& post, double a) {
  double s = 0;
  for (Eigen::Index i = 0; i < post.size(); ++i)
    s += post.probs()[i] * m.Ua(post.states()[i], a);
  return s;
}

double foc_slope(const StateActionModel& m, const Posterior& post, double a) {
  double s = 0;
  for (Eigen::Index i = 0; i < post.size(); ++i)
    s += post.probs()[i] * m.Uaa(post.states()[i], a);
  return s;
}

}  // namespace

double best_response(const StateActionModel& m, const Posterior& post, double foc_tol) {
  require_in_state_domain(m, post);
  const double lo = m.action_domain.lo, hi = m.action_domain.hi;
  if (!(hi > lo)) throw DomainError("empty action domain");

  // bracket: g is strictly decreasing, so scan for the first sign change;
  // an exact zero (degenerate corner posteriors hit this) is already a root
  double blo = lo, bhi = hi;
  double prev_x = lo, prev_g = foc(m, post, lo);
  bool bracketed = false;
  if (prev_g == 0.0) return lo;
  for (int k = 1; k < kScanPoints; ++k) {
    const double x = lo + (hi - lo) * k / (kScanPoints - 1);
    const double gx = foc(m, post, x);
    if (gx == 0.0) return x;
    if (prev_g > 0 && gx < 0) {
      blo = prev_x;
      bhi = x;
      bracketed = true;
      break;
    }
    prev_x = x;
    prev_g = gx;
  }
  if (!bracketed)
    throw NoInteriorRoot("expected marginal utility has no sign change on the action domain");

  // bisect to a fixed absolute width (or until the interval is a few ulps)
  while (bhi - blo > kBracketWidth &&
         bhi - blo > 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(blo), std::abs(bhi))) {
    const double mid = 0.5 * (blo + bhi);
    const double gm = foc(m, post, mid);
    if (gm == 0.0) return mid;
    (gm > 0 ? blo : bhi) = mid;
  }

  // one Newton polish off the midpoint, kept only when it improves
  double a = 0.5 * (blo + bhi);
  double ga = foc(m, post, a);
  const double slope = foc_slope(m, post, a);
  if (slope != 0) {
    const double an = a - ga / slope;
    if (an >= m.action_domain.lo && an <= m.action_domain.hi) {
      const double gn = foc(m, post, an);
      if (std::abs(gn) <= std::abs(ga)) {
        a = an;
        ga = gn;
      }
    }
  }
  (void)foc_tol;  // |g| lands near machine precision; callers assert against foc_tol
  return a;
}

double ratio(const StateActionModel& m, double state, double action) {
  if (!m.state_domain.contains(state) || !m.action_domain.contains(action))
    throw DomainError("ratio evaluated outside the domain rectangle");
  const double uaa = m.Uaa(state, action);
  if (!(uaa < 0)) throw ConcavityViolation("ratio needs U_aa < 0");
  return m.Va(state, action) / (-uaa);
}

double sender_value(const StateActionModel& m, const Posterior& post) {
  const double a = best_response(m, post);
  double s = 0;
  for (Eigen::Index i = 0; i < post.size(); ++i)
    s += post.probs()[i] * m.V(post.states()[i], a);
  return s;
}

Partials finite_difference_partials(const StateActionModel& m, double state, double action,
                                    double step) {
  if (!(step > 0)) throw DomainError("finite-difference step must be positive");
  if (!m.state_domain.contains(state - step) || !m.state_domain.contains(state + step) ||
      !m.action_domain.contains(action - 2 * step) ||
      !m.action_domain.contains(action + 2 * step))
    throw DomainError("finite-difference stencil leaves the domain rectangle");
  Partials p;
  p.Uaw = (m.Ua(state + step, action) - m.Ua(state - step, action)) / (2 * step);
  p.Uaaw = (m.Uaa(state + step, action) - m.Uaa(state - step, action)) / (2 * step);
  p.Vaw = (m.Va(state + step, action) - m.Va(state - step, action)) / (2 * step);
  p.Uaaa = (m.Uaa(state, action + step) - m.Uaa(state, action - step)) / (2 * step);
  p.Vaa = (m.Va(state, action + step) - m.Va(state, action - step)) / (2 * step);
  return p;
}

Partials model_partials(const StateActionModel& m, double state, double action) {
  if (m.has_higher_partials()) {
    Partials p;
    p.Uaw = m.Uaw(state, action);
    p.Uaaa = m.Uaaa(state, action);
    p.Uaaw = m.Uaaw(state, action);
    p.Vaa = m.Vaa(state, action);
    p.Vaw = m.Vaw(state, action);
    return p;
  }
  const double dw = std::min(state - m.state_domain.lo, m.state_domain.hi - state);
  const double da = std::min(action - m.action_domain.lo, m.action_domain.hi - action);
  const double step = std::min({m.fd_step, 0.5 * dw, 0.25 * da});
  if (!(step > 0))
    throw MissingDerivatives(
        "higher partials unavailable: no closed forms and the point sits on the domain boundary");
  return finite_difference_partials(m, state, action, step);
}

}  // namespace disclose
