#include "disclose/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "disclose/solve.hpp"

namespace disclose {

namespace {

using Eigen::Index;
using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;

// 16-point Gauss-Legendre rule on [-1, 1] (positive half; mirror for the rest)
constexpr double kGlNode[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <class F>
double gauss16(const F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double s = 0;
  for (int i = 0; i < 8; ++i)
    s += kGlWeight[i] * (f(c - h * kGlNode[i]) + f(c + h * kGlNode[i]));
  return h * s;
}

template <class F>
double composite_gauss(const F& f, double lo, double hi, int panels) {
  double s = 0;
  for (int k = 0; k < panels; ++k)
    s += gauss16(f, lo + (hi - lo) * k / panels, lo + (hi - lo) * (k + 1) / panels);
  return s;
}

// taken + rest == prob bitwise: one of the two subtractions is Sterbenz-exact
// and the re-subtraction makes the pair consistent either way
void exact_mass_split(double prob, double theta, double& taken, double& rest) {
  taken = theta * prob;
  rest = prob - taken;
  taken = prob - rest;
}

struct HullPoint {
  double x, y;
  Index idx;
};

double cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// indices of the upper hull, left to right (input sorted by x, distinct)
std::vector<Index> upper_hull(const std::vector<HullPoint>& pts) {
  std::vector<HullPoint> st;
  for (const HullPoint& p : pts) {
    while (st.size() >= 2 && cross(st[st.size() - 2], st.back(), p) >= 0) st.pop_back();
    st.push_back(p);
  }
  std::vector<Index> out;
  out.reserve(st.size());
  for (const HullPoint& p : st) out.push_back(p.idx);
  return out;
}

}  // namespace

const char* to_string(EnvelopeVerdict v) {
  return v == EnvelopeVerdict::FullDisclosureOptimal ? "FULL_DISCLOSURE_OPTIMAL"
                                                     : "FULL_DISCLOSURE_SUBOPTIMAL";
}

BinarySplitResult binary_split_gain(const StateActionModel& m, double w1, double w2,
                                    double p1) {
  if (w1 == w2) throw DomainError("binary split needs two distinct states");
  if (!(p1 > 0) || !(p1 < 1)) throw DomainError("p1 must lie strictly inside (0, 1)");

  double a1 = best_response(m, Posterior::point_mass(w1));
  double a2 = best_response(m, Posterior::point_mass(w2));

  BinarySplitResult r;
  if (a1 <= a2) {
    r.state_low = w1;
    r.state_high = w2;
    r.prob_low = p1;
    r.a_low = a1;
    r.a_high = a2;
  } else {
    r.state_low = w2;
    r.state_high = w1;
    r.prob_low = 1 - p1;
    r.a_low = a2;
    r.a_high = a1;
  }
  const double ph = 1 - r.prob_low;
  r.a_pool = best_response(m, Posterior::two_point(w1, w2, p1));
  r.k = r.prob_low * m.Ua(r.state_low, r.a_pool);
  r.gain = ph * (m.V(r.state_high, r.a_high) - m.V(r.state_high, r.a_pool)) -
           r.prob_low * (m.V(r.state_low, r.a_pool) - m.V(r.state_low, r.a_low));
  r.effort_delta = r.prob_low * r.a_low + ph * r.a_high - r.a_pool;
  return r;
}

double gain_via_integrals(const StateActionModel& m, double w1, double w2, double p1,
                          int quad_points) {
  const BinarySplitResult s = binary_split_gain(m, w1, w2, p1);
  const int panels = std::max(1, quad_points / 16);
  const auto va_hi = [&](double a) { return m.Va(s.state_high, a); };
  const auto va_lo = [&](double a) { return m.Va(s.state_low, a); };
  return (1 - s.prob_low) * composite_gauss(va_hi, s.a_pool, s.a_high, panels) -
         s.prob_low * composite_gauss(va_lo, s.a_low, s.a_pool, panels);
}

double change_of_variables_check(const StateActionModel& m, double w1, double w2, double p1,
                                 int samples) {
  if (samples < 2) throw DomainError("need at least two samples per interval");
  const BinarySplitResult s = binary_split_gain(m, w1, w2, p1);
  if (!(s.a_low < s.a_pool) || !(s.a_pool < s.a_high))
    throw DomainError("pooled action does not separate the individual optima");

  const auto x1 = [&](double a) { return s.prob_low * m.Ua(s.state_low, a); };
  const auto x2 = [&](double a) { return -(1 - s.prob_low) * m.Ua(s.state_high, a); };

  double prev = x1(s.a_low);
  for (int i = 1; i < samples; ++i) {
    const double a = s.a_low + (s.a_pool - s.a_low) * i / (samples - 1);
    const double cur = x1(a);
    if (!(cur < prev))
      throw MonotonicityViolation("x1 is not strictly decreasing on [a_low, a_pool]");
    prev = cur;
  }
  prev = x2(s.a_pool);
  for (int i = 1; i < samples; ++i) {
    const double a = s.a_pool + (s.a_high - s.a_pool) * i / (samples - 1);
    const double cur = x2(a);
    if (!(cur > prev))
      throw MonotonicityViolation("x2 is not strictly increasing on [a_pool, a_high]");
    prev = cur;
  }

  // both maps should start at k and end at 0
  const double res = std::max({std::abs(x1(s.a_low) - 0.0), std::abs(x1(s.a_pool) - s.k),
                               std::abs(x2(s.a_pool) - s.k), std::abs(x2(s.a_high) - 0.0)});
  return res;
}

Decomposition three_message_decomposition(const StateActionModel& m, const Posterior& post,
                                          int idx1, int idx2) {
  const Index n = post.size();
  if (n < 2) throw DomainError("decomposition needs at least two support states");
  if (idx1 < 0 || idx2 < 0 || idx1 >= n || idx2 >= n || idx1 == idx2)
    throw DomainError("bad state indices");

  const double a_pool = best_response(m, post);
  const double s1 = post.states()[idx1], s2 = post.states()[idx2];
  const double p1 = post.probs()[idx1], p2 = post.probs()[idx2];
  const double u1 = m.Ua(s1, a_pool), u2 = m.Ua(s2, a_pool);
  if (!(u1 < 0) || !(u2 > 0))
    throw NoOpposingStates("need U_a < 0 at the first state and > 0 at the second");

  const double ratio = -(p1 * u1) / (p2 * u2);  // > 0
  const double cap = n == 2 ? 1.0 : 0.5;
  const double theta1 = ratio <= 1 ? cap : cap / ratio;
  const double theta2 = theta1 * ratio;
  if (!(theta1 > 0) || !(theta2 > 0) || theta1 > cap || theta2 > cap * (1 + 1e-12))
    throw InfeasibleWeights("peeling fractions fell outside (0, cap]");

  double t1, r1, t2, r2;
  exact_mass_split(p1, theta1, t1, r1);
  exact_mass_split(p2, std::min(theta2, cap), t2, r2);

  Decomposition d;
  d.pooled_action = a_pool;
  d.comp0_residual = std::abs(t1 * u1 + t2 * u2);
  if (d.comp0_residual > 1e-9)
    throw InfeasibleWeights("weighted marginal utilities failed to cancel");

  d.m1.masses = VectorXd::Zero(n);
  d.m1.masses[idx1] = t1;
  d.m1.weight = t1;
  if (t1 > 0) d.m1.conditional = Posterior::point_mass(s1);

  d.m2.masses = VectorXd::Zero(n);
  d.m2.masses[idx2] = t2;
  d.m2.weight = t2;
  if (t2 > 0) d.m2.conditional = Posterior::point_mass(s2);

  d.mc.masses = post.probs();
  d.mc.masses[idx1] = r1;
  d.mc.masses[idx2] = r2;
  d.mc.weight = d.mc.masses.sum();
  if (d.mc.weight > 0) {
    std::vector<double> ws, ps;
    for (Index i = 0; i < n; ++i)
      if (d.mc.masses[i] > 0) {
        ws.push_back(post.states()[i]);
        ps.push_back(d.mc.masses[i] / d.mc.weight);
      }
    VectorXd wv = Eigen::Map<const VectorXd>(ws.data(), static_cast<Index>(ws.size()));
    VectorXd pv = Eigen::Map<const VectorXd>(ps.data(), static_cast<Index>(ps.size()));
    d.mc.conditional = Posterior(wv, pv);
  }
  return d;
}

EnvelopeResult concavify_2state(const StateActionModel& m, std::pair<double, double> states,
                                double prior_p, int resolution) {
  if (resolution < 17) throw DomainError("resolution must be at least 17");
  if (!(prior_p > 0) || !(prior_p < 1))
    throw DomainError("the prior must put interior mass on both states");
  const double lo = std::min(states.first, states.second);
  const double hi = std::max(states.first, states.second);
  if (lo == hi) throw DomainError("states must be distinct");

  std::vector<double> ps(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i) ps[static_cast<std::size_t>(i)] = i / double(resolution - 1);
  ps.push_back(prior_p);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  EnvelopeResult r;
  const Index n = static_cast<Index>(ps.size());
  r.sample_values.resize(n);
  r.sample_posteriors.reserve(ps.size());
  for (Index i = 0; i < n; ++i) {
    const double p = ps[static_cast<std::size_t>(i)];
    Posterior post = p == 0   ? Posterior::point_mass(lo)
                     : p == 1 ? Posterior::point_mass(hi)
                              : Posterior::two_point(lo, hi, 1 - p);
    r.sample_values[i] = sender_value(m, post);
    r.sample_posteriors.push_back(std::move(post));
  }

  // full-disclosure chord through the degenerate endpoints
  const double v0 = r.sample_values[0], v1 = r.sample_values[n - 1];
  r.full_disclosure_value = (1 - prior_p) * v0 + prior_p * v1;

  double worst_over = -std::numeric_limits<double>::infinity();
  Index worst_idx = 0;
  for (Index i = 0; i < n; ++i) {
    const double p = ps[static_cast<std::size_t>(i)];
    const double over = r.sample_values[i] - ((1 - p) * v0 + p * v1);
    if (over > worst_over) {
      worst_over = over;
      worst_idx = i;
    }
  }
  if (worst_over > kEnvTol) {
    r.verdict = EnvelopeVerdict::FullDisclosureSuboptimal;
    r.margin = worst_over;
    r.margin_argmax = worst_idx;
  } else {
    r.verdict = EnvelopeVerdict::FullDisclosureOptimal;
    // largest dominance gap of the chord over the sampled values
    double best = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      const double p = ps[static_cast<std::size_t>(i)];
      const double gap = ((1 - p) * v0 + p * v1) - r.sample_values[i];
      if (gap > best) {
        best = gap;
        r.margin_argmax = i;
      }
    }
    r.margin = best;
  }

  std::vector<HullPoint> pts;
  pts.reserve(ps.size());
  for (Index i = 0; i < n; ++i)
    pts.push_back({ps[static_cast<std::size_t>(i)], r.sample_values[i], i});
  const std::vector<Index> hull = upper_hull(pts);

  for (std::size_t h = 0; h < hull.size(); ++h) {
    const Index i = hull[h];
    const double x = ps[static_cast<std::size_t>(i)];
    if (x == prior_p) {
      r.envelope_value_at_prior = r.sample_values[i];
      r.optimal_split = {{r.sample_posteriors[static_cast<std::size_t>(i)], 1.0}};
      return r;
    }
    if (h + 1 < hull.size()) {
      const Index j = hull[h + 1];
      const double xr = ps[static_cast<std::size_t>(j)];
      if (x < prior_p && prior_p < xr) {
        const double lam = (prior_p - x) / (xr - x);
        r.envelope_value_at_prior =
            (1 - lam) * r.sample_values[i] + lam * r.sample_values[j];
        r.optimal_split = {{r.sample_posteriors[static_cast<std::size_t>(i)], 1 - lam},
                           {r.sample_posteriors[static_cast<std::size_t>(j)], lam}};
        return r;
      }
    }
  }
  throw DomainError("prior fell outside the hull span");  // unreachable
}

EnvelopeResult concavify_3state(const StateActionModel& m, const std::array<double, 3>& states,
                                const Posterior& prior, int resolution) {
  std::array<double, 3> w = states;
  std::sort(w.begin(), w.end());
  if (w[0] == w[1] || w[1] == w[2])
    throw DegenerateSimplex("the three states must be distinct");
  if (resolution < 4) throw DomainError("resolution must be at least 4");
  if (prior.size() != 3 || prior.states()[0] != w[0] || prior.states()[1] != w[1] ||
      prior.states()[2] != w[2])
    throw DomainError("the prior must have full support on the three states");

  const double q1 = prior.probs()[1], q2 = prior.probs()[2];

  EnvelopeResult r;
  std::vector<Vector3d> bary;
  const int side = resolution - 1;
  for (int i = 0; i <= side; ++i)
    for (int j = 0; j + i <= side; ++j)
      bary.emplace_back((side - i - j) / double(side), i / double(side), j / double(side));
  bary.emplace_back(prior.probs()[0], q1, q2);

  const Index n = static_cast<Index>(bary.size());
  r.sample_values.resize(n);
  r.sample_posteriors.reserve(bary.size());
  for (Index t = 0; t < n; ++t) {
    const Vector3d& b = bary[static_cast<std::size_t>(t)];
    std::vector<double> ws, psv;
    for (int s = 0; s < 3; ++s)
      if (b[s] > 0) {
        ws.push_back(w[static_cast<std::size_t>(s)]);
        psv.push_back(b[s]);
      }
    VectorXd wv = Eigen::Map<const VectorXd>(ws.data(), static_cast<Index>(ws.size()));
    VectorXd pv = Eigen::Map<const VectorXd>(psv.data(), static_cast<Index>(psv.size()));
    Posterior post(wv, pv);
    r.sample_values[t] = sender_value(m, post);
    r.sample_posteriors.push_back(std::move(post));
  }

  // full-disclosure plane through the three degenerate corners
  Vector3d corner;
  for (int s = 0; s < 3; ++s)
    corner[s] = m.V(w[static_cast<std::size_t>(s)],
                    best_response(m, Posterior::point_mass(w[static_cast<std::size_t>(s)])));
  r.full_disclosure_value = prior.probs().dot(corner);

  double worst_over = -std::numeric_limits<double>::infinity();
  Index worst_idx = 0;
  for (Index t = 0; t < n; ++t) {
    const double plane = bary[static_cast<std::size_t>(t)].dot(corner);
    const double over = r.sample_values[t] - plane;
    if (over > worst_over) {
      worst_over = over;
      worst_idx = t;
    }
  }
  if (worst_over > kEnvTol) {
    r.verdict = EnvelopeVerdict::FullDisclosureSuboptimal;
    r.margin = worst_over;
    r.margin_argmax = worst_idx;
  } else {
    r.verdict = EnvelopeVerdict::FullDisclosureOptimal;
    double best = -std::numeric_limits<double>::infinity();
    for (Index t = 0; t < n; ++t) {
      const double gap = bary[static_cast<std::size_t>(t)].dot(corner) - r.sample_values[t];
      if (gap > best) {
        best = gap;
        r.margin_argmax = t;
      }
    }
    r.margin = best;
  }

  // envelope value at the prior: max sum lambda_t * value_t subject to
  // sum lambda_t * (b1, b2, 1)_t = (q1, q2, 1), lambda >= 0 -- a small dense
  // primal simplex started from the three pure corners
  std::vector<Index> corner_idx(3, -1);
  for (Index t = 0; t < n; ++t) {
    const Vector3d& b = bary[static_cast<std::size_t>(t)];
    for (int s = 0; s < 3; ++s)
      if (b[s] == 1) corner_idx[static_cast<std::size_t>(s)] = t;
  }
  if (corner_idx[0] < 0 || corner_idx[1] < 0 || corner_idx[2] < 0)
    throw DomainError("lattice is missing a corner");  // cannot happen

  std::array<Index, 3> basis = {corner_idx[0], corner_idx[1], corner_idx[2]};
  const auto col = [&](Index t) {
    const Vector3d& b = bary[static_cast<std::size_t>(t)];
    return Vector3d(b[1], b[2], 1.0);
  };
  const Vector3d rhs(q1, q2, 1.0);

  Matrix3d B;
  for (int s = 0; s < 3; ++s) B.col(s) = col(basis[static_cast<std::size_t>(s)]);
  Vector3d lam = B.partialPivLu().solve(rhs);

  const long max_iter = 20 * static_cast<long>(n) + 200;
  bool bland = false;
  for (long iter = 0; iter < max_iter; ++iter) {
    Vector3d cb;
    for (int s = 0; s < 3; ++s) cb[s] = r.sample_values[basis[static_cast<std::size_t>(s)]];
    const Eigen::PartialPivLU<Matrix3d> lu(B);
    const Vector3d y = Matrix3d(B.transpose()).partialPivLu().solve(cb);  // multipliers

    Index enter = -1;
    double best_rc = 1e-9;
    for (Index t = 0; t < n; ++t) {
      if (t == basis[0] || t == basis[1] || t == basis[2]) continue;
      const double rc = r.sample_values[t] - y.dot(col(t));
      if (bland) {
        if (rc > 1e-9) {
          enter = t;
          break;
        }
      } else if (rc > best_rc) {
        best_rc = rc;
        enter = t;
      }
    }
    if (enter < 0) break;  // optimal

    const Vector3d d = lu.solve(col(enter));
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 3; ++s)
      if (d[s] > 1e-12) {
        const double ratio = lam[s] / d[s];
        if (ratio < best_ratio - 1e-15) {
          best_ratio = ratio;
          leave = s;
        }
      }
    if (leave < 0) break;  // unbounded cannot happen on a bounded polytope
    if (best_ratio < 1e-14 && !bland) bland = true;  // degenerate pivot: switch rules

    basis[static_cast<std::size_t>(leave)] = enter;
    for (int s = 0; s < 3; ++s) B.col(s) = col(basis[static_cast<std::size_t>(s)]);
    lam = B.partialPivLu().solve(rhs);
  }

  r.envelope_value_at_prior = 0;
  for (int s = 0; s < 3; ++s) {
    r.envelope_value_at_prior += lam[s] * r.sample_values[basis[static_cast<std::size_t>(s)]];
    if (lam[s] > 1e-12)
      r.optimal_split.push_back(
          {r.sample_posteriors[static_cast<std::size_t>(basis[static_cast<std::size_t>(s)])],
           lam[s]});
  }
  return r;
}

PairScanReport binary_pair_scan(const StateActionModel& m, const std::vector<double>& support,
                                int pi_grid) {
  if (support.size() < 2) throw DomainError("need at least two support states");
  if (pi_grid < 1) throw DomainError("pi_grid must be positive");

  PairScanReport rep;
  rep.min_gain = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = i + 1; j < support.size(); ++j)
      for (int k = 1; k <= pi_grid; ++k) {
        const double p1 = k / double(pi_grid + 1);
        const BinarySplitResult s = binary_split_gain(m, support[i], support[j], p1);
        PairScanRow row;
        row.w1 = support[i];
        row.w2 = support[j];
        row.p1 = p1;
        row.gain = s.gain;
        row.effort_delta = s.effort_delta;
        if (row.gain < rep.min_gain) {
          rep.min_gain = row.gain;
          rep.worst_index = static_cast<Index>(rep.rows.size());
        }
        rep.rows.push_back(row);
      }
  return rep;
}

}  // namespace disclose
