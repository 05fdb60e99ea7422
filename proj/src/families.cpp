#include "disclose/families.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "disclose/solve.hpp"

namespace disclose {

namespace {

constexpr double kRelMarginTol = 1e-9;
constexpr double kDerivTol = 1e-9;

void require_positive_point(double state, double action) {
  if (!(state > 0) || !(action > 0))
    throw DomainError("power-utility family needs strictly positive state and action");
}

// shared tail for the pointwise family checks below (same semantics as the
// grid condition checks: sort by margin, keep 16, status from tolerance)
void finalize_pointwise(ConditionVerdict& v, std::vector<Witness>& cands, double tol) {
  v.margin_tol = tol;
  if (cands.empty()) {
    v.status = VerdictStatus::Vacuous;
    v.min_margin = 0;
    return;
  }
  std::sort(cands.begin(), cands.end(), [](const Witness& a, const Witness& b) {
    if (a.margin != b.margin) return a.margin < b.margin;
    if (a.state1 != b.state1) return a.state1 < b.state1;
    return a.action1 < b.action1;
  });
  v.min_margin = cands.front().margin;
  if (cands.size() > 16) cands.resize(16);
  v.witnesses = std::move(cands);
  if (v.min_margin > v.margin_tol)
    v.status = VerdictStatus::HoldsStrictly;
  else if (v.min_margin < -v.margin_tol)
    v.status = VerdictStatus::Violated;
  else
    v.status = VerdictStatus::HoldsWeakly;
}

double norm_scale(double l, double r) { return std::max({std::abs(l), std::abs(r), 1e-300}); }

}  // namespace

void validate(const CrraParams& p) {
  if (!(p.gamma >= 0) || !(p.rho >= 0))
    throw InvalidParams("curvatures must be non-negative");
  if (std::abs(1 - p.gamma) < 1e-6 || std::abs(1 - p.rho) < 1e-6)
    throw InvalidParams("curvatures must stay 1e-6 away from the log point 1");
  if (!(p.delta > 0) || !(p.delta < 1) || !(p.kappa > 0) || !(p.kappa < 1))
    throw InvalidParams("delta and kappa must lie strictly inside (0, 1)");
}

double crra_best_response_closed_form(const CrraParams& p, double state) {
  if (!(state > 0)) throw DomainError("state must be positive");
  const double b = p.kappa * std::pow(p.delta * state, 1 - p.gamma);
  const double e = p.kappa * (1 - p.gamma) - 1;
  return std::pow(b, -1 / e);
}

double crra_ratio_closed_form(const CrraParams& p, double state, double action) {
  require_positive_point(state, action);
  const double b = p.kappa * std::pow(p.delta * state, 1 - p.gamma);
  const double e = p.kappa * (1 - p.gamma) - 1;
  const double ua_plus_1 = b * std::pow(action, e);  // U_a + 1 without cancellation
  const double c = std::pow(1 - p.delta, 1 - p.rho) * std::pow(p.delta, p.rho - 1) *
                   std::pow(p.kappa, (p.rho - p.gamma) / (1 - p.gamma)) /
                   (1 - p.kappa * (1 - p.gamma));
  return c * std::pow(ua_plus_1, (p.gamma - p.rho) / (1 - p.gamma)) *
         std::pow(action, (1 - p.rho) / (1 - p.gamma));
}

StateActionModel crra_model(const CrraParams& p, Interval state_domain,
                            std::optional<Interval> action_domain) {
  validate(p);
  if (!(state_domain.lo > 0)) throw InvalidParams("state domain must be strictly positive");
  if (!(state_domain.hi > state_domain.lo)) throw InvalidParams("empty state domain");

  const double g = p.gamma, r = p.rho, d = p.delta, k = p.kappa;
  const double e = k * (1 - g) - 1;  // a-exponent of U_a + 1; always negative

  StateActionModel m;
  m.family = "crra";
  m.state_domain = state_domain;

  if (action_domain) {
    if (!(action_domain->lo > 0)) throw InvalidParams("action domain must be strictly positive");
    m.action_domain = *action_domain;
  } else {
    const double a1 = crra_best_response_closed_form(p, state_domain.lo);
    const double a2 = crra_best_response_closed_form(p, state_domain.hi);
    const double lo = std::min(a1, a2), hi = std::max(a1, a2);
    m.action_domain = {std::min(1e-6, 0.01 * lo), 3 * hi};
  }

  m.U = [=](double w, double a) {
    require_positive_point(w, a);
    return std::pow(d * w, 1 - g) * std::pow(a, k * (1 - g)) / (1 - g) - a;
  };
  m.Ua = [=](double w, double a) {
    require_positive_point(w, a);
    return k * std::pow(d * w, 1 - g) * std::pow(a, e) - 1;
  };
  m.Uaa = [=](double w, double a) {
    require_positive_point(w, a);
    return k * std::pow(d * w, 1 - g) * e * std::pow(a, e - 1);
  };
  m.Uaaa = [=](double w, double a) {
    require_positive_point(w, a);
    return k * std::pow(d * w, 1 - g) * e * (e - 1) * std::pow(a, e - 2);
  };
  m.Uaw = [=](double w, double a) {
    require_positive_point(w, a);
    return k * (1 - g) * d * std::pow(d * w, -g) * std::pow(a, e);
  };
  m.Uaaw = [=](double w, double a) {
    require_positive_point(w, a);
    return k * (1 - g) * d * std::pow(d * w, -g) * e * std::pow(a, e - 1);
  };
  m.V = [=](double w, double a) {
    require_positive_point(w, a);
    return std::pow((1 - d) * w, 1 - r) * std::pow(a, k * (1 - r)) / (1 - r);
  };
  m.Va = [=](double w, double a) {
    require_positive_point(w, a);
    return k * std::pow((1 - d) * w, 1 - r) * std::pow(a, k * (1 - r) - 1);
  };
  m.Vaa = [=](double w, double a) {
    require_positive_point(w, a);
    return k * (k * (1 - r) - 1) * std::pow((1 - d) * w, 1 - r) * std::pow(a, k * (1 - r) - 2);
  };
  m.Vaw = [=](double w, double a) {
    require_positive_point(w, a);
    return k * (1 - r) * (1 - d) * std::pow((1 - d) * w, -r) * std::pow(a, k * (1 - r) - 1);
  };
  return m;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Optimal: return "OPTIMAL";
    case Regime::Suboptimal: return "SUBOPTIMAL";
    case Regime::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

Regime crra_regime(double gamma, double rho) {
  if ((rho <= gamma && gamma < 1) || (rho >= gamma && gamma > 1)) return Regime::Optimal;
  if ((rho < 1 && 1 < gamma) || (gamma < 1 && 1 < rho)) return Regime::Suboptimal;
  return Regime::Inconclusive;
}

double CurveSpec::eval(double a, int deriv) const {
  switch (kind) {
    case Kind::Zero:
      return 0;
    case Kind::Power: {
      if (!(a > 0)) throw DomainError("power curve needs a > 0");
      double c = scale, x = exponent;
      for (int i = 0; i < deriv; ++i) {
        c *= x;
        x -= 1;
      }
      return c * std::pow(a, x);
    }
    case Kind::Log: {
      if (!(a > 0)) throw DomainError("log curve needs a > 0");
      switch (deriv) {
        case 0: return scale * std::log(a);
        case 1: return scale / a;
        case 2: return -scale / (a * a);
        default: return 2 * scale / (a * a * a);
      }
    }
    case Kind::Custom: {
      const std::function<double(double)>* fn = nullptr;
      switch (deriv) {
        case 0: fn = &f; break;
        case 1: fn = &d1; break;
        case 2: fn = &d2; break;
        default: fn = &d3; break;
      }
      if (!*fn) throw MissingDerivatives("custom curve lacks a requested derivative");
      return (*fn)(a);
    }
  }
  throw DomainError("bad curve kind");
}

CurveSpec CurveSpec::power(double scale, double exponent) {
  CurveSpec c;
  c.kind = Kind::Power;
  c.scale = scale;
  c.exponent = exponent;
  return c;
}

CurveSpec CurveSpec::log_curve(double scale) {
  CurveSpec c;
  c.kind = Kind::Log;
  c.scale = scale;
  return c;
}

CurveSpec CurveSpec::zero() { return CurveSpec{}; }

CurveSpec CurveSpec::custom(std::function<double(double)> f, std::function<double(double)> d1,
                            std::function<double(double)> d2, std::function<double(double)> d3) {
  CurveSpec c;
  c.kind = Kind::Custom;
  c.f = std::move(f);
  c.d1 = std::move(d1);
  c.d2 = std::move(d2);
  c.d3 = std::move(d3);
  return c;
}

StateActionModel separable_model(const SeparableParams& p, Interval state_domain,
                                 std::optional<Interval> action_domain) {
  if (p.phi.kind == CurveSpec::Kind::Zero) throw InvalidParams("phi must not be zero");
  if (!(p.delta > 0) || !(p.delta < 1)) throw InvalidParams("delta must lie in (0, 1)");
  if (!(state_domain.hi > state_domain.lo)) throw InvalidParams("empty state domain");

  const std::function<double(double)> beta =
      p.beta ? p.beta : std::function<double(double)>([](double w) { return w; });
  const std::function<double(double)> beta_prime =
      p.beta_prime ? p.beta_prime : std::function<double(double)>([](double) { return 1.0; });
  const CurveSpec phi = p.phi, xi = p.xi;
  const double d = p.delta;

  const auto ua = [=](double w, double a) {
    return d * (beta(w) * phi.eval(a, 1) + xi.eval(a, 1)) - 1;
  };

  Interval act;
  if (action_domain) {
    act = *action_domain;
  } else {
    // bracket the interior first-order roots by halving / doubling from 1
    double lo = 1;
    for (int i = 0; i < 80 && !(ua(state_domain.lo, lo) > 0); ++i) lo /= 2;
    if (!(ua(state_domain.lo, lo) > 0))
      throw InvalidParams("could not bracket the action domain from below");
    double hi = std::max(1.0, 2 * lo);
    for (int i = 0; i < 80 && !(ua(state_domain.hi, hi) < 0); ++i) hi *= 2;
    if (!(ua(state_domain.hi, hi) < 0))
      throw InvalidParams("could not bracket the action domain from above");
    act = {lo, hi};
  }

  // spot-check the standing assumptions on a coarse sample grid
  for (int i = 0; i < 9; ++i) {
    const double w = state_domain.lo + (state_domain.hi - state_domain.lo) * i / 8.0;
    if (!(beta(w) > 0) || !(beta_prime(w) > 0))
      throw InvalidParams("beta and beta' must be positive");
  }
  for (int j = 0; j < 17; ++j) {
    const double a = act.lo + (act.hi - act.lo) * j / 16.0;
    const double p1 = phi.eval(a, 1), p2 = phi.eval(a, 2);
    const double x1 = xi.eval(a, 1), x2 = xi.eval(a, 2);
    if (!(p1 > 0)) throw InvalidParams("phi' must be positive");
    if (!(x1 >= 0)) throw InvalidParams("xi' must be non-negative");
    if (!(x2 + p2 < 0)) throw InvalidParams("xi'' + phi'' must be negative");
    if (!(x2 * p2 >= 0)) throw InvalidParams("xi'' and phi'' must not have opposite signs");
  }
  if (!(d * (beta(state_domain.hi) * phi.eval(act.hi, 1) + xi.eval(act.hi, 1)) < 1))
    throw InvalidParams("marginal product at the top must fall below the effort cost");
  if (!(ua(state_domain.lo, act.lo) > 0))
    throw InvalidParams("marginal product at the bottom must exceed the effort cost");

  const auto y = [=](double w, double a, int da) {
    return beta(w) * phi.eval(a, da) + xi.eval(a, da);
  };
  const auto yw = [=](double w, double a, int da) {
    return beta_prime(w) * phi.eval(a, da);
  };

  StateActionModel m;
  m.family = "separable";
  m.state_domain = state_domain;
  m.action_domain = act;
  m.U = [=](double w, double a) { return d * y(w, a, 0) - a; };
  m.Ua = [=](double w, double a) { return d * y(w, a, 1) - 1; };
  m.Uaa = [=](double w, double a) { return d * y(w, a, 2); };
  m.Uaaa = [=](double w, double a) { return d * y(w, a, 3); };
  m.Uaw = [=](double w, double a) { return d * yw(w, a, 1); };
  m.Uaaw = [=](double w, double a) { return d * yw(w, a, 2); };
  m.V = [=](double w, double a) { return (1 - d) * y(w, a, 0); };
  m.Va = [=](double w, double a) { return (1 - d) * y(w, a, 1); };
  m.Vaa = [=](double w, double a) { return (1 - d) * y(w, a, 2); };
  m.Vaw = [=](double w, double a) { return (1 - d) * yw(w, a, 1); };
  return m;
}

SeparableConditionReport check_separable_derivative_condition(const SeparableParams& p,
                                                              const GridSpec& grid) {
  const std::function<double(double)> beta =
      p.beta ? p.beta : std::function<double(double)>([](double w) { return w; });
  const CurveSpec& phi = p.phi;
  const CurveSpec& xi = p.xi;

  SeparableConditionReport rep;
  ConditionVerdict& v = rep.verdict;
  v.grid_states = static_cast<int>(grid.n_states());
  v.grid_actions = static_cast<int>(grid.n_actions());

  std::vector<Witness> cands;
  for (Eigen::Index i = 0; i < grid.n_states(); ++i) {
    const double w = grid.state_points[i];
    const double bw = beta(w);
    for (Eigen::Index j = 0; j < grid.n_actions(); ++j) {
      const double a = grid.action_points[j];
      const double p1 = phi.eval(a, 1), p2 = phi.eval(a, 2), p3 = phi.eval(a, 3);
      const double x1 = xi.eval(a, 1), x2 = xi.eval(a, 2), x3 = xi.eval(a, 3);

      const double l1 = p2 * x1, r1 = p1 * x2;
      const double m1 = (l1 - r1) / norm_scale(l1, r1);

      const double l2 = bw * (p3 * p1 - p2 * p2), r2 = x2 * p2 - x3 * p1;
      const double m2 = (l2 - r2) / norm_scale(l2, r2);

      ++v.pairs_tested;
      Witness wt;
      wt.state1 = wt.state2 = w;
      wt.action1 = wt.action2 = a;
      wt.value1 = m1;
      wt.value2 = m2;
      wt.margin = std::min(m1, m2);
      cands.push_back(wt);
    }
  }
  finalize_pointwise(v, cands, kDerivTol);

  if (phi.kind == CurveSpec::Kind::Power && xi.kind == CurveSpec::Kind::Power)
    rep.power_shortcut_holds = phi.exponent >= xi.exponent;
  return rep;
}

MultiplicativeBenchmarkReport multiplicative_benchmark(const CurveSpec& phi,
                                                       const GridSpec& grid) {
  MultiplicativeBenchmarkReport rep;
  std::vector<Witness> foot, red;
  std::vector<double> scale;

  for (Eigen::Index j = 0; j < grid.n_actions(); ++j) {
    const double a = grid.action_points[j];
    const double p1 = phi.eval(a, 1), p2 = phi.eval(a, 2), p3 = phi.eval(a, 3);
    const double lhs = p3 * p1;

    Witness w;
    w.state1 = w.state2 = 0;
    w.action1 = w.action2 = a;
    w.value1 = lhs;

    w.value2 = p1 * p1;  // variant squaring the first derivative
    w.margin = lhs - w.value2;
    foot.push_back(w);

    w.value2 = p2 * p2;  // the xi == 0 specialization of the two-curve condition
    w.margin = lhs - w.value2;
    red.push_back(w);

    scale.push_back(std::abs(lhs));
  }

  std::nth_element(scale.begin(), scale.begin() + static_cast<std::ptrdiff_t>(scale.size() / 2),
                   scale.end());
  const double tol = kRelMarginTol * scale[scale.size() / 2];

  for (ConditionVerdict* v : {&rep.footnote, &rep.reduction}) {
    v->grid_states = static_cast<int>(grid.n_states());
    v->grid_actions = static_cast<int>(grid.n_actions());
    v->pairs_tested = static_cast<long>(grid.n_actions());
  }
  finalize_pointwise(rep.footnote, foot, tol);
  finalize_pointwise(rep.reduction, red, tol);
  return rep;
}

StateActionModel quadratic_cs_model(double b, Interval state_domain, Interval action_domain) {
  StateActionModel m;
  m.family = "quadratic_cs";
  m.state_domain = state_domain;
  m.action_domain = action_domain;
  m.linear_receiver_form = true;
  m.U = [](double w, double a) { return -(w - a) * (w - a); };
  m.Ua = [](double w, double a) { return 2 * (w - a); };
  m.Uaa = [](double, double) { return -2.0; };
  m.Uaaa = [](double, double) { return 0.0; };
  m.Uaw = [](double, double) { return 2.0; };
  m.Uaaw = [](double, double) { return 0.0; };
  m.V = [=](double w, double a) { return -(w - a - b) * (w - a - b); };
  m.Va = [=](double w, double a) { return 2 * (w - a - b); };
  m.Vaa = [](double, double) { return -2.0; };
  m.Vaw = [](double, double) { return 2.0; };
  return m;
}

StateActionModel linear_case_model(std::function<double(double)> v,
                                   std::function<double(double)> v_prime, Interval state_domain,
                                   Interval action_domain) {
  if (!v) throw InvalidParams("v is required");
  std::function<double(double)> vp = std::move(v_prime);
  if (!vp) {
    const auto base = v;
    vp = [base](double a) { return (base(a + 1e-6) - base(a - 1e-6)) / 2e-6; };
  }
  const auto vpp = [vp](double a) { return (vp(a + 1e-6) - vp(a - 1e-6)) / 2e-6; };

  StateActionModel m;
  m.family = "linear_case";
  m.state_domain = state_domain;
  m.action_domain = action_domain;
  m.linear_receiver_form = true;
  m.U = [](double w, double a) { return -0.5 * (w - a) * (w - a); };
  m.Ua = [](double w, double a) { return w - a; };
  m.Uaa = [](double, double) { return -1.0; };
  m.Uaaa = [](double, double) { return 0.0; };
  m.Uaw = [](double, double) { return 1.0; };
  m.Uaaw = [](double, double) { return 0.0; };
  m.V = [v](double, double a) { return v(a); };
  m.Va = [vp](double, double a) { return vp(a); };
  m.Vaa = [vpp](double, double a) { return vpp(a); };
  m.Vaw = [](double, double) { return 0.0; };
  return m;
}

CurveSpec polynomial_curve(const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw InvalidParams("polynomial needs at least one coefficient");
  const auto horner = [](const std::vector<double>& c, double a) {
    double s = 0;
    for (std::size_t i = c.size(); i > 0; --i) s = s * a + c[i - 1];
    return s;
  };
  const auto diff = [](const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
    if (d.empty()) d.push_back(0);
    return d;
  };
  const std::vector<double> c1 = diff(coeffs), c2 = diff(c1), c3 = diff(c2);
  return CurveSpec::custom([=](double a) { return horner(coeffs, a); },
                           [=](double a) { return horner(c1, a); },
                           [=](double a) { return horner(c2, a); },
                           [=](double a) { return horner(c3, a); });
}

}  // namespace disclose
