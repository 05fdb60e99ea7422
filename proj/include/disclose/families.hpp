#pragma once
#include <functional>
#include <optional>

#include "disclose/conditions.hpp"
#include "disclose/model.hpp"

namespace disclose {

// Isoelastic (power-utility) family: output w * a^kappa, the acting party
// keeps share delta and has curvature gamma, the designer curvature rho.
// gamma, rho >= 0 and at least 1e-6 away from 1; delta, kappa strictly in
// (0, 1); states strictly positive.
struct CrraParams {
  double gamma = 0.5;
  double rho = 0.5;
  double delta = 0.5;
  double kappa = 0.5;
};

void validate(const CrraParams& p);

StateActionModel crra_model(const CrraParams& p, Interval state_domain,
                            std::optional<Interval> action_domain = std::nullopt);

// Root of U_a(w, .) in closed form: [kappa (delta w)^(1-gamma)]^(1/(1-kappa(1-gamma))).
double crra_best_response_closed_form(const CrraParams& p, double state);

// V_a / (-U_aa) = C * (U_a + 1)^((gamma-rho)/(1-gamma)) * a^((1-rho)/(1-gamma))
// with C = (1-delta)^(1-rho) delta^(rho-1) kappa^((rho-gamma)/(1-gamma)) / (1 - kappa(1-gamma)).
double crra_ratio_closed_form(const CrraParams& p, double state, double action);

enum class Regime { Optimal, Suboptimal, Inconclusive };
const char* to_string(Regime r);

// Analytic full-disclosure classification: Optimal iff (rho <= gamma < 1 or
// rho >= gamma > 1), Suboptimal iff (rho < 1 < gamma or gamma < 1 < rho),
// Inconclusive otherwise. Independent of delta and kappa.
Regime crra_regime(double gamma, double rho);

// Scalar curve with three derivatives, for separable production pieces.
struct CurveSpec {
  enum class Kind { Power, Log, Zero, Custom };
  Kind kind = Kind::Zero;
  double scale = 1.0;     // h or l
  double exponent = 1.0;  // power only

  std::function<double(double)> f, d1, d2, d3;  // custom only

  double eval(double a, int deriv) const;  // deriv in 0..3

  static CurveSpec power(double scale, double exponent);
  static CurveSpec log_curve(double scale);
  static CurveSpec zero();
  static CurveSpec custom(std::function<double(double)> f, std::function<double(double)> d1,
                          std::function<double(double)> d2, std::function<double(double)> d3);
};

// Risk-neutral separable production y = beta(w) phi(a) + xi(a); the acting
// party gets delta * y - a, the designer (1 - delta) * y. Validated on a
// sample grid: beta, beta', phi' > 0, xi' >= 0, xi'' + phi'' < 0,
// xi'' * phi'' >= 0, and delta * y_a < 1 at the top of the action domain.
struct SeparableParams {
  std::function<double(double)> beta;        // default identity
  std::function<double(double)> beta_prime;  // default 1
  CurveSpec phi;                             // must not be Zero
  CurveSpec xi = CurveSpec::zero();
  double delta = 0.5;
};

StateActionModel separable_model(const SeparableParams& p, Interval state_domain,
                                 std::optional<Interval> action_domain = std::nullopt);

struct SeparableConditionReport {
  ConditionVerdict verdict;
  // power-power families only: the analytic shortcut (phi exponent >= xi exponent)
  std::optional<bool> power_shortcut_holds;
};

// The two separable-production inequalities, pointwise on the grid with
// normalized margins:
//   phi'' xi' >= phi' xi''   and
//   beta(w) [phi''' phi' - (phi'')^2] >= xi'' phi'' - xi''' phi'.
SeparableConditionReport check_separable_derivative_condition(const SeparableParams& p,
                                                              const GridSpec& grid);

struct MultiplicativeBenchmarkReport {
  ConditionVerdict footnote;   // phi''' phi' >= (phi')^2
  ConditionVerdict reduction;  // phi''' phi' >= (phi'')^2, the xi == 0 specialization
};

// Multiplicative risk-neutral benchmark y = w * phi(a): the two candidate
// forms of its derivative condition differ in the squared term, so both are
// evaluated on the grid's action points and reported separately.
MultiplicativeBenchmarkReport multiplicative_benchmark(const CurveSpec& phi,
                                                       const GridSpec& grid);

// Quadratic-loss pair: U = -(w - a)^2, V = -(w - a - b)^2. All higher
// partials closed-form; flagged as linear-receiver form.
StateActionModel quadratic_cs_model(double b, Interval state_domain = {0, 1},
                                    Interval action_domain = {0, 1});

// Linear special case: quadratic-loss acting party (U = -(w - a)^2 / 2, so
// U_a = w - a) with V depending on the action only. v_prime may be empty; a
// central difference of v fills in.
StateActionModel linear_case_model(std::function<double(double)> v,
                                   std::function<double(double)> v_prime = nullptr,
                                   Interval state_domain = {0, 1},
                                   Interval action_domain = {0, 1});

// Polynomial and its first three derivatives from ascending coefficients.
CurveSpec polynomial_curve(const std::vector<double>& coeffs);

}  // namespace disclose
