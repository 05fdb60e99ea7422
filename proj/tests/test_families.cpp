#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "disclose/families.hpp"
#include "disclose/grid.hpp"
#include "disclose/solve.hpp"

using namespace disclose;

TEST_CASE("power-utility parameter validation") {
  CHECK_NOTHROW(validate(CrraParams{0.5, 0.25, 0.5, 0.5}));
  CHECK_THROWS_AS(validate(CrraParams{1.0, 0.5, 0.5, 0.5}), InvalidParams);   // log point
  CHECK_THROWS_AS(validate(CrraParams{0.5, 1.0 + 5e-7, 0.5, 0.5}), InvalidParams);
  CHECK_THROWS_AS(validate(CrraParams{-0.1, 0.5, 0.5, 0.5}), InvalidParams);
  CHECK_THROWS_AS(validate(CrraParams{0.5, 0.5, 0.0, 0.5}), InvalidParams);
  CHECK_THROWS_AS(validate(CrraParams{0.5, 0.5, 0.5, 1.0}), InvalidParams);
  CHECK_THROWS_AS(crra_model(CrraParams{}, {0.0, 1.0}), InvalidParams);  // state 0
}

TEST_CASE("power-utility closed-form best response") {
  // gamma=0: a* = [kappa * delta * w]^(1/(1-kappa)); at w=1: 0.25^2
  CHECK(crra_best_response_closed_form(CrraParams{0.0, 0.5, 0.5, 0.5}, 1.0) == 0.0625);
  // gamma=2: a* = w^(-2/3) for delta=kappa=0.5 — decreasing in the state
  const CrraParams q{2.0, 0.0, 0.5, 0.5};
  CHECK(crra_best_response_closed_form(q, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(crra_best_response_closed_form(q, 2.0) ==
        doctest::Approx(std::pow(2.0, -2.0 / 3.0)).epsilon(1e-14));
  CHECK(crra_best_response_closed_form(q, 2.0) ==
        doctest::Approx(0.6299605249474366).epsilon(1e-15));

  // the numeric solver lands on the same root
  const StateActionModel m = crra_model(q, {1.0, 2.0});
  CHECK(best_response(m, Posterior::point_mass(1.5)) ==
        doctest::Approx(crra_best_response_closed_form(q, 1.5)).epsilon(1e-11));
}

TEST_CASE("power-utility default action domain brackets the responses") {
  const StateActionModel m = crra_model(CrraParams{2.0, 0.0, 0.5, 0.5}, {1.0, 2.0});
  CHECK(m.action_domain.lo == 1e-6);
  CHECK(m.action_domain.hi == doctest::Approx(3.0).epsilon(1e-12));  // 3 * a*(1)
  CHECK(m.family == "crra");
  CHECK_FALSE(m.linear_receiver_form);
  CHECK(m.has_higher_partials());
  // evaluators guard the positive orthant
  CHECK_THROWS_AS(m.Ua(1.5, 0.0), DomainError);
  CHECK_THROWS_AS(m.Va(0.0, 0.5), DomainError);
}

TEST_CASE("ratio closed form matches the generic ratio") {
  double worst = 0;
  for (const CrraParams& p : {CrraParams{2.0, 0.0, 0.5, 0.5}, CrraParams{0.3, 0.7, 0.4, 0.6},
                              CrraParams{1.5, 2.5, 0.7, 0.3}}) {
    const StateActionModel m = crra_model(p, {1.0, 2.0});
    for (int i = 1; i <= 20; ++i)
      for (int j = 1; j <= 20; ++j) {
        const double w = 1.0 + i / 20.0;
        const double a = m.action_domain.lo +
                         (m.action_domain.hi - m.action_domain.lo) * j / 21.0;
        const double generic = ratio(m, w, a);
        const double closed = crra_ratio_closed_form(p, w, a);
        worst = std::max(worst, std::fabs(generic - closed) / std::fabs(generic));
      }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("regime classifier") {
  CHECK(crra_regime(0.5, 0.0) == Regime::Optimal);       // rho <= gamma < 1
  CHECK(crra_regime(0.5, 0.5) == Regime::Optimal);
  CHECK(crra_regime(2.0, 2.4) == Regime::Optimal);       // rho >= gamma > 1
  CHECK(crra_regime(2.0, 0.0) == Regime::Suboptimal);    // rho < 1 < gamma
  CHECK(crra_regime(0.5, 2.0) == Regime::Suboptimal);    // gamma < 1 < rho
  CHECK(crra_regime(0.3, 0.7) == Regime::Inconclusive);  // rho > gamma, both below 1
  CHECK(crra_regime(1.5, 1.2) == Regime::Inconclusive);  // rho < gamma, both above 1
  CHECK(std::string(to_string(Regime::Optimal)) == "OPTIMAL");
  CHECK(std::string(to_string(Regime::Suboptimal)) == "SUBOPTIMAL");
  CHECK(std::string(to_string(Regime::Inconclusive)) == "INCONCLUSIVE");
}

TEST_CASE("curve evaluation") {
  const CurveSpec pw = CurveSpec::power(2.0, 0.5);
  CHECK(pw.eval(4.0, 0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(pw.eval(4.0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pw.eval(4.0, 2) == doctest::Approx(-0.0625).epsilon(1e-15));
  CHECK(pw.eval(4.0, 3) == doctest::Approx(3.0 / 128).epsilon(1e-14));
  CHECK_THROWS_AS(pw.eval(0.0, 1), DomainError);

  const CurveSpec lg = CurveSpec::log_curve(2.0);
  CHECK(lg.eval(2.0, 0) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-15));
  CHECK(lg.eval(2.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lg.eval(2.0, 2) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(lg.eval(2.0, 3) == doctest::Approx(0.5).epsilon(1e-15));

  const CurveSpec z = CurveSpec::zero();
  for (int d = 0; d <= 3; ++d) CHECK(z.eval(1.7, d) == 0.0);

  const CurveSpec c = CurveSpec::custom([](double a) { return a; },
                                        [](double) { return 1.0; }, nullptr, nullptr);
  CHECK(c.eval(0.4, 1) == 1.0);
  CHECK_THROWS_AS(c.eval(0.4, 2), MissingDerivatives);
}

TEST_CASE("polynomial curve and its derivatives") {
  const CurveSpec p = polynomial_curve({0.0, 1.0, -0.5});  // a - a^2/2
  CHECK(p.eval(2.0, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p.eval(2.0, 1) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(p.eval(2.0, 2) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(p.eval(2.0, 3) == 0.0);
  CHECK_THROWS_AS(polynomial_curve({}), InvalidParams);
}

TEST_CASE("quadratic loss pair") {
  const StateActionModel m = quadratic_cs_model(0.1);
  CHECK(m.linear_receiver_form);
  CHECK(m.family == "quadratic_cs");
  CHECK(m.U(0.7, 0.2) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(m.Ua(0.7, 0.2) == doctest::Approx(1.0).epsilon(1e-15));  // 2 (w - a)
  CHECK(m.Uaa(0.7, 0.2) == -2.0);
  CHECK(m.V(0.7, 0.6) == doctest::Approx(0.0).epsilon(1e-15));   // w - a - b = 0
  CHECK(m.Va(0.7, 0.2) == doctest::Approx(0.8).epsilon(1e-15));  // 2 (w - a - b)
  CHECK(best_response(m, Posterior::two_point(0.0, 1.0, 0.5)) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("linear special case model") {
  const StateActionModel m = linear_case_model([](double a) { return -a * a; },
                                               [](double a) { return -2 * a; });
  CHECK(m.linear_receiver_form);
  CHECK(m.Ua(0.7, 0.2) == doctest::Approx(0.5).epsilon(1e-15));  // w - a
  CHECK(m.V(0.3, 0.5) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(m.Va(0.9, 0.5) == doctest::Approx(-1.0).epsilon(1e-15));  // state free
  // derivative of V' supplied by central differences
  CHECK(model_partials(m, 0.5, 0.5).Vaa == doctest::Approx(-2.0).epsilon(1e-6));

  const StateActionModel fd = linear_case_model([](double a) { return -a * a; }, nullptr);
  CHECK(fd.Va(0.3, 0.5) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("separable production model validation and evaluators") {
  SeparableParams p;
  p.phi = CurveSpec::power(1.0, 0.6);
  p.xi = CurveSpec::power(1.0, 0.3);
  const StateActionModel m = separable_model(p, {1.0, 2.0});
  CHECK(m.family == "separable");
  // default beta is the identity: y = w a^0.6 + a^0.3, U = delta y - a
  const double w = 1.5, a = 0.8;
  const double y = w * std::pow(a, 0.6) + std::pow(a, 0.3);
  CHECK(m.U(w, a) == doctest::Approx(0.5 * y - a).epsilon(1e-14));
  CHECK(m.V(w, a) == doctest::Approx(0.5 * y).epsilon(1e-14));
  const double ya = w * 0.6 * std::pow(a, -0.4) + 0.3 * std::pow(a, -0.7);
  CHECK(m.Ua(w, a) == doctest::Approx(0.5 * ya - 1).epsilon(1e-13));
  CHECK(m.has_higher_partials());

  SeparableParams bad = p;
  bad.phi = CurveSpec::zero();
  CHECK_THROWS_AS(separable_model(bad, {1.0, 2.0}), InvalidParams);
  bad = p;
  bad.delta = 1.0;
  CHECK_THROWS_AS(separable_model(bad, {1.0, 2.0}), InvalidParams);
  bad = p;
  bad.xi = CurveSpec::power(1.0, 2.0);  // xi'' > 0 flips the curvature checks
  CHECK_THROWS_AS(separable_model(bad, {1.0, 2.0}), InvalidParams);
}

TEST_CASE("separable derivative condition: frozen power and log instances") {
  SeparableParams p;
  p.phi = CurveSpec::power(1.0, 0.6);
  p.xi = CurveSpec::power(1.0, 0.3);
  const StateActionModel m = separable_model(p, {1.0, 2.0});
  const GridSpec g = GridSpec::uniform(m, 21, 41);
  const SeparableConditionReport rep = check_separable_derivative_condition(p, g);
  CHECK(rep.verdict.status == VerdictStatus::HoldsStrictly);
  CHECK(rep.verdict.min_margin == doctest::Approx(0.428571).epsilon(1e-4));
  REQUIRE(rep.power_shortcut_holds.has_value());
  CHECK(*rep.power_shortcut_holds);

  SeparableParams rev;
  rev.phi = CurveSpec::power(1.0, 0.3);
  rev.xi = CurveSpec::power(1.0, 0.6);
  const StateActionModel mr = separable_model(rev, {1.0, 2.0});
  const GridSpec gr = GridSpec::uniform(mr, 21, 41);
  const SeparableConditionReport rrep = check_separable_derivative_condition(rev, gr);
  CHECK(rrep.verdict.status == VerdictStatus::Violated);
  CHECK(rrep.verdict.min_margin == doctest::Approx(-0.428571).epsilon(1e-4));
  CHECK_FALSE(*rrep.power_shortcut_holds);

  SeparableParams ll;
  ll.phi = CurveSpec::log_curve(1.0);
  ll.xi = CurveSpec::log_curve(0.5);
  const StateActionModel ml = separable_model(ll, {1.0, 2.0});
  const GridSpec gl = GridSpec::uniform(ml, 21, 41);
  const SeparableConditionReport lrep = check_separable_derivative_condition(ll, gl);
  CHECK(lrep.verdict.status == VerdictStatus::HoldsWeakly);  // first inequality ties exactly
  CHECK(std::fabs(lrep.verdict.min_margin) <= 1e-9);
  CHECK_FALSE(lrep.power_shortcut_holds.has_value());
}

TEST_CASE("multiplicative benchmark evaluates both variant inequalities") {
  const GridSpec g = GridSpec::uniform_rect({0.0, 1.0}, {0.5, 2.0}, 2, 31);
  const MultiplicativeBenchmarkReport sq = multiplicative_benchmark(CurveSpec::power(1.0, 0.5), g);
  CHECK(sq.footnote.status == VerdictStatus::Violated);
  CHECK(sq.footnote.min_margin == doctest::Approx(-1.0 / 9).epsilon(1e-12));
  CHECK(sq.reduction.status == VerdictStatus::HoldsStrictly);
  // phi''' phi' - (phi'')^2 = 0.125 a^-3, smallest at a = 2
  CHECK(sq.reduction.min_margin == doctest::Approx(0.015625).epsilon(1e-12));

  const MultiplicativeBenchmarkReport lg = multiplicative_benchmark(CurveSpec::log_curve(1.0), g);
  CHECK(lg.footnote.status == VerdictStatus::Violated);
  CHECK(lg.footnote.min_margin == doctest::Approx(-0.125).epsilon(1e-12));
  CHECK(lg.reduction.status == VerdictStatus::HoldsStrictly);
  CHECK(lg.reduction.min_margin == doctest::Approx(0.0625).epsilon(1e-12));

  // on a low action range the verbatim variant holds as well
  const GridSpec glo = GridSpec::uniform_rect({0.0, 1.0}, {0.5, 1.4}, 2, 31);
  const MultiplicativeBenchmarkReport lo = multiplicative_benchmark(CurveSpec::log_curve(1.0), glo);
  CHECK(lo.footnote.status == VerdictStatus::HoldsStrictly);
  CHECK(lo.footnote.min_margin == doctest::Approx(0.0104123).epsilon(1e-5));

  // concave quadratic piece: the reduction fails outright
  const MultiplicativeBenchmarkReport qd =
      multiplicative_benchmark(polynomial_curve({0.0, 1.0, -0.5}), glo);
  CHECK(qd.reduction.status == VerdictStatus::Violated);
  CHECK(qd.reduction.min_margin == doctest::Approx(-1.0).epsilon(1e-12));
}
