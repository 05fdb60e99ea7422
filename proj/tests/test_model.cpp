#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "disclose/families.hpp"
#include "disclose/grid.hpp"
#include "disclose/model.hpp"
#include "disclose/solve.hpp"

using namespace disclose;

namespace {

// U = -(w - a)^2 / 2 so the best response is the posterior mean
StateActionModel mean_tracking_model() {
  StateActionModel m;
  m.state_domain = {0, 1};
  m.action_domain = {-0.5, 1.5};
  m.U = [](double w, double a) { return -0.5 * (w - a) * (w - a); };
  m.Ua = [](double w, double a) { return w - a; };
  m.Uaa = [](double, double) { return -1.0; };
  m.V = [](double, double a) { return a; };
  m.Va = [](double, double) { return 1.0; };
  return m;
}

}  // namespace

TEST_CASE("posterior validates and canonicalizes") {
  VectorXd s(2), p(2);
  s << 0.0, 1.0;
  p << 0.25, 0.75;
  Posterior post(s, p);
  CHECK(post.size() == 2);
  CHECK(post.mean() == doctest::Approx(0.75).epsilon(1e-15));

  // unsorted support is canonicalized, probabilities follow their states
  VectorXd s2(2), p2(2);
  s2 << 1.0, 0.0;
  p2 << 0.7, 0.3;
  const Posterior sorted(s2, p2);
  CHECK(sorted.states()[0] == 0.0);
  CHECK(sorted.probs()[0] == 0.3);

  VectorXd pbad(2);
  pbad << 0.7, 0.7;
  CHECK_THROWS_AS(Posterior(s, pbad), DomainError);
  VectorXd pneg(2);
  pneg << -0.25, 1.25;
  CHECK_THROWS_AS(Posterior(s, pneg), DomainError);
  VectorXd sdup(2), phalf(2);
  sdup << 0.5, 0.5;
  phalf << 0.5, 0.5;
  CHECK_THROWS_AS(Posterior(sdup, phalf), DomainError);

  CHECK(Posterior::point_mass(0.3).size() == 1);
  const Posterior two = Posterior::two_point(0.8, 0.2, 0.25);  // relabels to ascending
  CHECK(two.states()[0] == 0.2);
  CHECK(two.probs()[0] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("best response equals posterior mean for quadratic tracking") {
  const StateActionModel m = mean_tracking_model();
  const Posterior post = Posterior::two_point(0.0, 1.0, 0.25);
  const double a = best_response(m, post);
  CHECK(a == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(best_response(m, Posterior::point_mass(0.4)) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(sender_value(m, post) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("best response accepts an exact boundary zero") {
  StateActionModel m = mean_tracking_model();
  m.action_domain = {0.0, 1.0};
  // point mass at 0: FOC root sits exactly at the left action endpoint
  CHECK(best_response(m, Posterior::point_mass(0.0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(best_response(m, Posterior::point_mass(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("no interior root is reported") {
  StateActionModel m = mean_tracking_model();
  m.action_domain = {2.0, 3.0};  // Ua = w - a < 0 throughout for w in [0,1]
  CHECK_THROWS_AS(best_response(m, Posterior::point_mass(0.5)), NoInteriorRoot);
}

TEST_CASE("best response matches crra closed form") {
  CrraParams p;
  p.gamma = 2.0;
  p.rho = 0.0;
  const StateActionModel m = crra_model(p, {1.0, 2.0});
  for (double w : {1.0, 1.3, 2.0}) {
    const double closed = crra_best_response_closed_form(p, w);
    CHECK(best_response(m, Posterior::point_mass(w)) ==
          doctest::Approx(closed).epsilon(1e-11));
  }
  // gamma=0.5, kappa=0.5: a*(1) = (0.5 * 0.5^0.5)^(1/0.75) in closed form
  CrraParams q;
  q.gamma = 0.5;
  q.rho = 0.25;
  const double expect = std::pow(0.5 * std::sqrt(0.5), 1.0 / 0.75);
  CHECK(crra_best_response_closed_form(q, 1.0) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("ratio agrees with its definition and rejects convex points") {
  const StateActionModel m = mean_tracking_model();
  CHECK(ratio(m, 0.3, 0.5) == doctest::Approx(1.0).epsilon(1e-15));  // Va=1, -Uaa=1

  StateActionModel bad = mean_tracking_model();
  bad.Uaa = [](double, double) { return 0.0; };
  CHECK_THROWS_AS(ratio(bad, 0.3, 0.5), ConcavityViolation);
}

TEST_CASE("finite difference partials recover quadratic closed forms") {
  const StateActionModel m = quadratic_cs_model(0.1);
  CHECK(m.has_higher_partials());
  const Partials fd = finite_difference_partials(m, 0.5, 0.5, 1e-4);
  CHECK(fd.Uaw == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(fd.Uaaa == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(fd.Vaa == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(fd.Vaw == doctest::Approx(2.0).epsilon(1e-7));

  const Partials closed = model_partials(m, 0.5, 0.5);
  CHECK(closed.Uaw == 2.0);
  CHECK(closed.Uaaa == 0.0);
  CHECK(closed.Uaaw == 0.0);
  CHECK(closed.Vaa == -2.0);
  CHECK(closed.Vaw == 2.0);
}

TEST_CASE("model partials fall back to differences when closed forms are absent") {
  StateActionModel m = mean_tracking_model();
  CHECK_FALSE(m.has_higher_partials());
  const Partials p = model_partials(m, 0.5, 0.5);
  CHECK(p.Uaw == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(p.Uaaa == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(p.Vaa == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("grids stay inside the rectangle and auto-range brackets responses") {
  const StateActionModel m = mean_tracking_model();
  const GridSpec g = GridSpec::uniform(m, 11, 21);
  CHECK(g.n_states() == 11);
  CHECK(g.n_actions() == 21);
  CHECK(g.state_points[0] == m.state_domain.lo);
  CHECK(g.state_points[10] == m.state_domain.hi);
  // action range covers [0.5*a*(0), 1.5*a*(1)] clamped: best responses 0 and 1
  CHECK(g.action_points[0] >= m.action_domain.lo);
  CHECK(g.action_points[20] <= m.action_domain.hi);
  CHECK(g.action_points[20] >= 1.0);
  validate_grid(m, g);

  GridSpec outside = GridSpec::uniform_rect({0, 1}, {2.5, 3.0}, 3, 3);
  CHECK_THROWS_AS(validate_grid(m, outside), DomainError);
  CHECK_THROWS_AS(GridSpec::uniform_rect({1, 0}, {0, 1}, 3, 3), DomainError);
  CHECK_THROWS_AS(GridSpec::uniform_rect({0, 1}, {0, 1}, 1, 3), DomainError);
}

TEST_CASE("model validation flags convexity and missing roots") {
  StateActionModel m = mean_tracking_model();
  CHECK_NOTHROW(validate_model(m));

  StateActionModel convex = m;
  convex.Uaa = [](double, double) { return 1.0; };
  CHECK_THROWS_AS(validate_model(convex), ConcavityViolation);

  StateActionModel rootless = m;
  rootless.action_domain = {2.0, 3.0};
  CHECK_THROWS_AS(validate_model(rootless), NoInteriorRoot);
}

TEST_CASE("posteriors outside the state domain are rejected") {
  const StateActionModel m = mean_tracking_model();
  CHECK_THROWS_AS(require_in_state_domain(m, Posterior::point_mass(1.5)), DomainError);
  CHECK_NOTHROW(require_in_state_domain(m, Posterior::point_mass(0.5)));
}
