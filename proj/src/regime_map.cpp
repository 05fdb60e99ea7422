#include "disclose/regime_map.hpp"

#include <cmath>

#include "disclose/conditions.hpp"
#include "disclose/solve.hpp"

namespace disclose {

namespace {

// uniform lattice with the band (1 - eps, 1 + eps) removed; a degenerate
// range is a single point
std::vector<double> axis(double lo, double hi, int n, double eps) {
  if (!(hi >= lo)) throw ConfigError("empty axis range");
  const bool crosses = lo < 1 && hi > 1;
  if (eps <= 0 && crosses)
    throw ConfigError("a range crossing 1 needs a positive exclusion band");
  std::vector<double> out;
  if (lo == hi) {
    if (!(lo > 1 - eps && lo < 1 + eps)) out.push_back(lo);
  } else {
    if (n < 2) throw ConfigError("resolution must be at least 2");
    for (int i = 0; i < n; ++i) {
      const double x = lo + (hi - lo) * i / (n - 1);
      if (x > 1 - eps && x < 1 + eps) continue;
      out.push_back(x);
    }
  }
  if (out.empty()) throw ConfigError("exclusion band swallowed the whole axis");
  return out;
}

}  // namespace

RegimeMapReport regime_map(const RegimeMapOptions& opt) {
  RegimeMapReport rep;
  rep.gammas = axis(opt.gamma_lo, opt.gamma_hi, opt.resolution, opt.eps);
  rep.rhos = axis(opt.rho_lo, opt.rho_hi, opt.resolution, opt.eps);

  for (std::size_t gi = 0; gi < rep.gammas.size(); ++gi) {
    for (std::size_t ri = 0; ri < rep.rhos.size(); ++ri) {
      RegimeCell cell;
      cell.gamma = rep.gammas[gi];
      cell.rho = rep.rhos[ri];
      cell.regime = crra_regime(cell.gamma, cell.rho);

      if (opt.validate_every > 0 && gi % static_cast<std::size_t>(opt.validate_every) == 0 &&
          ri % static_cast<std::size_t>(opt.validate_every) == 0) {
        cell.validated = true;
        CrraParams p = opt.base;
        p.gamma = cell.gamma;
        p.rho = cell.rho;
        const StateActionModel m = crra_model(p, {opt.state_lo, opt.state_hi});
        const GridSpec grid = GridSpec::uniform(m, opt.grid_states, opt.grid_actions);
        const ConditionVerdict weak = check_weak_condition(m, grid);
        const std::vector<double> support = {opt.state_lo, 0.5 * (opt.state_lo + opt.state_hi),
                                             opt.state_hi};
        const ConditionVerdict sub = check_suboptimality(m, grid, support);

        const bool witness = sub.status == VerdictStatus::HoldsStrictly;
        switch (cell.regime) {
          case Regime::Optimal:
            cell.agree = weak.holds() && !witness;
            if (!cell.agree)
              cell.note = weak.holds() ? "unexpected suboptimality witness"
                                       : "opposite-sign condition failed";
            break;
          case Regime::Suboptimal:
            cell.agree = witness && weak.status == VerdictStatus::Violated;
            if (!cell.agree)
              cell.note = witness ? "condition not violated" : "no suboptimality witness";
            break;
          case Regime::Inconclusive:
            cell.agree = weak.status == VerdictStatus::Violated && !witness;
            if (!cell.agree)
              cell.note = witness ? "unexpected suboptimality witness"
                                  : "condition unexpectedly held";
            break;
        }
        if (!cell.agree) ++rep.disagreements;
      }
      rep.cells.push_back(cell);
    }
  }
  return rep;
}

}  // namespace disclose
