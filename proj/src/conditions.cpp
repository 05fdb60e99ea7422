#include "disclose/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "disclose/solve.hpp"

namespace disclose {

namespace {

constexpr double kRelMarginTol = 1e-9;
constexpr double kDerivTol = 1e-9;  // |U_aw| at or below this is treated as zero
constexpr std::size_t kMaxWitnesses = 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Field {
  MatrixXd ua;   // U_a over (state, action)
  MatrixXd rat;  // V_a / -U_aa
};

Field evaluate_field(const StateActionModel& m, const GridSpec& g) {
  Field f;
  f.ua.resize(g.n_states(), g.n_actions());
  f.rat.resize(g.n_states(), g.n_actions());
  for (Index i = 0; i < g.n_states(); ++i) {
    const double w = g.state_points[i];
    for (Index j = 0; j < g.n_actions(); ++j) {
      const double a = g.action_points[j];
      const double uaa = m.Uaa(w, a);
      if (!(uaa < 0)) throw ConcavityViolation("U_aa >= 0 at a grid point");
      f.ua(i, j) = m.Ua(w, a);
      f.rat(i, j) = m.Va(w, a) / (-uaa);
    }
  }
  return f;
}

double median_abs(const MatrixXd& v) {
  std::vector<double> x(v.data(), v.data() + v.size());
  for (double& t : x) t = std::abs(t);
  const std::size_t mid = x.size() / 2;
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid), x.end());
  return x[mid];
}

bool witness_less(const Witness& a, const Witness& b) {
  if (a.margin != b.margin) return a.margin < b.margin;
  if (a.state1 != b.state1) return a.state1 < b.state1;
  if (a.action1 != b.action1) return a.action1 < b.action1;
  if (a.state2 != b.state2) return a.state2 < b.state2;
  return a.action2 < b.action2;
}

// shared tail: min margin, status from tolerance, 16 smallest witnesses
void finalize(ConditionVerdict& v, std::vector<Witness>& cands) {
  if (v.pairs_tested == 0 || cands.empty()) {
    v.status = VerdictStatus::Vacuous;
    v.min_margin = 0;
    v.witnesses.clear();
    return;
  }
  std::sort(cands.begin(), cands.end(), witness_less);
  v.min_margin = cands.front().margin;
  if (cands.size() > kMaxWitnesses) cands.resize(kMaxWitnesses);
  v.witnesses = std::move(cands);
  if (v.min_margin > v.margin_tol)
    v.status = VerdictStatus::HoldsStrictly;
  else if (v.min_margin < -v.margin_tol)
    v.status = VerdictStatus::Violated;
  else
    v.status = VerdictStatus::HoldsWeakly;
}

// prefix-max structure over value ranks for the larger admissible set
class FenwickMax {
 public:
  struct Entry {
    double v = -kInf;
    Index iw = -1, ia = -1;
    bool valid = false;
  };

  explicit FenwickMax(std::size_t n) : tree_(n + 1) {}

  void update(std::size_t pos, const Entry& e) {
    for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) absorb(tree_[i], e);
  }

  // max over positions [0, pos)
  Entry prefix(std::size_t pos) const {
    Entry best;
    for (std::size_t i = pos; i > 0; i -= i & (~i + 1)) absorb(best, tree_[i]);
    return best;
  }

 private:
  // total order so merges commute: larger value wins, ties to the earlier
  // (action, state) grid point
  static void absorb(Entry& dst, const Entry& src) {
    if (!src.valid) return;
    if (!dst.valid || src.v > dst.v ||
        (src.v == dst.v && (src.ia < dst.ia || (src.ia == dst.ia && src.iw < dst.iw))))
      dst = src;
  }
  std::vector<Entry> tree_;
};

class FenwickCount {
 public:
  explicit FenwickCount(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t pos) {
    for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  long prefix(std::size_t pos) const {  // count over [0, pos)
    long s = 0;
    for (std::size_t i = pos; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<long> tree_;
};

}  // namespace

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::HoldsStrictly: return "HOLDS_STRICTLY";
    case VerdictStatus::HoldsWeakly: return "HOLDS_WEAKLY";
    case VerdictStatus::Violated: return "VIOLATED";
    case VerdictStatus::Vacuous: return "VACUOUS";
    case VerdictStatus::NoneFound: return "NONE_FOUND";
  }
  return "?";
}

ConditionVerdict check_weak_condition(const StateActionModel& m, const GridSpec& grid) {
  validate_grid(m, grid);
  const Field f = evaluate_field(m, grid);

  ConditionVerdict v;
  v.grid_states = static_cast<int>(grid.n_states());
  v.grid_actions = static_cast<int>(grid.n_actions());
  v.margin_tol = kRelMarginTol * median_abs(f.rat);

  // ascending-action sweep: keep the best ratio among already-seen points
  // with U_a < 0; every U_a > 0 point pairs against that prefix maximum
  std::vector<Witness> cands;
  double best = -kInf;
  Index best_iw = -1, best_ia = -1;
  long neg_seen = 0;
  for (Index ja = 0; ja < grid.n_actions(); ++ja) {
    if (neg_seen > 0) {
      for (Index iw = 0; iw < grid.n_states(); ++iw) {
        if (f.ua(iw, ja) > 0) {
          v.pairs_tested += neg_seen;
          Witness w;
          w.state1 = grid.state_points[best_iw];
          w.action1 = grid.action_points[best_ia];
          w.state2 = grid.state_points[iw];
          w.action2 = grid.action_points[ja];
          w.value1 = best;
          w.value2 = f.rat(iw, ja);
          w.margin = w.value2 - w.value1;
          cands.push_back(w);
        }
      }
    }
    for (Index iw = 0; iw < grid.n_states(); ++iw) {
      if (f.ua(iw, ja) < 0) {
        ++neg_seen;
        if (f.rat(iw, ja) > best) {
          best = f.rat(iw, ja);
          best_iw = iw;
          best_ia = ja;
        }
      }
    }
  }
  finalize(v, cands);
  return v;
}

ConditionVerdict check_derivable_condition(const StateActionModel& m, const GridSpec& grid) {
  validate_grid(m, grid);
  const Field f = evaluate_field(m, grid);

  ConditionVerdict v;
  v.grid_states = static_cast<int>(grid.n_states());
  v.grid_actions = static_cast<int>(grid.n_actions());
  v.margin_tol = kRelMarginTol * median_abs(f.rat);

  // admissible pairs: earlier action AND strictly smaller U_a. Compress U_a
  // values and sweep actions ascending with prefix-max / prefix-count trees.
  std::vector<double> vals(f.ua.data(), f.ua.data() + f.ua.size());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  const auto rank = [&](double x) {  // number of distinct values < x
    return static_cast<std::size_t>(std::lower_bound(vals.begin(), vals.end(), x) - vals.begin());
  };

  FenwickMax fm(vals.size());
  FenwickCount fc(vals.size());
  std::vector<Witness> cands;
  for (Index ja = 0; ja < grid.n_actions(); ++ja) {
    for (Index iw = 0; iw < grid.n_states(); ++iw) {
      const std::size_t r = rank(f.ua(iw, ja));
      if (r == 0) continue;
      const long cnt = fc.prefix(r);
      if (cnt == 0) continue;
      const FenwickMax::Entry best = fm.prefix(r);
      v.pairs_tested += cnt;
      Witness w;
      w.state1 = grid.state_points[best.iw];
      w.action1 = grid.action_points[best.ia];
      w.state2 = grid.state_points[iw];
      w.action2 = grid.action_points[ja];
      w.value1 = best.v;
      w.value2 = f.rat(iw, ja);
      w.margin = w.value2 - w.value1;
      cands.push_back(w);
    }
    for (Index iw = 0; iw < grid.n_states(); ++iw) {
      const std::size_t pos = rank(f.ua(iw, ja));  // == index of the exact value
      fm.update(pos, {f.rat(iw, ja), iw, ja, true});
      fc.add(pos);
    }
  }
  finalize(v, cands);
  return v;
}

ConditionVerdict check_derivative_conditions(const StateActionModel& m, const GridSpec& grid) {
  validate_grid(m, grid);

  ConditionVerdict v;
  v.grid_states = static_cast<int>(grid.n_states());
  v.grid_actions = static_cast<int>(grid.n_actions());
  v.margin_tol = kDerivTol;  // margins below are normalized per point

  std::vector<Witness> cands;
  for (Index i = 0; i < grid.n_states(); ++i) {
    const double w = grid.state_points[i];
    for (Index j = 0; j < grid.n_actions(); ++j) {
      const double a = grid.action_points[j];
      const double uaa = m.Uaa(w, a);
      if (!(uaa < 0)) throw ConcavityViolation("U_aa >= 0 at a grid point");
      const double va = m.Va(w, a);
      const Partials p = model_partials(m, w, a);
      if (std::abs(p.Uaw) <= kDerivTol) continue;  // no informative direction here
      const double sgn = p.Uaw > 0 ? 1.0 : -1.0;

      const double l1 = p.Uaaw * va, r1 = p.Vaw * uaa;
      const double s1 = std::max({std::abs(l1), std::abs(r1), 1e-300});
      const double m1 = sgn * (l1 - r1) / s1;

      const double l2 = va * (p.Uaaa * p.Uaw - p.Uaaw * uaa);
      const double r2 = uaa * (p.Vaa * p.Uaw - p.Vaw * uaa);
      const double s2 = std::max({std::abs(l2), std::abs(r2), 1e-300});
      const double m2 = sgn * (l2 - r2) / s2;

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
  finalize(v, cands);
  return v;
}

ConditionVerdict check_suboptimality(const StateActionModel& m, const GridSpec& grid,
                                     const std::vector<double>& prior_support) {
  validate_grid(m, grid);
  if (prior_support.size() < 2)
    throw DomainError("suboptimality search needs at least two support states");
  const Interval span{grid.state_points[0], grid.state_points[grid.n_states() - 1]};
  for (double s : prior_support)
    if (!span.contains(s)) throw DomainError("support state outside the grid's state range");

  const Field f = evaluate_field(m, grid);  // for the shared margin tolerance
  ConditionVerdict v;
  v.grid_states = static_cast<int>(grid.n_states());
  v.grid_actions = static_cast<int>(grid.n_actions());
  v.margin_tol = kRelMarginTol * median_abs(f.rat);

  const Index na = grid.n_actions();
  const std::size_t n = prior_support.size();
  std::vector<double> br(n);
  for (std::size_t i = 0; i < n; ++i)
    br[i] = best_response(m, Posterior::point_mass(prior_support[i]));

  double best_pair_margin = -kInf;
  bool any_tested = false;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !(br[i] < br[j])) continue;
      const double w1 = prior_support[i], w2 = prior_support[j];

      // rows of U_a and ratio at the two support states
      VectorXd ua1(na), ua2(na), r1(na), r2(na);
      for (Index ja = 0; ja < na; ++ja) {
        const double a = grid.action_points[ja];
        const double uaa1 = m.Uaa(w1, a), uaa2 = m.Uaa(w2, a);
        if (!(uaa1 < 0) || !(uaa2 < 0))
          throw ConcavityViolation("U_aa >= 0 at a support state");
        ua1[ja] = m.Ua(w1, a);
        ua2[ja] = m.Ua(w2, a);
        r1[ja] = m.Va(w1, a) / (-uaa1);
        r2[ja] = m.Va(w2, a) / (-uaa2);
      }

      // prefix-minimum sweep: the reversed comparison must hold for every
      // admissible action pair, so track min r1 over earlier U_a<0 actions
      double min_r1 = kInf, min_r1_a = 0;
      long neg = 0, pair_count = 0;
      double pair_margin = kInf;
      std::vector<Witness> pair_cands;
      for (Index ja = 0; ja < na; ++ja) {
        if (neg > 0 && ua2[ja] > 0) {
          pair_count += neg;
          Witness wt;
          wt.state1 = w1;
          wt.action1 = min_r1_a;
          wt.state2 = w2;
          wt.action2 = grid.action_points[ja];
          wt.value1 = min_r1;
          wt.value2 = r2[ja];
          wt.margin = min_r1 - r2[ja];  // sign-adjusted: reversed comparison
          pair_margin = std::min(pair_margin, wt.margin);
          pair_cands.push_back(wt);
        }
        if (ua1[ja] < 0) {
          ++neg;
          if (r1[ja] < min_r1) {
            min_r1 = r1[ja];
            min_r1_a = grid.action_points[ja];
          }
        }
      }

      if (pair_count == 0) {
        ++v.vacuous_pairs;
        continue;
      }
      any_tested = true;
      v.pairs_tested += pair_count;
      if (pair_margin > v.margin_tol) {
        // first qualifying state pair wins
        v.witness_states = {w1, w2};
        finalize(v, pair_cands);
        return v;
      }
      best_pair_margin = std::max(best_pair_margin, pair_margin);
    }
  }

  if (!any_tested) {
    v.status = VerdictStatus::Vacuous;
    v.min_margin = 0;
    return v;
  }
  v.status = VerdictStatus::NoneFound;
  v.min_margin = best_pair_margin;
  return v;
}

ConditionVerdict check_linear_case(const std::function<double(double)>& v_prime,
                                   const GridSpec& grid) {
  if (!v_prime) throw DomainError("linear case needs a V' evaluator");

  std::vector<double> as, vp;
  for (Index j = 0; j < grid.n_actions(); ++j) {
    const double a = grid.action_points[j];
    if (a > 0 && a < 1) {  // the statement lives on the open unit interval
      as.push_back(a);
      vp.push_back(v_prime(a));
    }
  }

  ConditionVerdict v;
  v.grid_states = static_cast<int>(grid.n_states());
  v.grid_actions = static_cast<int>(grid.n_actions());
  v.necessary_and_sufficient = true;

  std::vector<double> mag(vp.size());
  for (std::size_t i = 0; i < vp.size(); ++i) mag[i] = std::abs(vp[i]);
  if (!mag.empty()) {
    std::nth_element(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(mag.size() / 2),
                     mag.end());
    v.margin_tol = kRelMarginTol * mag[mag.size() / 2];
  }

  std::vector<Witness> cands;
  double best = -kInf, best_a = 0;
  for (std::size_t j = 0; j < vp.size(); ++j) {
    if (j > 0) {
      v.pairs_tested += static_cast<long>(j);
      Witness w;
      w.state1 = w.state2 = 0;
      w.action1 = best_a;
      w.action2 = as[j];
      w.value1 = best;
      w.value2 = vp[j];
      w.margin = vp[j] - best;
      cands.push_back(w);
    }
    if (vp[j] > best) {
      best = vp[j];
      best_a = as[j];
    }
  }
  finalize(v, cands);
  return v;
}

LinearReceiverReport check_linear_receiver(const StateActionModel& m, const GridSpec& grid) {
  validate_grid(m, grid);
  const Index nw = grid.n_states(), na = grid.n_actions();

  // estimate the slope from the farthest-off-diagonal point, then assert
  // U_a == lambda * (state - action) across the grid
  double lambda = 0, best_gap = 0;
  MatrixXd va(nw, na), diff(nw, na), ua(nw, na);
  for (Index i = 0; i < nw; ++i)
    for (Index j = 0; j < na; ++j) {
      const double w = grid.state_points[i], a = grid.action_points[j];
      diff(i, j) = w - a;
      ua(i, j) = m.Ua(w, a);
      va(i, j) = m.Va(w, a);
      if (std::abs(diff(i, j)) > best_gap) {
        best_gap = std::abs(diff(i, j));
        lambda = ua(i, j) / diff(i, j);
      }
    }
  if (!(best_gap > 1e-6) || !(lambda > 0))
    throw NotLinearReceiver("cannot identify a positive slope for U_a in (state - action)");
  for (Index i = 0; i < nw; ++i)
    for (Index j = 0; j < na; ++j)
      if (std::abs(ua(i, j) - lambda * diff(i, j)) > 1e-9)
        throw NotLinearReceiver("U_a is not a positive multiple of (state - action) on the grid");

  LinearReceiverReport rep;

  // ours: V_a ordered across sign-switching pairs (same sweep as the ratio
  // condition; with U_aa constant the ratio is V_a up to positive scale)
  {
    ConditionVerdict& v = rep.ours;
    v.grid_states = static_cast<int>(nw);
    v.grid_actions = static_cast<int>(na);
    v.margin_tol = kRelMarginTol * median_abs(va);
    std::vector<Witness> cands;
    double best = -kInf;
    Index bi = -1, bj = -1;
    long neg_seen = 0;
    for (Index ja = 0; ja < na; ++ja) {
      if (neg_seen > 0)
        for (Index iw = 0; iw < nw; ++iw)
          if (diff(iw, ja) > 0) {
            v.pairs_tested += neg_seen;
            Witness w;
            w.state1 = grid.state_points[bi];
            w.action1 = grid.action_points[bj];
            w.state2 = grid.state_points[iw];
            w.action2 = grid.action_points[ja];
            w.value1 = best;
            w.value2 = va(iw, ja);
            w.margin = w.value2 - w.value1;
            cands.push_back(w);
          }
      for (Index iw = 0; iw < nw; ++iw) {
        if (diff(iw, ja) >= 0) continue;
        ++neg_seen;
        if (va(iw, ja) > best) {
          best = va(iw, ja);
          bi = iw;
          bj = ja;
        }
      }
    }
    finalize(v, cands);
  }

  // kolotilin: V_a nondecreasing along every action row and state column
  {
    ConditionVerdict& v = rep.kolotilin;
    v.grid_states = static_cast<int>(nw);
    v.grid_actions = static_cast<int>(na);
    v.margin_tol = kRelMarginTol * median_abs(va);
    std::vector<Witness> cands;
    for (Index iw = 0; iw < nw; ++iw) {
      double best = -kInf, best_a = 0;
      for (Index ja = 0; ja < na; ++ja) {
        if (ja > 0) {
          v.pairs_tested += ja;
          Witness w;
          w.state1 = w.state2 = grid.state_points[iw];
          w.action1 = best_a;
          w.action2 = grid.action_points[ja];
          w.value1 = best;
          w.value2 = va(iw, ja);
          w.margin = w.value2 - w.value1;
          cands.push_back(w);
        }
        if (va(iw, ja) > best) {
          best = va(iw, ja);
          best_a = grid.action_points[ja];
        }
      }
    }
    for (Index ja = 0; ja < na; ++ja) {
      double best = -kInf, best_w = 0;
      for (Index iw = 0; iw < nw; ++iw) {
        if (iw > 0) {
          v.pairs_tested += iw;
          Witness w;
          w.action1 = w.action2 = grid.action_points[ja];
          w.state1 = best_w;
          w.state2 = grid.state_points[iw];
          w.value1 = best;
          w.value2 = va(iw, ja);
          w.margin = w.value2 - w.value1;
          cands.push_back(w);
        }
        if (va(iw, ja) > best) {
          best = va(iw, ja);
          best_w = grid.state_points[iw];
        }
      }
    }
    finalize(v, cands);
  }

  return rep;
}

}  // namespace disclose
