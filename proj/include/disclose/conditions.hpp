#pragma once
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "disclose/grid.hpp"
#include "disclose/model.hpp"

namespace disclose {

enum class VerdictStatus {
  HoldsStrictly,  // min margin above tolerance
  HoldsWeakly,    // min margin within tolerance of zero
  Violated,       // min margin below -tolerance
  Vacuous,        // no admissible pairs / points on the grid
  NoneFound,      // suboptimality search: no witness pair
};

const char* to_string(VerdictStatus s);

// One extremal comparison. For pair conditions, (state1, action1) is the
// low-action point and value1/value2 are the compared quantities (the ratio
// V_a / -U_aa, or V_a itself for the linear-receiver check). For pointwise
// conditions both points coincide and value1/value2 hold the two normalized
// inequality margins.
struct Witness {
  double state1 = 0, action1 = 0;
  double state2 = 0, action2 = 0;
  double value1 = 0, value2 = 0;
  double margin = 0;  // sign-adjusted: positive means the condition holds here
};

// Grid evidence for one condition at one resolution. min_margin is the
// smallest sign-adjusted margin over everything tested; witnesses are the (up
// to) 16 smallest margins, ordered by margin then lexicographically by
// (state1, action1, state2, action2).
struct ConditionVerdict {
  VerdictStatus status = VerdictStatus::Vacuous;
  double min_margin = 0;
  double margin_tol = 0;
  std::vector<Witness> witnesses;
  long pairs_tested = 0;
  int grid_states = 0, grid_actions = 0;
  bool necessary_and_sufficient = false;  // set by the linear special case
  std::optional<std::pair<double, double>> witness_states;  // suboptimality search
  long vacuous_pairs = 0;  // suboptimality: state pairs with no admissible actions

  bool holds() const {
    return status == VerdictStatus::HoldsStrictly ||
           status == VerdictStatus::HoldsWeakly;
  }
};

// Ratio condition over opposite-sign pairs: for all grid pairs with
// a1 < a2, U_a(w1,a1) < 0 < U_a(w2,a2), require
// ratio(w1,a1) <= ratio(w2,a2). Sufficient for full disclosure to be optimal.
ConditionVerdict check_weak_condition(const StateActionModel& m, const GridSpec& grid);

// Same inequality over the larger admissible set {a1 < a2 and
// U_a(w1,a1) < U_a(w2,a2)}; implies the opposite-sign condition.
ConditionVerdict check_derivable_condition(const StateActionModel& m, const GridSpec& grid);

// Pointwise derivative conditions. At grid points with U_aw > 0:
//   U_aaw * V_a >= V_aw * U_aa, and
//   V_a (U_aaa U_aw - U_aaw U_aa) >= U_aa (V_aa U_aw - V_aw U_aa);
// both reversed where U_aw < 0; points with |U_aw| <= 1e-9 are skipped.
// Margins are normalized by the larger side's magnitude.
ConditionVerdict check_derivative_conditions(const StateActionModel& m, const GridSpec& grid);

// Searches support state pairs (w1, w2) with a*(w1) < a*(w2) for one whose
// ratio comparison is strictly reversed on ALL admissible grid action pairs,
// non-vacuously: evidence that full disclosure is suboptimal. Returns the
// first such pair (HoldsStrictly + witness_states) or NoneFound; state pairs
// with no admissible action pairs are counted in vacuous_pairs.
ConditionVerdict check_suboptimality(const StateActionModel& m, const GridSpec& grid,
                                     const std::vector<double>& prior_support);

// Linear special case (U_a affine with unit slopes, V depends on the action
// only): V' nondecreasing across interior grid actions in (0, 1). This one is
// necessary as well as sufficient; the verdict flags it.
ConditionVerdict check_linear_case(const std::function<double(double)>& v_prime,
                                   const GridSpec& grid);

struct LinearReceiverReport {
  ConditionVerdict ours;       // V_a(w1,a1) <= V_a(w2,a2) over sign-switching pairs
  ConditionVerdict kolotilin;  // V_a nondecreasing in action and in state
};

// Linear-receiver case: requires U_a = lambda * (state - action), lambda > 0,
// asserted on the grid within 1e-9 (throws NotLinearReceiver otherwise).
// Returns both our condition and the classical monotone-V_a condition so the
// strictness gap is observable.
LinearReceiverReport check_linear_receiver(const StateActionModel& m, const GridSpec& grid);

}  // namespace disclose
