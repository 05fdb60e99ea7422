#pragma once
#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "disclose/model.hpp"

namespace disclose {

// Absolute tolerance for envelope dominance comparisons (values are on the
// model's natural utility scale).
inline constexpr double kEnvTol = 1e-7;

// Gain from fully revealing a two-state pool. States are relabeled so the
// individual best responses satisfy a_low <= a_high; prob_low is the mass on
// state_low. k = prob_low * U_a(state_low, a_pool) is the common marginal
// budget at the pooled optimum (negative whenever a_low < a_high).
struct BinarySplitResult {
  double state_low = 0, state_high = 0;
  double prob_low = 0;
  double a_pool = 0, a_low = 0, a_high = 0;
  double k = 0;
  double gain = 0;          // expected V revealed minus pooled
  double effort_delta = 0;  // expected action revealed minus pooled
};

BinarySplitResult binary_split_gain(const StateActionModel& m, double w1, double w2,
                                    double p1);

// Same gain via prob_high * int_{a_pool}^{a_high} V_a(state_high, a) da -
// prob_low * int_{a_low}^{a_pool} V_a(state_low, a) da, composite 16-point
// Gauss-Legendre with quad_points nodes per integral.
double gain_via_integrals(const StateActionModel& m, double w1, double w2, double p1,
                          int quad_points = 64);

// Verifies that x1(a) = prob_low * U_a(state_low, a) maps [a_low, a_pool]
// onto [k, 0] strictly decreasing and x2(a) = -prob_high * U_a(state_high, a)
// maps [a_pool, a_high] onto [k, 0] strictly increasing, on `samples` points
// per interval. Returns the largest endpoint residual; throws
// MonotonicityViolation if either map is not strictly monotone.
double change_of_variables_check(const StateActionModel& m, double w1, double w2,
                                 double p1, int samples = 64);

struct SubMessage {
  double weight = 0;                     // total probability of the message
  std::optional<Posterior> conditional;  // absent when weight == 0
  VectorXd masses;  // unnormalized masses over the original support
};

// Split of a pooled posterior into two degenerate messages plus a
// complementary message at whose posterior the pooled action stays optimal.
// The mass vectors sum to the original posterior exactly (bitwise).
struct Decomposition {
  SubMessage m1, m2, mc;
  double pooled_action = 0;
  double comp0_residual = 0;  // |w1 U_a(s1,a*) + w2 U_a(s2,a*)|
};

// Peels mass from states idx1 (U_a < 0 at the pooled action) and idx2
// (U_a > 0) into degenerate messages whose weighted marginal utilities
// cancel; the peeled fraction is capped at 1/2 so the complementary message
// keeps full support (for two-state posteriors the cap is 1 and the
// complement degenerates to zero weight).
Decomposition three_message_decomposition(const StateActionModel& m, const Posterior& post,
                                          int idx1, int idx2);

enum class EnvelopeVerdict { FullDisclosureOptimal, FullDisclosureSuboptimal };
const char* to_string(EnvelopeVerdict v);

// Brute-force concavification evidence. sample_posteriors/sample_values hold
// the sampled sender values; verdict compares every sample against the
// full-disclosure hyperplane through the degenerate-state values within
// kEnvTol; margin is the largest deviation in the verdict's direction and
// margin_argmax indexes the sample attaining it. optimal_split lists the
// (posterior, weight) pairs achieving the envelope at the prior.
struct EnvelopeResult {
  std::vector<Posterior> sample_posteriors;
  VectorXd sample_values;
  double envelope_value_at_prior = 0;
  double full_disclosure_value = 0;
  std::vector<std::pair<Posterior, double>> optimal_split;
  EnvelopeVerdict verdict = EnvelopeVerdict::FullDisclosureOptimal;
  double margin = 0;
  Eigen::Index margin_argmax = 0;
};

// Two-state concavification on the segment between the states; prior_p is
// the prior mass on the higher state, strictly interior. Samples `resolution`
// uniform mixtures (plus the prior itself) and takes the upper hull.
EnvelopeResult concavify_2state(const StateActionModel& m, std::pair<double, double> states,
                                double prior_p, int resolution = 201);

// Three-state concavification on a triangular barycentric lattice with
// `resolution` points per edge (plus the prior). The envelope value at the
// prior solves a small dense linear program over the samples.
EnvelopeResult concavify_3state(const StateActionModel& m, const std::array<double, 3>& states,
                                const Posterior& prior, int resolution = 60);

struct PairScanRow {
  double w1 = 0, w2 = 0, p1 = 0;
  double gain = 0, effort_delta = 0;
};

// Binary splits for every support pair and p1 = k/(pi_grid+1); worst_index
// points at the most negative gain (ties: first in scan order).
struct PairScanReport {
  std::vector<PairScanRow> rows;
  Eigen::Index worst_index = 0;
  double min_gain = 0;
};

PairScanReport binary_pair_scan(const StateActionModel& m, const std::vector<double>& support,
                                int pi_grid = 19);

}  // namespace disclose
