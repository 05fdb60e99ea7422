#pragma once
#include "disclose/model.hpp"

namespace disclose {

inline constexpr double kFocTol = 1e-10;

// The acting party's optimal action under `post`: the unique root of
// g(a) = sum_i p_i * U_a(w_i, a). Brackets by scanning 64 equally spaced
// points, bisects the bracket to width 1e-13, then applies one Newton step
// using sum_i p_i * U_aa. Throws NoInteriorRoot when g has no sign change.
double best_response(const StateActionModel& m, const Posterior& post,
                     double foc_tol = kFocTol);

// V_a / (-U_aa) at a point. Throws ConcavityViolation when U_aa >= 0.
double ratio(const StateActionModel& m, double state, double action);

// Expected V at the best response to `post`.
double sender_value(const StateActionModel& m, const Posterior& post);

// Central-difference estimates of the optional higher partials, built from
// the required first/second derivative evaluators. Requires
// (state +- step, action +- 2*step) inside the domain rectangle.
Partials finite_difference_partials(const StateActionModel& m, double state,
                                    double action, double step);

// Closed forms where the model carries them, finite differences otherwise
// (with the step shrunk to fit the rectangle). Throws MissingDerivatives for
// fallback points on the domain boundary.
Partials model_partials(const StateActionModel& m, double state, double action);

}  // namespace disclose
