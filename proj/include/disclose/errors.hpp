#pragma once
#include <stdexcept>
#include <string>

namespace disclose {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// point or posterior outside the model's rectangle, bad step sizes, bad probabilities
struct DomainError : Error { using Error::Error; };
// receiver FOC has no sign change on the action domain
struct NoInteriorRoot : Error { using Error::Error; };
// U_aa >= 0 where strict concavity is required
struct ConcavityViolation : Error { using Error::Error; };
// family parameters outside their admissible region
struct InvalidParams : Error { using Error::Error; };
// higher partials absent and finite differences infeasible
struct MissingDerivatives : Error { using Error::Error; };
// change-of-variables map fails strict monotonicity on samples
struct MonotonicityViolation : Error { using Error::Error; };
// three-message split: marginal utilities at the pooled action do not straddle zero
struct NoOpposingStates : Error { using Error::Error; };
// three-message split: no positive weights balance the marginal-utility budget
struct InfeasibleWeights : Error { using Error::Error; };
// concavification over coincident states
struct DegenerateSimplex : Error { using Error::Error; };
// oracle supports two- and three-state priors only
struct UnsupportedSupportSize : Error { using Error::Error; };
// model's U_a is not a positive multiple of (state - action)
struct NotLinearReceiver : Error { using Error::Error; };
// malformed or inconsistent run configuration
struct ConfigError : Error { using Error::Error; };

}  // namespace disclose
