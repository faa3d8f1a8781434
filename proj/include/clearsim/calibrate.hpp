#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "clearsim/policy.hpp"

namespace clearsim {

/// Desired expected cycle length E[C]; positive and finite.
struct CycleTarget {
  explicit CycleTarget(double t);
  double value;
};

/// Open interval of attainable E[C] values. For QP the attainable set is
/// the discrete {k/lambda : k >= 1} inside this hull; calibrate() enforces
/// the integrality and reports violations as IntegralityError.
struct FeasibleRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct FeasibilityError : std::domain_error {
  using std::domain_error::domain_error;
};

/// lambda * target is not an integer (within 1e-9), so no QP matches.
struct IntegralityError : std::domain_error {
  using std::domain_error::domain_error;
};

FeasibleRange feasible_cycle_range(PolicyKind kind,
                                   std::optional<std::int64_t> q,
                                   ArrivalRate rate);

/// The unique policy of the given kind whose E[C] equals the target.
/// Closed-form where available (QP, TP1, TP2); otherwise monotone bisection
/// on T, bracketed by geometric growth from T = target. The returned spec
/// reproduces the target to better than 1e-10 relative.
PolicySpec calibrate(PolicyKind kind, std::optional<std::int64_t> q,
                     CycleTarget target, ArrivalRate rate);

}  // namespace clearsim
