#include "clearsim/calibrate.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace clearsim {
namespace {

constexpr double kQpIntegralityTol = 1e-9;
constexpr int kMaxBisectionIters = 200;

PolicySpec make_spec(PolicyKind kind, std::optional<std::int64_t> q,
                     double T) {
  switch (kind) {
    case PolicyKind::TP1: return PolicySpec::tp1(T);
    case PolicyKind::TP2: return PolicySpec::tp2(T);
    case PolicyKind::RTP1: return PolicySpec::rtp1(T);
    case PolicyKind::HP1: return PolicySpec::hp1(*q, T);
    case PolicyKind::HP2: return PolicySpec::hp2(*q, T);
    case PolicyKind::RHP1: return PolicySpec::rhp1(*q, T);
    default:
      throw std::invalid_argument("policy kind has no time parameter");
  }
}

void check_q_argument(PolicyKind kind, const std::optional<std::int64_t>& q) {
  const bool wants_q = kind == PolicyKind::HP1 || kind == PolicyKind::HP2 ||
                       kind == PolicyKind::RHP1;
  if (wants_q && !q.has_value())
    throw std::invalid_argument(std::string(to_string(kind)) +
                                " calibration requires q");
  if (!wants_q && q.has_value())
    throw std::invalid_argument(std::string(to_string(kind)) +
                                " calibration takes no q");
  if (wants_q) {
    if (*q < 1) throw std::invalid_argument("q must be >= 1");
    if (kind == PolicyKind::HP2 && *q < 2)
      throw std::invalid_argument("hp2 requires q >= 2");
  }
}

void check_feasible(PolicyKind kind, std::optional<std::int64_t> q,
                    double target, ArrivalRate rate) {
  const FeasibleRange r = feasible_cycle_range(kind, q, rate);
  if (!(target > r.lo && target < r.hi))
    throw FeasibilityError(
        std::string("target E[C] = ") + std::to_string(target) + " for " +
        to_string(kind) + " lies outside the open feasible range (" +
        std::to_string(r.lo) + ", " +
        (std::isinf(r.hi) ? std::string("inf") : std::to_string(r.hi)) + ")");
}

// Monotone bisection on T for the families without a closed-form inverse.
PolicySpec bisect_time_parameter(PolicyKind kind,
                                 std::optional<std::int64_t> q, double target,
                                 ArrivalRate rate) {
  const auto ec = [&](double T) {
    return expected_cycle(make_spec(kind, q, T), rate);
  };

  const double t_cap = kMaxPoissonMean / rate.lambda;
  double lo = target;
  double hi = target;
  double f0 = ec(target);
  if (f0 == target) return make_spec(kind, q, target);
  if (f0 < target) {
    while (ec(hi) <= target) {
      lo = hi;
      hi *= 2.0;
      if (hi > t_cap)
        throw FeasibilityError(
            "calibration target requires T beyond the supported lambda*T range");
    }
  } else {
    while (ec(lo) >= target) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300)
        throw FeasibilityError("calibration bracket collapsed toward T = 0");
    }
  }

  // E[C] is strictly increasing in T here, so bisect to double resolution.
  for (int iter = 0; iter < kMaxBisectionIters; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = ec(mid);
    if (f == target) return make_spec(kind, q, mid);
    (f < target ? lo : hi) = mid;
    if (hi - lo <= 1e-12 && hi - lo <= 1e-15 * mid) break;
  }
  return make_spec(kind, q, 0.5 * (lo + hi));
}

}  // namespace

CycleTarget::CycleTarget(double t) : value(t) {
  if (!std::isfinite(t) || t <= 0.0)
    throw std::invalid_argument("cycle target must be positive and finite");
}

FeasibleRange feasible_cycle_range(PolicyKind kind,
                                   std::optional<std::int64_t> q,
                                   ArrivalRate rate) {
  check_q_argument(kind, q);
  const double inf = std::numeric_limits<double>::infinity();
  const double inv_lambda = 1.0 / rate.lambda;
  switch (kind) {
    case PolicyKind::QP:
      // Attainable targets are the discrete multiples {k/lambda : k >= 1}
      // inside this hull; calibrate() enforces the integrality.
      return {0.0, inf};
    case PolicyKind::TP1:
      return {0.0, inf};
    case PolicyKind::TP2:
      return {inv_lambda, inf};
    case PolicyKind::RTP1:
      return {inv_lambda, inf};
    case PolicyKind::HP1:
      return {0.0, static_cast<double>(*q) * inv_lambda};
    case PolicyKind::HP2:
      return {inv_lambda, static_cast<double>(*q) * inv_lambda};
    case PolicyKind::RHP1:
      return {inv_lambda, static_cast<double>(*q) * inv_lambda};
  }
  throw std::logic_error("unreachable policy kind");
}

PolicySpec calibrate(PolicyKind kind, std::optional<std::int64_t> q,
                     CycleTarget target, ArrivalRate rate) {
  check_q_argument(kind, q);
  switch (kind) {
    case PolicyKind::QP: {
      const double x = rate.lambda * target.value;
      const double k = std::round(x);
      if (!(std::abs(x - k) <= kQpIntegralityTol) || k < 1.0)
        throw IntegralityError(
            "qp can only attain targets k/lambda for integer k >= 1; "
            "lambda*target = " +
            std::to_string(x) + " is not an integer (tolerance 1e-9)");
      return PolicySpec::qp(static_cast<std::int64_t>(k));
    }
    case PolicyKind::TP1:
      return PolicySpec::tp1(target.value);
    case PolicyKind::TP2: {
      check_feasible(kind, std::nullopt, target.value, rate);
      return PolicySpec::tp2(target.value - 1.0 / rate.lambda);
    }
    case PolicyKind::HP1:
    case PolicyKind::HP2:
    case PolicyKind::RTP1:
    case PolicyKind::RHP1:
      check_feasible(kind, q, target.value, rate);
      return bisect_time_parameter(kind, q, target.value, rate);
  }
  throw std::logic_error("unreachable policy kind");
}

}  // namespace clearsim
