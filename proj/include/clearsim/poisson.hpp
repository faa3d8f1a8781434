#pragma once

#include <cstdint>
#include <utility>

namespace clearsim {

// Largest supported Poisson mean. Probabilities are evaluated in log space
// well below this, but the moment routines are only validated up to here.
inline constexpr double kMaxPoissonMean = 1.0e4;

/// Mean of a Poisson random variable; in policy formulas this is lambda*T.
/// Construction rejects non-finite, non-positive, or out-of-range values.
struct PoissonParam {
  explicit PoissonParam(double mean);
  double mu;
};

/// First and second moments of the truncated variable min(Y, q).
struct TruncatedMoments {
  std::int64_t q = 0;
  double m1 = 0.0;   // E[min(Y,q)]
  double m2 = 0.0;   // E[min(Y,q)^2]
  double var = 0.0;  // m2 - m1^2, clamped at 0
};

/// P(Y = k), computed by the multiplicative recurrence from e^{-mu} (log
/// space per term once e^{-mu} would underflow), never through factorials.
double pmf(PoissonParam p, std::int64_t k);

/// P(Y >= n). Uses the complement of the lower CDF when n <= mu and a direct
/// upper-tail sum otherwise, so tiny tails keep full relative accuracy.
double survival(PoissonParam p, std::int64_t n);

/// E[min(Y,q)] = sum_{k<q} k p_k + q P(Y>=q). Exact finite sum; no series
/// truncation error beyond floating point.
double truncated_mean(PoissonParam p, std::int64_t q);

/// E[min(Y,q)^2] = sum_{k<q} k^2 p_k + q^2 P(Y>=q).
double truncated_second_moment(PoissonParam p, std::int64_t q);

/// E[Y_q (Y_q - 1)], summed directly rather than as m2 - m1, so the value
/// keeps full relative accuracy even when it is far below m1 (the waiting
/// formulas divide by this difference, and near-degenerate policies need
/// its sign resolved well past the cancellation floor of the moments).
double truncated_factorial_moment(PoissonParam p, std::int64_t q);

TruncatedMoments truncated_moments(PoissonParam p, std::int64_t q);

/// VAR[Y] - VAR[Y_M], computed along two algebraically independent routes:
/// (a) the difference of raw moments, (b) the covariance decomposition
/// VAR[Y-Y_M] + 2(M-E[Y_M])(E[Y]-E[Y_M]). Throws std::logic_error if the two
/// disagree beyond 1e-10 relative. Returns the decomposition value, which is
/// a sum of nonnegative terms and therefore strictly positive whenever the
/// tail mass beyond M is representable.
double var_var_gap(PoissonParam p, std::int64_t M);

/// Both routes of var_var_gap, without the consistency check: {moment-route,
/// decomposition-route}.
std::pair<double, double> var_var_gap_routes(PoissonParam p, std::int64_t M);

/// E[Y_n] - VAR[Y_n], evaluated in a cancellation-safe form. For n above the
/// mean this is a sum of nonnegative tail terms, so a positive result
/// certifies the strict inequality VAR[Y_n] < E[Y_n] even when the exact gap
/// is far below 1 ulp of the moments themselves.
double mean_minus_variance(PoissonParam p, std::int64_t n);

/// E[min(Ytilde,q)] where Ytilde ~ Y | Y>0. Equals truncated_mean / P(Y>0)
/// because min(Y,q) vanishes exactly on {Y=0}. Rejects mu so small that
/// P(Y>0) underflows.
double zero_truncated_mean(PoissonParam p, std::int64_t q);

double zero_truncated_second_moment(PoissonParam p, std::int64_t q);

/// P(Ytilde > n) = P(Y > n) / P(Y > 0), n >= 1.
double zero_truncated_survival(PoissonParam p, std::int64_t n);

/// E[Y_N^2] / E[Y_N]; lies in [1, N] and is increasing in mu.
double moment_ratio(PoissonParam p, std::int64_t N);

}  // namespace clearsim
