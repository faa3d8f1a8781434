#pragma once

#include <cstdint>
#include <utility>

#include "clearsim/policy.hpp"
#include "clearsim/rng.hpp"

namespace clearsim {

/// One regeneration cycle: its length tau, the number of orders cleared,
/// and the cumulative waiting W = integral of the count process over the
/// cycle. cum_wait <= orders * length always.
struct CycleRecord {
  double length = 0.0;
  std::int64_t orders = 0;
  double cum_wait = 0.0;
};

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

/// Regenerative Monte Carlo estimates. aod is the ratio estimator
/// mean_wait / mean_orders with a delta-method standard error. residual_w
/// and residual_n are the per-cycle optional-stopping residuals
///   W - (N^2 - N) / (2 lambda)   and   N - lambda * tau,
/// which have mean zero for the five base policies. For RTP1/RHP1 the
/// residuals are taken over the final window only and are reported without
/// any zero-mean claim (the window is conditioned on being nonempty).
struct SimEstimate {
  std::int64_t n_cycles = 0;
  std::uint64_t seed = 0;
  Estimate cycle;
  Estimate orders;
  Estimate wait;
  Estimate aod;
  Estimate residual_w;
  Estimate residual_n;
};

/// Draws one cycle under the policy's stopping rule.
CycleRecord sample_cycle(const PolicySpec& policy, ArrivalRate rate,
                         CycleRng& rng);

/// Simulates n_cycles independent cycles. Deterministic for fixed
/// (policy, rate, n_cycles, seed) regardless of thread count: cycles are
/// accumulated in fixed-size blocks whose partial sums are merged in block
/// order, and each cycle draws from its own seed-indexed substream.
SimEstimate simulate(const PolicySpec& policy, ArrivalRate rate,
                     std::int64_t n_cycles, std::uint64_t seed);

/// Single-threaded straight-line reference of simulate(); kept as the
/// comparison baseline for the parallel kernel. Agrees with simulate() up
/// to floating-point summation order.
SimEstimate simulate_reference(const PolicySpec& policy, ArrivalRate rate,
                               std::int64_t n_cycles, std::uint64_t seed);

/// {residual_w, residual_n} from a fresh simulation run.
std::pair<Estimate, Estimate> martingale_check(const PolicySpec& policy,
                                               ArrivalRate rate,
                                               std::int64_t n_cycles,
                                               std::uint64_t seed);

}  // namespace clearsim
