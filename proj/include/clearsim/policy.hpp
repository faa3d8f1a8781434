#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "clearsim/poisson.hpp"

namespace clearsim {

// Renewal-type clearing policies. QP clears at the q-th arrival; TP1 on a
// fixed clock T; TP2 at T past the first arrival; HP1 at min(q-th arrival, T);
// HP2 at min(q-th arrival, first arrival + T). RTP1/RHP1 are the revised
// variants of TP1/HP1 that skip empty dispatch epochs and restart instead.
enum class PolicyKind { QP, TP1, TP2, HP1, HP2, RTP1, RHP1 };

const char* to_string(PolicyKind kind);
std::optional<PolicyKind> policy_kind_from_string(std::string_view name);

/// Poisson order arrival rate (orders per unit time), positive and finite.
struct ArrivalRate {
  explicit ArrivalRate(double orders_per_time);
  double lambda;
};

struct PolicySpec {
  PolicyKind kind;
  std::optional<std::int64_t> q;  // quantity trigger
  std::optional<double> T;        // time trigger

  static PolicySpec qp(std::int64_t q);
  static PolicySpec tp1(double T);
  static PolicySpec tp2(double T);
  static PolicySpec hp1(std::int64_t q, double T);
  static PolicySpec hp2(std::int64_t q, double T);
  static PolicySpec rtp1(double T);
  static PolicySpec rhp1(std::int64_t q, double T);

  // Throws std::invalid_argument when the parameter set does not match the
  // kind (missing/extraneous q or T, q < 1, q < 2 for HP2, T <= 0).
  void validate() const;
};

/// Cost rates for the long-run average dispatch cost: fixed cost per
/// shipment release, unit transport cost per order, waiting cost per order
/// per unit time.
struct CostParams {
  double fixed_dispatch = 0.0;
  double unit_transport = 0.0;
  double waiting_rate = 0.0;
  void validate() const;
};

struct PolicyMetrics {
  double expected_cycle = 0.0;   // E[C]
  double expected_wait = 0.0;    // E[W], order*time per cycle
  double expected_orders = 0.0;  // E[N] = lambda * E[C]
  double aod = 0.0;              // E[W] / (lambda E[C])
  std::optional<double> avg_cost;
};

double expected_cycle(const PolicySpec& policy, ArrivalRate rate);
double expected_wait(const PolicySpec& policy, ArrivalRate rate);

/// Average order delay E[W] / (lambda E[C]).
double aod(const PolicySpec& policy, ArrivalRate rate);

/// (A + C * lambda E[C] + w * E[W]) / E[C]: long-run cost per unit time.
double avg_cost(const PolicySpec& policy, ArrivalRate rate,
                const CostParams& costs);

PolicyMetrics evaluate(const PolicySpec& policy, ArrivalRate rate,
                       const std::optional<CostParams>& costs = std::nullopt);

}  // namespace clearsim
