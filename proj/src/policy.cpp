#include "clearsim/policy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace clearsim {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

bool needs_q(PolicyKind k) {
  return k == PolicyKind::QP || k == PolicyKind::HP1 || k == PolicyKind::HP2 ||
         k == PolicyKind::RHP1;
}

bool needs_T(PolicyKind k) { return k != PolicyKind::QP; }

// lambda*T as a validated Poisson mean; enforces the supported-range cap.
PoissonParam window_mean(const PolicySpec& p, ArrivalRate r) {
  const double mu = r.lambda * *p.T;
  if (mu > kMaxPoissonMean)
    throw std::domain_error("lambda*T = " + std::to_string(mu) +
                            " above supported range " +
                            std::to_string(kMaxPoissonMean));
  return PoissonParam(mu);
}

double nonempty_window_probability(double mu) { return -std::expm1(-mu); }

}  // namespace

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::QP: return "qp";
    case PolicyKind::TP1: return "tp1";
    case PolicyKind::TP2: return "tp2";
    case PolicyKind::HP1: return "hp1";
    case PolicyKind::HP2: return "hp2";
    case PolicyKind::RTP1: return "rtp1";
    case PolicyKind::RHP1: return "rhp1";
  }
  return "?";
}

std::optional<PolicyKind> policy_kind_from_string(std::string_view name) {
  if (name == "qp") return PolicyKind::QP;
  if (name == "tp1") return PolicyKind::TP1;
  if (name == "tp2") return PolicyKind::TP2;
  if (name == "hp1") return PolicyKind::HP1;
  if (name == "hp2") return PolicyKind::HP2;
  if (name == "rtp1") return PolicyKind::RTP1;
  if (name == "rhp1") return PolicyKind::RHP1;
  return std::nullopt;
}

ArrivalRate::ArrivalRate(double orders_per_time) : lambda(orders_per_time) {
  if (!std::isfinite(lambda) || lambda <= 0.0)
    throw std::invalid_argument("arrival rate must be positive and finite");
}

PolicySpec PolicySpec::qp(std::int64_t q) {
  PolicySpec p{PolicyKind::QP, q, std::nullopt};
  p.validate();
  return p;
}
PolicySpec PolicySpec::tp1(double T) {
  PolicySpec p{PolicyKind::TP1, std::nullopt, T};
  p.validate();
  return p;
}
PolicySpec PolicySpec::tp2(double T) {
  PolicySpec p{PolicyKind::TP2, std::nullopt, T};
  p.validate();
  return p;
}
PolicySpec PolicySpec::hp1(std::int64_t q, double T) {
  PolicySpec p{PolicyKind::HP1, q, T};
  p.validate();
  return p;
}
PolicySpec PolicySpec::hp2(std::int64_t q, double T) {
  PolicySpec p{PolicyKind::HP2, q, T};
  p.validate();
  return p;
}
PolicySpec PolicySpec::rtp1(double T) {
  PolicySpec p{PolicyKind::RTP1, std::nullopt, T};
  p.validate();
  return p;
}
PolicySpec PolicySpec::rhp1(std::int64_t q, double T) {
  PolicySpec p{PolicyKind::RHP1, q, T};
  p.validate();
  return p;
}

void PolicySpec::validate() const {
  const std::string name = to_string(kind);
  if (needs_q(kind)) {
    require(q.has_value(), name + " requires a quantity parameter q");
    require(*q >= 1, name + " requires q >= 1");
    // With q = 1 the quantity trigger fires at the first arrival and the
    // hybrid collapses; use QP(1) for that behavior.
    if (kind == PolicyKind::HP2)
      require(*q >= 2, "hp2 requires q >= 2");
  } else {
    require(!q.has_value(), name + " takes no quantity parameter");
  }
  if (needs_T(kind)) {
    require(T.has_value(), name + " requires a time parameter T");
    require(std::isfinite(*T) && *T > 0.0, name + " requires finite T > 0");
  } else {
    require(!T.has_value(), name + " takes no time parameter");
  }
}

void CostParams::validate() const {
  const bool ok = std::isfinite(fixed_dispatch) && fixed_dispatch >= 0.0 &&
                  std::isfinite(unit_transport) && unit_transport >= 0.0 &&
                  std::isfinite(waiting_rate) && waiting_rate >= 0.0;
  if (!ok)
    throw std::invalid_argument("cost parameters must be nonnegative and finite");
}

double expected_cycle(const PolicySpec& policy, ArrivalRate rate) {
  policy.validate();
  if (needs_T(policy.kind)) window_mean(policy, rate);  // enforce the cap
  const double lambda = rate.lambda;
  switch (policy.kind) {
    case PolicyKind::QP:
      return static_cast<double>(*policy.q) / lambda;
    case PolicyKind::TP1:
      return *policy.T;
    case PolicyKind::TP2:
      return 1.0 / lambda + *policy.T;
    case PolicyKind::HP1:
      return truncated_mean(window_mean(policy, rate), *policy.q) / lambda;
    case PolicyKind::HP2:
      return (1.0 + truncated_mean(window_mean(policy, rate), *policy.q - 1)) /
             lambda;
    case PolicyKind::RTP1: {
      const PoissonParam mu = window_mean(policy, rate);
      return *policy.T / nonempty_window_probability(mu.mu);
    }
    case PolicyKind::RHP1: {
      const PoissonParam mu = window_mean(policy, rate);
      return truncated_mean(mu, *policy.q) /
             (lambda * nonempty_window_probability(mu.mu));
    }
  }
  throw std::logic_error("unreachable policy kind");
}

double expected_wait(const PolicySpec& policy, ArrivalRate rate) {
  policy.validate();
  if (needs_T(policy.kind)) window_mean(policy, rate);  // enforce the cap
  const double lambda = rate.lambda;
  switch (policy.kind) {
    case PolicyKind::QP: {
      const double q = static_cast<double>(*policy.q);
      return q * (q - 1.0) / (2.0 * lambda);
    }
    case PolicyKind::TP1:
      return 0.5 * lambda * *policy.T * *policy.T;
    case PolicyKind::TP2:
      return 0.5 * lambda * *policy.T * *policy.T + *policy.T;
    case PolicyKind::HP1:
      // E[Y_q (Y_q - 1)] / (2 lambda), summed directly to dodge the
      // m2 - m1 cancellation near degeneration.
      return truncated_factorial_moment(window_mean(policy, rate), *policy.q) /
             (2.0 * lambda);
    case PolicyKind::HP2: {
      // E[Y_{q-1} (Y_{q-1} + 1)] = E[Y(Y-1)] + 2 E[Y] at level q-1.
      const PoissonParam mu = window_mean(policy, rate);
      return (truncated_factorial_moment(mu, *policy.q - 1) +
              2.0 * truncated_mean(mu, *policy.q - 1)) /
             (2.0 * lambda);
    }
    case PolicyKind::RTP1: {
      const PoissonParam mu = window_mean(policy, rate);
      return 0.5 * lambda * *policy.T * *policy.T /
             nonempty_window_probability(mu.mu);
    }
    case PolicyKind::RHP1: {
      const PoissonParam mu = window_mean(policy, rate);
      return truncated_factorial_moment(mu, *policy.q) /
             (2.0 * lambda * nonempty_window_probability(mu.mu));
    }
  }
  throw std::logic_error("unreachable policy kind");
}

double aod(const PolicySpec& policy, ArrivalRate rate) {
  return expected_wait(policy, rate) /
         (rate.lambda * expected_cycle(policy, rate));
}

double avg_cost(const PolicySpec& policy, ArrivalRate rate,
                const CostParams& costs) {
  costs.validate();
  const double ec = expected_cycle(policy, rate);
  const double ew = expected_wait(policy, rate);
  return (costs.fixed_dispatch + costs.unit_transport * rate.lambda * ec +
          costs.waiting_rate * ew) /
         ec;
}

PolicyMetrics evaluate(const PolicySpec& policy, ArrivalRate rate,
                       const std::optional<CostParams>& costs) {
  PolicyMetrics m;
  m.expected_cycle = expected_cycle(policy, rate);
  m.expected_wait = expected_wait(policy, rate);
  m.expected_orders = rate.lambda * m.expected_cycle;
  m.aod = m.expected_wait / (rate.lambda * m.expected_cycle);
  if (costs) m.avg_cost = avg_cost(policy, rate, *costs);
  return m;
}

}  // namespace clearsim
