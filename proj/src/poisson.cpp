#include "clearsim/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace clearsim {
namespace {

// Above this, e^{-mu} underflows in double and per-term log-space evaluation
// takes over.
constexpr double kRecurrenceLimit = 700.0;

// Relative cutoff for convergent tail sums: terms are monotone once past the
// mode, so a term this small can no longer move the sum.
constexpr double kTailEps = 1e-18;

double log_pmf(double mu, std::int64_t k) {
  return -mu + static_cast<double>(k) * std::log(mu) -
         std::lgamma(static_cast<double>(k) + 1.0);
}

// P(Y >= n) summed upward from p_n; requires n > mu so terms decrease.
double upper_tail(double mu, std::int64_t n) {
  double term = std::exp(log_pmf(mu, n));
  if (term == 0.0) return 0.0;
  double sum = 0.0;
  for (std::int64_t k = n;; ++k) {
    sum += term;
    term *= mu / static_cast<double>(k + 1);
    if (term <= sum * kTailEps) break;
  }
  return std::min(sum, 1.0);
}

// sum_{k<n} p_k; requires n-1 <= mu so terms grow toward k = n-1.
double lower_cum(double mu, std::int64_t n) {
  if (n <= 0) return 0.0;
  if (mu <= kRecurrenceLimit) {
    double term = std::exp(-mu);
    double sum = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
      sum += term;
      term *= mu / static_cast<double>(k + 1);
    }
    return sum;
  }
  // Large mean: walk down from the largest term.
  double term = std::exp(log_pmf(mu, n - 1));
  double sum = 0.0;
  for (std::int64_t k = n - 1; k >= 0; --k) {
    sum += term;
    if (term <= sum * kTailEps) break;
    term *= static_cast<double>(k) / mu;
  }
  return sum;
}

double survival_impl(double mu, std::int64_t n) {
  if (n <= 0) return 1.0;
  if (n == 1) return -std::expm1(-mu);
  if (static_cast<double>(n) > mu) return upper_tail(mu, n);
  return std::max(0.0, 1.0 - lower_cum(mu, n));
}

struct WeightedSums {
  double s1 = 0.0;  // sum k        p_k over k < q
  double s2 = 0.0;  // sum k^2      p_k over k < q
  double sf = 0.0;  // sum k(k-1)   p_k over k < q
};

WeightedSums moment_sums_below(double mu, std::int64_t q) {
  WeightedSums out;
  if (q <= 1) return out;
  const auto take = [&out](std::int64_t k, double term) {
    const double kd = static_cast<double>(k);
    out.s1 += kd * term;
    out.s2 += kd * kd * term;
    out.sf += kd * (kd - 1.0) * term;
  };
  if (mu <= kRecurrenceLimit) {
    double term = std::exp(-mu);
    for (std::int64_t k = 1; k < q; ++k) {
      term *= mu / static_cast<double>(k);
      take(k, term);
      if (term == 0.0) break;
      const double kd = static_cast<double>(k);
      if (kd > mu && kd * kd * term <= out.s2 * kTailEps) break;
    }
    return out;
  }
  // Large mean: two-sided sweep from the mode, each side monotone.
  const std::int64_t mode = std::min<std::int64_t>(
      static_cast<std::int64_t>(mu), q - 1);
  const double base = std::exp(log_pmf(mu, mode));
  double term = base;
  for (std::int64_t k = mode; k >= 1; --k) {
    take(k, term);
    if (static_cast<double>(k) * static_cast<double>(k) * term <=
        out.s2 * kTailEps)
      break;
    term *= static_cast<double>(k) / mu;
  }
  term = base;
  for (std::int64_t k = mode + 1; k < q; ++k) {
    term *= mu / static_cast<double>(k);
    take(k, term);
    if (term == 0.0) break;
    const double kd = static_cast<double>(k);
    if (kd > mu && kd * kd * term <= out.s2 * kTailEps) break;
  }
  return out;
}

// sum (k-M) p_k and sum (k-M)^2 p_k over k > M.
WeightedSums excess_sums_above(double mu, std::int64_t M) {
  WeightedSums out;
  double term = std::exp(log_pmf(mu, M + 1));
  if (term == 0.0) return out;
  for (std::int64_t j = 1;; ++j) {
    const double jd = static_cast<double>(j);
    out.s1 += jd * term;
    out.s2 += jd * jd * term;
    const std::int64_t k = M + j;
    term *= mu / static_cast<double>(k + 1);
    if (static_cast<double>(k) > mu &&
        (jd + 1.0) * (jd + 1.0) * term <= out.s2 * kTailEps)
      break;
    if (term == 0.0) break;
  }
  return out;
}

// sum (M-k) p_k over k < M.
double deficit_sum_below(double mu, std::int64_t M) {
  if (M <= 0) return 0.0;
  if (mu <= kRecurrenceLimit) {
    double term = std::exp(-mu);
    double sum = static_cast<double>(M) * term;  // k = 0
    for (std::int64_t k = 1; k < M; ++k) {
      term *= mu / static_cast<double>(k);
      sum += static_cast<double>(M - k) * term;
      if (term == 0.0) break;
    }
    return sum;
  }
  const std::int64_t top = std::min<std::int64_t>(
      static_cast<std::int64_t>(mu), M - 1);
  double term = std::exp(log_pmf(mu, top));
  double sum = 0.0;
  for (std::int64_t k = top; k >= 0; --k) {
    sum += static_cast<double>(M - k) * term;
    if (static_cast<double>(M - k) * term <= sum * kTailEps) break;
    term *= static_cast<double>(k) / mu;
  }
  return sum;
}

void require_positive_level(std::int64_t q, const char* what) {
  if (q < 1)
    throw std::invalid_argument(std::string(what) +
                                " must be a positive integer, got " +
                                std::to_string(q));
}

double zero_truncation_denominator(double mu) {
  const double denom = -std::expm1(-mu);
  if (!(denom >= std::numeric_limits<double>::min()))
    throw std::domain_error(
        "conditioning on Y>0 is degenerate: P(Y>0) underflows for mu = " +
        std::to_string(mu));
  return denom;
}

}  // namespace

PoissonParam::PoissonParam(double mean) : mu(mean) {
  if (!std::isfinite(mean) || mean <= 0.0)
    throw std::domain_error("Poisson mean must be positive and finite, got " +
                            std::to_string(mean));
  if (mean > kMaxPoissonMean)
    throw std::domain_error("Poisson mean " + std::to_string(mean) +
                            " above supported range " +
                            std::to_string(kMaxPoissonMean));
}

double pmf(PoissonParam p, std::int64_t k) {
  if (k < 0)
    throw std::invalid_argument("pmf requires k >= 0, got " +
                                std::to_string(k));
  if (p.mu > kRecurrenceLimit) return std::exp(log_pmf(p.mu, k));
  double term = std::exp(-p.mu);
  for (std::int64_t i = 1; i <= k; ++i) {
    term *= p.mu / static_cast<double>(i);
    if (term == 0.0) return 0.0;
  }
  return term;
}

double survival(PoissonParam p, std::int64_t n) {
  if (n < 0)
    throw std::invalid_argument("survival requires n >= 0, got " +
                                std::to_string(n));
  return survival_impl(p.mu, n);
}

double truncated_mean(PoissonParam p, std::int64_t q) {
  require_positive_level(q, "truncation level q");
  const WeightedSums s = moment_sums_below(p.mu, q);
  return s.s1 + static_cast<double>(q) * survival_impl(p.mu, q);
}

double truncated_second_moment(PoissonParam p, std::int64_t q) {
  require_positive_level(q, "truncation level q");
  const WeightedSums s = moment_sums_below(p.mu, q);
  const double qd = static_cast<double>(q);
  return s.s2 + qd * qd * survival_impl(p.mu, q);
}

double truncated_factorial_moment(PoissonParam p, std::int64_t q) {
  require_positive_level(q, "truncation level q");
  const WeightedSums s = moment_sums_below(p.mu, q);
  const double qd = static_cast<double>(q);
  return s.sf + qd * (qd - 1.0) * survival_impl(p.mu, q);
}

TruncatedMoments truncated_moments(PoissonParam p, std::int64_t q) {
  require_positive_level(q, "truncation level q");
  const WeightedSums s = moment_sums_below(p.mu, q);
  const double tail = survival_impl(p.mu, q);
  const double qd = static_cast<double>(q);
  TruncatedMoments m;
  m.q = q;
  m.m1 = s.s1 + qd * tail;
  m.m2 = s.s2 + qd * qd * tail;
  m.var = std::max(0.0, m.m2 - m.m1 * m.m1);
  return m;
}

std::pair<double, double> var_var_gap_routes(PoissonParam p, std::int64_t M) {
  require_positive_level(M, "truncation level M");
  const double mu = p.mu;
  const double m1 = truncated_mean(p, M);
  const WeightedSums tail = excess_sums_above(mu, M);  // E[(Y-M)^k 1{Y>M}]
  const double deficit = deficit_sum_below(mu, M);     // M - E[Y_M]

  // (a) moment differences: (E[Y^2]-E[Y_M^2]) - (E[Y]+E[Y_M])(E[Y]-E[Y_M]),
  //     with E[Y^2]-E[Y_M^2] = S2 + 2M S1 and E[Y]-E[Y_M] = S1.
  const double route_a =
      tail.s2 + 2.0 * static_cast<double>(M) * tail.s1 - tail.s1 * (mu + m1);
  // (b) covariance decomposition VAR[Y-Y_M] + 2 (M-E[Y_M]) (E[Y]-E[Y_M]).
  const double route_b =
      (tail.s2 - tail.s1 * tail.s1) + 2.0 * deficit * tail.s1;
  return {route_a, route_b};
}

double var_var_gap(PoissonParam p, std::int64_t M) {
  const auto [a, b] = var_var_gap_routes(p, M);
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  if (std::abs(a - b) > 1e-10 * scale)
    throw std::logic_error(
        "variance-gap routes disagree: moments route " + std::to_string(a) +
        " vs decomposition route " + std::to_string(b));
  return b;
}

double mean_minus_variance(PoissonParam p, std::int64_t n) {
  require_positive_level(n, "truncation level n");
  const double mu = p.mu;
  const double nd = static_cast<double>(n);
  if (nd >= mu + 0.5) {
    // Tail form: E - VAR = sum_j j (j + 2n - 1 - 2mu) p_{n+j} + S1^2,
    // all terms nonnegative in this regime.
    const WeightedSums tail = excess_sums_above(mu, n);
    return (tail.s2 + (2.0 * nd - 1.0 - 2.0 * mu) * tail.s1) +
           tail.s1 * tail.s1;
  }
  const TruncatedMoments m = truncated_moments(p, n);
  return m.m1 - m.var;
}

double zero_truncated_mean(PoissonParam p, std::int64_t q) {
  require_positive_level(q, "truncation level q");
  return truncated_mean(p, q) / zero_truncation_denominator(p.mu);
}

double zero_truncated_second_moment(PoissonParam p, std::int64_t q) {
  require_positive_level(q, "truncation level q");
  return truncated_second_moment(p, q) / zero_truncation_denominator(p.mu);
}

double zero_truncated_survival(PoissonParam p, std::int64_t n) {
  require_positive_level(n, "level n");
  return survival_impl(p.mu, n + 1) / zero_truncation_denominator(p.mu);
}

double moment_ratio(PoissonParam p, std::int64_t N) {
  require_positive_level(N, "truncation level N");
  const TruncatedMoments m = truncated_moments(p, N);
  return m.m2 / m.m1;
}

}  // namespace clearsim
