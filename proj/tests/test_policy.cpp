#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "clearsim/policy.hpp"

using namespace clearsim;

namespace {

// AOD recomputed straight from truncated moments, the generic stopping-time
// form E[N^2 - N] / (2 lambda E[N]).
double hp1_aod_from_moments(std::int64_t q, double T, double lambda) {
  const TruncatedMoments m = truncated_moments(PoissonParam(lambda * T), q);
  return (m.m2 - m.m1) / (2.0 * lambda * m.m1);
}

double hp2_aod_from_moments(std::int64_t q, double T, double lambda) {
  const TruncatedMoments m = truncated_moments(PoissonParam(lambda * T), q - 1);
  return (m.m2 + m.m1) / (2.0 * lambda * (1.0 + m.m1));
}

}  // namespace

TEST_SUITE_BEGIN("policy");

TEST_CASE("spec construction and validation") {
  CHECK_NOTHROW(PolicySpec::qp(1));
  CHECK_NOTHROW(PolicySpec::hp2(2, 1.0));
  CHECK_THROWS_AS(PolicySpec::qp(0), std::invalid_argument);
  CHECK_THROWS_AS(PolicySpec::hp1(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PolicySpec::hp2(1, 1.0), std::invalid_argument);  // q >= 2
  CHECK_THROWS_AS(PolicySpec::tp1(0.0), std::invalid_argument);
  CHECK_THROWS_AS(PolicySpec::tp1(-2.0), std::invalid_argument);
  CHECK_THROWS_AS(PolicySpec::rhp1(3, 0.0), std::invalid_argument);

  PolicySpec bad{PolicyKind::QP, 3, 1.0};  // extraneous T
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  PolicySpec bad2{PolicyKind::TP1, 3, 1.0};  // extraneous q
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
  PolicySpec bad3{PolicyKind::HP1, std::nullopt, 1.0};  // missing q
  CHECK_THROWS_AS(bad3.validate(), std::invalid_argument);

  CHECK_THROWS_AS(ArrivalRate(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ArrivalRate(-1.0), std::invalid_argument);

  // lambda*T above the supported range is rejected at evaluation.
  CHECK_THROWS_AS(expected_cycle(PolicySpec::tp1(3000.0), ArrivalRate(5.0)),
                  std::domain_error);

  CHECK(policy_kind_from_string("rtp1") == PolicyKind::RTP1);
  CHECK(!policy_kind_from_string("xp9").has_value());
}

TEST_CASE("expected cycle lengths") {
  const ArrivalRate one(1.0);
  CHECK(expected_cycle(PolicySpec::qp(3), one) == 3.0);
  CHECK(expected_cycle(PolicySpec::tp1(2.5), one) == 2.5);
  CHECK(expected_cycle(PolicySpec::tp2(1.0), ArrivalRate(2.0)) == 1.5);
  CHECK(expected_cycle(PolicySpec::hp1(2, 1.0), one) ==
        doctest::Approx(2.0 - 3.0 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(expected_cycle(PolicySpec::hp2(3, 1.0), one) ==
        doctest::Approx(1.0 + truncated_mean(PoissonParam(1.0), 2)).epsilon(1e-14));
  CHECK(expected_cycle(PolicySpec::rtp1(1.0), one) ==
        doctest::Approx(1.5819767068693265).epsilon(1e-14));
  CHECK(expected_cycle(PolicySpec::rhp1(2, 1.0), one) ==
        doctest::Approx((2.0 - 3.0 * std::exp(-1.0)) /
                        (1.0 - std::exp(-1.0))).epsilon(1e-14));
}

TEST_CASE("expected cumulative waits") {
  const ArrivalRate one(1.0);
  CHECK(expected_wait(PolicySpec::qp(3), one) == 3.0);
  CHECK(expected_wait(PolicySpec::tp1(2.0), one) == 2.0);
  CHECK(expected_wait(PolicySpec::tp2(1.0), one) == 1.5);
  // (m2 - m1)/2 at mu=1, q=2 collapses to 1 - 2/e.
  CHECK(expected_wait(PolicySpec::hp1(2, 1.0), one) ==
        doctest::Approx(1.0 - 2.0 * std::exp(-1.0)).epsilon(1e-13));
  CHECK(expected_wait(PolicySpec::rtp1(2.0), one) ==
        doctest::Approx(2.0 / (1.0 - std::exp(-2.0))).epsilon(1e-14));
  // QP with q=1 ships every order instantly.
  CHECK(expected_wait(PolicySpec::qp(1), one) == 0.0);
}

TEST_CASE("aod closed forms and frozen points") {
  CHECK(aod(PolicySpec::qp(5), ArrivalRate(1.0)) == 2.0);
  CHECK(aod(PolicySpec::tp1(2.0), ArrivalRate(3.0)) == 1.0);
  CHECK(aod(PolicySpec::qp(1), ArrivalRate(7.0)) == 0.0);
  CHECK(aod(PolicySpec::hp1(2, 1.0), ArrivalRate(1.0)) ==
        doctest::Approx(0.29479296648771758).epsilon(1e-13));
  CHECK(aod(PolicySpec::hp1(2, 1.0), ArrivalRate(1.0)) ==
        doctest::Approx((1.0 - 2.0 * std::exp(-1.0)) /
                        (2.0 - 3.0 * std::exp(-1.0))).epsilon(1e-14));
}

TEST_CASE("aod shortcuts agree with the ratio definition") {
  const std::vector<double> lambdas{0.5, 1.0, 2.0, 5.0};
  const std::vector<double> times{0.5, 1.0, 2.0, 5.0};
  for (double lambda : lambdas) {
    const ArrivalRate rate(lambda);
    for (double T : times) {
      CHECK(aod(PolicySpec::tp1(T), rate) ==
            doctest::Approx(0.5 * T).epsilon(1e-12));
      CHECK(aod(PolicySpec::tp2(T), rate) ==
            doctest::Approx((T + 0.5 * lambda * T * T) / (1.0 + lambda * T))
                .epsilon(1e-12));
      // The empty-window factor cancels exactly in the ratio.
      CHECK(aod(PolicySpec::rtp1(T), rate) ==
            doctest::Approx(0.5 * T).epsilon(1e-12));
      for (std::int64_t q : {1, 2, 3, 5, 8}) {
        CHECK(aod(PolicySpec::hp1(q, T), rate) ==
              doctest::Approx(hp1_aod_from_moments(q, T, lambda)).epsilon(1e-12));
        if (q >= 2) {
          CHECK(aod(PolicySpec::hp2(q, T), rate) ==
                doctest::Approx(hp2_aod_from_moments(q, T, lambda)).epsilon(1e-12));
        }
      }
    }
    for (std::int64_t q : {1, 2, 5, 9}) {
      CHECK(aod(PolicySpec::qp(q), rate) ==
            doctest::Approx((q - 1.0) / (2.0 * lambda)).epsilon(1e-12));
    }
  }
}

TEST_CASE("revised policies match their base AOD exactly") {
  for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
    const ArrivalRate rate(lambda);
    for (double T : {0.5, 1.0, 2.0, 5.0}) {
      const double rtp1 = aod(PolicySpec::rtp1(T), rate);
      const double tp1 = aod(PolicySpec::tp1(T), rate);
      CHECK(std::abs(rtp1 - tp1) <= 1e-14 * std::max(rtp1, tp1));
      for (std::int64_t q : {1, 2, 4, 7}) {
        const double rhp1 = aod(PolicySpec::rhp1(q, T), rate);
        const double hp1 = aod(PolicySpec::hp1(q, T), rate);
        CHECK(std::abs(rhp1 - hp1) <= 1e-14 * std::max(rhp1, hp1));
      }
    }
  }
}

TEST_CASE("hybrids degenerate to their limits") {
  // q -> infinity: the quantity trigger never fires.
  for (double lambda : {1.0, 2.0}) {
    const ArrivalRate rate(lambda);
    for (double T : {1.0, 2.0}) {
      CHECK(std::abs(aod(PolicySpec::hp1(1000000, T), rate) -
                     aod(PolicySpec::tp1(T), rate)) < 1e-6);
      CHECK(std::abs(aod(PolicySpec::hp2(1000000, T), rate) -
                     aod(PolicySpec::tp2(T), rate)) < 1e-6);
      CHECK(std::abs(aod(PolicySpec::rhp1(1000000, T), rate) -
                     aod(PolicySpec::rtp1(T), rate)) < 1e-6);
    }
  }
  // lambda*T at the supported extreme: the deadline never fires.
  const ArrivalRate one(1.0);
  for (std::int64_t q : {2, 5}) {
    const double qp_val = aod(PolicySpec::qp(q), one);
    CHECK(std::abs(aod(PolicySpec::hp1(q, 1e4), one) - qp_val) < 1e-6);
    CHECK(std::abs(aod(PolicySpec::hp2(q, 1e4), one) - qp_val) < 1e-6);
    CHECK(std::abs(aod(PolicySpec::rhp1(q, 1e4), one) - qp_val) < 1e-6);
  }
}

TEST_CASE("average cost") {
  const ArrivalRate one(1.0);
  CHECK(avg_cost(PolicySpec::qp(1), one, {10.0, 0.0, 1.0}) == 10.0);
  CHECK(avg_cost(PolicySpec::qp(3), one, {6.0, 2.0, 1.0}) ==
        doctest::Approx(5.0).epsilon(1e-15));
  CHECK(avg_cost(PolicySpec::tp1(2.0), one, {0.0, 0.0, 1.0}) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(avg_cost(PolicySpec::qp(3), one, {-1.0, 0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("evaluate bundles consistent metrics") {
  const ArrivalRate rate(2.0);
  const PolicySpec spec = PolicySpec::hp1(5, 1.5);
  const PolicyMetrics m = evaluate(spec, rate, CostParams{1.0, 0.5, 2.0});
  CHECK(m.expected_orders == rate.lambda * m.expected_cycle);
  CHECK(m.aod == m.expected_wait / (rate.lambda * m.expected_cycle));
  CHECK(m.avg_cost.has_value());
  CHECK(*m.avg_cost ==
        doctest::Approx((1.0 + 0.5 * m.expected_orders + 2.0 * m.expected_wait) /
                        m.expected_cycle).epsilon(1e-15));
  CHECK(!evaluate(spec, rate).avg_cost.has_value());
}

TEST_SUITE_END();
