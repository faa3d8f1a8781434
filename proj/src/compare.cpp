#include "clearsim/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace clearsim {
namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Verdict strict_claim(std::string claim, double margin) {
  return {std::move(claim), margin > 0.0, margin, false};
}

Verdict equality_claim(std::string claim, double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  const double rel = (a - b) / scale;
  return {std::move(claim), std::abs(rel) <= kEqualityTolerance, rel, true};
}

struct CalibratedRow {
  std::int64_t q = 0;  // 0 for the policies without a quantity parameter
  double aod = 0.0;
};

}  // namespace

bool ComparisonReport::all_hold() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.holds; });
}

ComparisonReport compare_fixed_cycle(ArrivalRate rate, CycleTarget target,
                                     const std::vector<std::int64_t>& q_list,
                                     const std::optional<CostParams>& costs) {
  ComparisonReport report;
  report.scenario = "fixed-cycle";
  report.lambda = rate.lambda;
  report.target_cycle = target.value;

  const auto add_row = [&](const PolicySpec& spec) {
    report.rows.push_back({spec, evaluate(spec, rate, costs)});
    return report.rows.back().metrics.aod;
  };

  // Policies without a quantity parameter calibrate unconditionally when
  // feasible; QP additionally needs lambda*target to be an integer.
  std::optional<double> aod_qp;
  try {
    aod_qp = add_row(calibrate(PolicyKind::QP, std::nullopt, target, rate));
  } catch (const IntegralityError& e) {
    std::string note = std::string("qp: ") + e.what();
    const double x = rate.lambda * target.value;
    const auto lo = static_cast<std::int64_t>(std::floor(x));
    const auto hi = static_cast<std::int64_t>(std::ceil(x));
    for (std::int64_t k : {lo, hi}) {
      if (k < 1 || static_cast<double>(k) == x) continue;
      note += "; nearest qp q=" + std::to_string(k) +
              " attains E[C]=" + fmt(static_cast<double>(k) / rate.lambda) +
              " with AOD=" + fmt(aod(PolicySpec::qp(k), rate));
    }
    report.advisories.push_back(note);
  }

  std::optional<double> aod_tp1, aod_tp2, aod_rtp1;
  const auto try_plain = [&](PolicyKind kind, std::optional<double>& out) {
    try {
      out = add_row(calibrate(kind, std::nullopt, target, rate));
    } catch (const FeasibilityError& e) {
      report.advisories.push_back(std::string(to_string(kind)) + ": " +
                                  e.what());
    }
  };
  try_plain(PolicyKind::TP1, aod_tp1);
  try_plain(PolicyKind::TP2, aod_tp2);
  try_plain(PolicyKind::RTP1, aod_rtp1);

  std::vector<std::int64_t> qs = q_list;
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());

  std::vector<CalibratedRow> hp1, hp2, rhp1;
  for (std::int64_t q : qs) {
    const auto try_hybrid = [&](PolicyKind kind, std::vector<CalibratedRow>& out) {
      try {
        out.push_back({q, add_row(calibrate(kind, q, target, rate))});
      } catch (const std::invalid_argument& e) {
        report.advisories.push_back(std::string(to_string(kind)) +
                                    " q=" + std::to_string(q) + ": " + e.what());
      } catch (const FeasibilityError& e) {
        report.advisories.push_back(std::string(to_string(kind)) +
                                    " q=" + std::to_string(q) + ": " + e.what());
      }
    };
    try_hybrid(PolicyKind::HP1, hp1);
    try_hybrid(PolicyKind::HP2, hp2);
    try_hybrid(PolicyKind::RHP1, rhp1);
  }

  // QP is weakly optimal among all renewal-type policies at fixed E[C].
  if (aod_qp) {
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const ReportRow& row = report.rows[i];
      if (row.policy.kind == PolicyKind::QP) continue;
      std::string label = to_string(row.policy.kind);
      if (row.policy.q) label += "(q=" + std::to_string(*row.policy.q) + ")";
      report.verdicts.push_back(strict_claim(
          "qp-optimal: aod(qp) < aod(" + label + ")",
          row.metrics.aod - *aod_qp));
    }
  }

  // Hybrids beat their time-based counterparts at every quantity level.
  for (const CalibratedRow& r : hp1) {
    if (aod_tp1)
      report.verdicts.push_back(
          strict_claim("hp1-vs-tp1: aod(hp1 q=" + std::to_string(r.q) +
                           ") < aod(tp1)",
                       *aod_tp1 - r.aod));
  }
  for (const CalibratedRow& r : hp2) {
    if (aod_tp2)
      report.verdicts.push_back(
          strict_claim("hp2-vs-tp2: aod(hp2 q=" + std::to_string(r.q) +
                           ") < aod(tp2)",
                       *aod_tp2 - r.aod));
  }
  for (const CalibratedRow& r : rhp1) {
    if (aod_rtp1)
      report.verdicts.push_back(
          strict_claim("rhp1-vs-rtp1: aod(rhp1 q=" + std::to_string(r.q) +
                           ") < aod(rtp1)",
                       *aod_rtp1 - r.aod));
  }

  // AOD grows with the quantity parameter at fixed E[C].
  const auto monotone = [&](const char* name,
                            const std::vector<CalibratedRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      report.verdicts.push_back(strict_claim(
          std::string(name) + "-monotone: aod(q=" +
              std::to_string(rows[i - 1].q) + ") < aod(q=" +
              std::to_string(rows[i].q) + ")",
          rows[i].aod - rows[i - 1].aod));
    }
  };
  monotone("hp1", hp1);
  monotone("hp2", hp2);
  monotone("rhp1", rhp1);

  return report;
}

ComparisonReport compare_fixed_params(ArrivalRate rate, std::int64_t q,
                                      double T,
                                      const std::optional<CostParams>& costs) {
  if (q < 2)
    throw std::invalid_argument(
        "fixed-parameter comparison requires q >= 2 so hp2 is defined");

  ComparisonReport report;
  report.scenario = "fixed-params";
  report.lambda = rate.lambda;
  report.q = q;
  report.T = T;

  const PolicySpec specs[] = {
      PolicySpec::qp(q),      PolicySpec::tp1(T),      PolicySpec::tp2(T),
      PolicySpec::hp1(q, T),  PolicySpec::hp2(q, T),   PolicySpec::rtp1(T),
      PolicySpec::rhp1(q, T)};
  double aods[7] = {};
  for (int i = 0; i < 7; ++i) {
    report.rows.push_back({specs[i], evaluate(specs[i], rate, costs)});
    aods[i] = report.rows.back().metrics.aod;
  }
  const double a_qp = aods[0], a_tp1 = aods[1], a_tp2 = aods[2];
  const double a_hp1 = aods[3], a_hp2 = aods[4], a_rtp1 = aods[5];
  const double a_rhp1 = aods[6];

  report.verdicts.push_back(
      strict_claim("hp1-vs-qp: aod(hp1) < aod(qp)", a_qp - a_hp1));
  report.verdicts.push_back(
      strict_claim("hp1-vs-tp1: aod(hp1) < aod(tp1)", a_tp1 - a_hp1));
  report.verdicts.push_back(
      strict_claim("hp2-vs-qp: aod(hp2) < aod(qp)", a_qp - a_hp2));
  report.verdicts.push_back(
      strict_claim("hp2-vs-tp2: aod(hp2) < aod(tp2)", a_tp2 - a_hp2));
  report.verdicts.push_back(
      strict_claim("hp1-vs-hp2: aod(hp1) < aod(hp2)", a_hp2 - a_hp1));
  report.verdicts.push_back(
      equality_claim("revised: aod(rhp1) == aod(hp1)", a_rhp1, a_hp1));
  report.verdicts.push_back(
      equality_claim("revised: aod(rtp1) == aod(tp1)", a_rtp1, a_tp1));
  return report;
}

LemmaGrids default_lemma_grids() {
  LemmaGrids g;
  g.mu_values = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0};
  g.truncation_max = 50;
  g.pair_q_max = 30;
  g.mu_fine.clear();
  for (int i = 1; i <= 100; ++i) g.mu_fine.push_back(i / 10.0);
  g.ratio_n_max = 30;
  g.conditional_n_max = 20;
  return g;
}

ComparisonReport lemma_suite(const LemmaGrids& grids) {
  if (grids.mu_values.empty() || grids.mu_fine.empty())
    throw std::invalid_argument("lemma grids must be nonempty");

  ComparisonReport report;
  report.scenario = "lemma-suite";

  // Variance-gap identity and strict positivity.
  for (double mu : grids.mu_values) {
    for (std::int64_t M = 1; M <= grids.truncation_max; ++M) {
      const auto [a, b] = var_var_gap_routes(PoissonParam(mu), M);
      const std::string at = "(mu=" + fmt(mu) + ",M=" + std::to_string(M) + ")";
      Verdict identity = equality_claim("var-gap-identity" + at, a, b);
      identity.holds = std::abs(identity.margin) <= 1e-10;
      report.verdicts.push_back(identity);
      report.verdicts.push_back(strict_claim("var-gap-positive" + at, b));
    }
  }

  // Truncation keeps the variance strictly below the mean.
  for (double mu : grids.mu_values) {
    for (std::int64_t N = 1; N <= grids.truncation_max; ++N) {
      report.verdicts.push_back(strict_claim(
          "var-below-mean(mu=" + fmt(mu) + ",N=" + std::to_string(N) + ")",
          mean_minus_variance(PoissonParam(mu), N)));
    }
  }

  // Paired second-moment comparison under the first-moment hypothesis.
  for (double mu1 : grids.mu_values) {
    for (double mu2 : grids.mu_values) {
      if (mu1 <= mu2) continue;
      for (std::int64_t q = 1; q <= grids.pair_q_max; ++q) {
        const double mx1 = truncated_mean(PoissonParam(mu1), q);
        const double my1 = truncated_mean(PoissonParam(mu2), q + 1);
        if (mx1 > my1) continue;  // hypothesis fails; claim is vacuous here
        const double mx2 = truncated_second_moment(PoissonParam(mu1), q);
        const double my2 = truncated_second_moment(PoissonParam(mu2), q + 1);
        Verdict v = strict_claim("second-moment-pair(mu1=" + fmt(mu1) +
                                     ",mu2=" + fmt(mu2) +
                                     ",q=" + std::to_string(q) + ")",
                                 my2 - mx2);
        v.holds = v.margin > -1e-12;  // noise slack around the weak inequality
        report.verdicts.push_back(v);
      }
    }
  }

  // Moment ratio increases with mu at every truncation level. N = 1 is the
  // indicator case where the ratio is identically 1, so strictness starts
  // at N = 2.
  for (double mu : grids.mu_fine) {
    report.verdicts.push_back(equality_claim(
        "moment-ratio-indicator(mu=" + fmt(mu) + ")",
        moment_ratio(PoissonParam(mu), 1), 1.0));
  }
  for (std::int64_t N = 2; N <= grids.ratio_n_max; ++N) {
    double prev = moment_ratio(PoissonParam(grids.mu_fine.front()), N);
    for (std::size_t i = 1; i < grids.mu_fine.size(); ++i) {
      const double cur = moment_ratio(PoissonParam(grids.mu_fine[i]), N);
      report.verdicts.push_back(strict_claim(
          "moment-ratio-increasing(N=" + std::to_string(N) + ",mu=" +
              fmt(grids.mu_fine[i - 1]) + "->" + fmt(grids.mu_fine[i]) + ")",
          cur - prev));
      prev = cur;
    }
  }

  // Zero-truncated survival increases with mu at every level.
  for (std::int64_t n = 1; n <= grids.conditional_n_max; ++n) {
    double prev = zero_truncated_survival(PoissonParam(grids.mu_fine.front()), n);
    for (std::size_t i = 1; i < grids.mu_fine.size(); ++i) {
      const double cur = zero_truncated_survival(PoissonParam(grids.mu_fine[i]), n);
      report.verdicts.push_back(strict_claim(
          "conditional-survival-increasing(n=" + std::to_string(n) + ",mu=" +
              fmt(grids.mu_fine[i - 1]) + "->" + fmt(grids.mu_fine[i]) + ")",
          cur - prev));
      prev = cur;
    }
  }

  return report;
}

}  // namespace clearsim
