#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clearsim/calibrate.hpp"
#include "clearsim/policy.hpp"

namespace clearsim {

/// One certified claim. For strict inequalities margin is the signed slack
/// (positive means satisfied); for equality claims margin is the signed
/// relative deviation and |margin| <= 1e-14 counts as holding. Tolerance
/// claims (simulation 3-sigma checks, limit checks) hold when margin >= 0.
struct Verdict {
  std::string claim;
  bool holds = false;
  double margin = 0.0;
  bool equality = false;
};

struct ReportRow {
  PolicySpec policy;
  PolicyMetrics metrics;
};

struct ComparisonReport {
  std::string scenario;  // fixed-cycle | fixed-params | lemma-suite | ...
  std::optional<double> lambda;
  std::optional<double> target_cycle;
  std::optional<std::int64_t> q;
  std::optional<double> T;
  std::vector<ReportRow> rows;
  std::vector<Verdict> verdicts;
  std::vector<std::string> advisories;

  bool all_hold() const;
};

inline constexpr double kEqualityTolerance = 1e-14;

/// Calibrates every feasible policy to the same expected cycle length and
/// certifies: QP weakly best; HP1 < TP1 and HP2 < TP2 per quantity; AOD of
/// HP1/HP2/RHP1 increasing in q; RHP1 < RTP1. Infeasible policies (and a
/// non-integral QP target) are recorded as advisories, not errors.
ComparisonReport compare_fixed_cycle(
    ArrivalRate rate, CycleTarget target,
    const std::vector<std::int64_t>& q_list,
    const std::optional<CostParams>& costs = std::nullopt);

/// Evaluates all seven policies at shared parameters (q, T) and certifies
/// HP1 < min(QP, TP1), HP2 < min(QP, TP2), HP1 < HP2, plus the exact
/// revised-policy equalities AOD_RHP1 = AOD_HP1 and AOD_RTP1 = AOD_TP1.
ComparisonReport compare_fixed_params(
    ArrivalRate rate, std::int64_t q, double T,
    const std::optional<CostParams>& costs = std::nullopt);

struct LemmaGrids {
  std::vector<double> mu_values;   // coarse grid for the variance lemmas
  std::int64_t truncation_max = 50;  // M, N sweep upper bound
  std::int64_t pair_q_max = 30;      // q sweep for the two-variable lemma
  std::vector<double> mu_fine;       // fine grid for monotonicity lemmas
  std::int64_t ratio_n_max = 30;     // truncation levels for moment_ratio
  std::int64_t conditional_n_max = 20;  // levels for zero-truncated survival
};

LemmaGrids default_lemma_grids();

/// Per-grid-point certificates of the truncated-moment lemmas: the
/// variance-gap identity and its positivity, VAR < E after truncation, the
/// paired second-moment comparison, and both monotonicity results.
ComparisonReport lemma_suite(const LemmaGrids& grids);

}  // namespace clearsim
