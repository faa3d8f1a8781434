#pragma once

#include <cstdint>
#include <vector>

#include "clearsim/compare.hpp"
#include "clearsim/sim.hpp"

namespace clearsim {

struct SimCheckPoint {
  double lambda = 1.0;
  std::int64_t q = 5;
  double T = 1.0;
};

struct VerifyConfig {
  std::vector<double> lambdas{0.5, 1.0, 2.0, 5.0};
  // Targets are factor/lambda so QP stays attainable on every grid point.
  std::vector<double> cycle_factors{2.0, 3.0, 5.0};
  std::vector<std::int64_t> q_list{2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> T_values{0.5, 1.0, 2.0, 5.0};
  std::vector<SimCheckPoint> sim_points{{2.0, 5, 1.5}, {0.5, 3, 4.0}};
  std::int64_t n_cycles = 100000;
  std::uint64_t seed = 0;
  LemmaGrids lemma = default_lemma_grids();
};

struct VerifySummary {
  std::vector<ComparisonReport> reports;
  std::int64_t total_verdicts = 0;
  std::int64_t failed_verdicts = 0;
  bool all_hold() const { return failed_verdicts == 0; }
};

/// Runs the complete certification battery: the lemma suite, every
/// fixed-cycle and fixed-parameter comparison over the configured grids,
/// simulation cross-checks of all seven policies against the closed forms
/// (3-sigma), the optional-stopping residual checks for the five base
/// policies, and the degeneration limits of the hybrid policies.
/// Deterministic for a fixed config.
VerifySummary run_verification(const VerifyConfig& config);

}  // namespace clearsim
