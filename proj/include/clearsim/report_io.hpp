#pragma once

#include <optional>
#include <string>

#include "clearsim/compare.hpp"
#include "clearsim/sim.hpp"
#include "clearsim/verify.hpp"

namespace clearsim {

// JSON / CSV serialization of the public result types. Doubles are emitted
// in shortest round-trip form (JSON) or with 17 significant digits (CSV),
// so parsed-back values are bit-identical.

std::string policy_to_json(const PolicySpec& policy);
std::string metrics_to_json(const PolicySpec& policy, double lambda,
                            const PolicyMetrics& metrics);
std::string estimate_to_json(const PolicySpec& policy, double lambda,
                             const SimEstimate& estimate);
std::string report_to_json(const ComparisonReport& report);
std::string summary_to_json(const VerifySummary& summary, std::uint64_t seed);

/// Flat CSV, one row per policy: kind,q,T,E_C,E_W,AOD,avg_cost.
std::string report_to_csv(const ComparisonReport& report);
std::string metrics_to_csv(const PolicySpec& policy,
                           const PolicyMetrics& metrics);

}  // namespace clearsim
