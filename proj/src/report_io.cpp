#include "clearsim/report_io.hpp"

#include <cstdio>

#include <json.hpp>

namespace clearsim {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json policy_json(const PolicySpec& p) {
  ordered_json j;
  j["kind"] = to_string(p.kind);
  if (p.q) j["q"] = *p.q;
  if (p.T) j["T"] = *p.T;
  return j;
}

ordered_json metrics_json(const PolicyMetrics& m) {
  ordered_json j;
  j["expected_cycle"] = m.expected_cycle;
  j["expected_wait"] = m.expected_wait;
  j["expected_orders"] = m.expected_orders;
  j["aod"] = m.aod;
  if (m.avg_cost) j["avg_cost"] = *m.avg_cost;
  return j;
}

ordered_json estimate_json(const Estimate& e) {
  return ordered_json{{"mean", e.mean}, {"se", e.se}};
}

ordered_json report_json(const ComparisonReport& r) {
  ordered_json j;
  j["scenario"] = r.scenario;
  ordered_json inputs;
  if (r.lambda) inputs["lambda"] = *r.lambda;
  if (r.target_cycle) inputs["target_cycle"] = *r.target_cycle;
  if (r.q) inputs["q"] = *r.q;
  if (r.T) inputs["T"] = *r.T;
  j["inputs"] = std::move(inputs);
  j["rows"] = ordered_json::array();
  for (const ReportRow& row : r.rows) {
    j["rows"].push_back(ordered_json{{"policy", policy_json(row.policy)},
                                     {"metrics", metrics_json(row.metrics)}});
  }
  j["verdicts"] = ordered_json::array();
  for (const Verdict& v : r.verdicts) {
    j["verdicts"].push_back(ordered_json{{"claim", v.claim},
                                         {"holds", v.holds},
                                         {"margin", v.margin},
                                         {"equality", v.equality}});
  }
  j["advisories"] = r.advisories;
  j["all_hold"] = r.all_hold();
  return j;
}

// CSV numeric cells carry 17 significant digits so values round-trip.
std::string csv_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void csv_row(std::string& out, const PolicySpec& p, const PolicyMetrics& m) {
  out += to_string(p.kind);
  out += ',';
  if (p.q) out += std::to_string(*p.q);
  out += ',';
  if (p.T) out += csv_num(*p.T);
  out += ',';
  out += csv_num(m.expected_cycle);
  out += ',';
  out += csv_num(m.expected_wait);
  out += ',';
  out += csv_num(m.aod);
  out += ',';
  if (m.avg_cost) out += csv_num(*m.avg_cost);
  out += '\n';
}

constexpr const char* kCsvHeader = "kind,q,T,E_C,E_W,AOD,avg_cost\n";

}  // namespace

std::string policy_to_json(const PolicySpec& policy) {
  return policy_json(policy).dump();
}

std::string metrics_to_json(const PolicySpec& policy, double lambda,
                            const PolicyMetrics& metrics) {
  ordered_json j;
  j["policy"] = policy_json(policy);
  j["lambda"] = lambda;
  j["metrics"] = metrics_json(metrics);
  return j.dump(2);
}

std::string estimate_to_json(const PolicySpec& policy, double lambda,
                             const SimEstimate& estimate) {
  ordered_json j;
  j["policy"] = policy_json(policy);
  j["lambda"] = lambda;
  j["n_cycles"] = estimate.n_cycles;
  j["seed"] = estimate.seed;
  ordered_json e;
  e["mean_cycle"] = estimate_json(estimate.cycle);
  e["mean_orders"] = estimate_json(estimate.orders);
  e["mean_wait"] = estimate_json(estimate.wait);
  e["aod"] = estimate_json(estimate.aod);
  e["martingale_residual_w"] = estimate_json(estimate.residual_w);
  e["martingale_residual_n"] = estimate_json(estimate.residual_n);
  j["estimates"] = std::move(e);
  return j.dump(2);
}

std::string report_to_json(const ComparisonReport& report) {
  return report_json(report).dump(2);
}

std::string summary_to_json(const VerifySummary& summary, std::uint64_t seed) {
  ordered_json j;
  j["seed"] = seed;
  j["total_verdicts"] = summary.total_verdicts;
  j["failed_verdicts"] = summary.failed_verdicts;
  j["all_hold"] = summary.all_hold();
  j["reports"] = ordered_json::array();
  for (const ComparisonReport& r : summary.reports)
    j["reports"].push_back(report_json(r));
  return j.dump(2);
}

std::string report_to_csv(const ComparisonReport& report) {
  std::string out = kCsvHeader;
  for (const ReportRow& row : report.rows) csv_row(out, row.policy, row.metrics);
  return out;
}

std::string metrics_to_csv(const PolicySpec& policy,
                           const PolicyMetrics& metrics) {
  std::string out = kCsvHeader;
  csv_row(out, policy, metrics);
  return out;
}

}  // namespace clearsim
