// Command-line front end: closed-form evaluation, Monte Carlo simulation,
// cycle-length calibration, policy comparisons, and the full verification
// battery, with JSON/CSV output.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clearsim/calibrate.hpp"
#include "clearsim/compare.hpp"
#include "clearsim/policy.hpp"
#include "clearsim/report_io.hpp"
#include "clearsim/sim.hpp"
#include "clearsim/verify.hpp"

namespace {

using clearsim::ArrivalRate;
using clearsim::CostParams;
using clearsim::CycleTarget;
using clearsim::PolicyKind;
using clearsim::PolicySpec;

constexpr int kExitOk = 0;
constexpr int kExitVerdictFailure = 1;
constexpr int kExitArgumentError = 2;

struct PolicyFlags {
  std::string kind_name;
  std::optional<std::int64_t> q;
  std::optional<double> T;
};

struct CostFlags {
  std::optional<double> fixed_dispatch;
  std::optional<double> unit_transport;
  std::optional<double> waiting_rate;

  std::optional<CostParams> to_params() const {
    if (!fixed_dispatch && !unit_transport && !waiting_rate) return std::nullopt;
    CostParams c;
    c.fixed_dispatch = fixed_dispatch.value_or(0.0);
    c.unit_transport = unit_transport.value_or(0.0);
    c.waiting_rate = waiting_rate.value_or(0.0);
    c.validate();
    return c;
  }
};

void add_policy_flags(CLI::App* cmd, PolicyFlags& flags) {
  cmd->add_option("--policy", flags.kind_name,
                  "policy kind: qp|tp1|tp2|hp1|hp2|rtp1|rhp1")
      ->required();
  cmd->add_option("--q", flags.q, "quantity trigger (qp, hp1, hp2, rhp1)");
  cmd->add_option("--T", flags.T, "time trigger (all kinds except qp)");
}

void add_cost_flags(CLI::App* cmd, CostFlags& flags) {
  cmd->add_option("--fixed-dispatch", flags.fixed_dispatch,
                  "fixed cost per shipment release");
  cmd->add_option("--unit-transport", flags.unit_transport,
                  "transport cost per order");
  cmd->add_option("--waiting-rate", flags.waiting_rate,
                  "waiting cost per order per unit time");
}

PolicyKind parse_kind(const std::string& name) {
  const auto kind = clearsim::policy_kind_from_string(name);
  if (!kind)
    throw std::invalid_argument("unknown policy kind '" + name +
                                "' (expected qp|tp1|tp2|hp1|hp2|rtp1|rhp1)");
  return *kind;
}

PolicySpec parse_policy(const PolicyFlags& flags) {
  PolicySpec spec{parse_kind(flags.kind_name), flags.q, flags.T};
  spec.validate();
  return spec;
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(output_path);
  if (!out)
    throw std::runtime_error("cannot open output file: " + output_path);
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

void fail_with_json(const std::string& type, const std::string& message) {
  nlohmann::ordered_json err;
  err["error"] = {{"type", type}, {"message", message}};
  std::cerr << "error: " << message << "\n" << err.dump() << "\n";
}

clearsim::VerifyConfig load_verify_config(const std::string& path) {
  clearsim::VerifyConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.contains("lambdas")) cfg.lambdas = j["lambdas"].get<std::vector<double>>();
  if (j.contains("cycle_factors"))
    cfg.cycle_factors = j["cycle_factors"].get<std::vector<double>>();
  if (j.contains("q_values"))
    cfg.q_list = j["q_values"].get<std::vector<std::int64_t>>();
  if (j.contains("T_values"))
    cfg.T_values = j["T_values"].get<std::vector<double>>();
  if (j.contains("n_cycles")) cfg.n_cycles = j["n_cycles"].get<std::int64_t>();
  if (j.contains("sim_points")) {
    cfg.sim_points.clear();
    for (const auto& p : j["sim_points"]) {
      cfg.sim_points.push_back({p.at("lambda").get<double>(),
                                p.at("q").get<std::int64_t>(),
                                p.at("T").get<double>()});
    }
  }
  return cfg;
}

int report_exit(const clearsim::ComparisonReport& report) {
  return report.all_hold() ? kExitOk : kExitVerdictFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"service-performance analytics for stochastic clearing policies"};
  app.require_subcommand(1);

  // ---- eval ----
  PolicyFlags eval_policy;
  CostFlags eval_costs;
  double eval_lambda = 0.0;
  std::string eval_format = "json", eval_output;
  CLI::App* eval = app.add_subcommand(
      "eval", "closed-form E[C], E[W], E[N], AOD (and average cost)");
  add_policy_flags(eval, eval_policy);
  eval->add_option("--lambda", eval_lambda, "arrival rate")->required();
  add_cost_flags(eval, eval_costs);
  eval->add_option("--format", eval_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  eval->add_option("--output", eval_output, "write to file instead of stdout");

  // ---- simulate ----
  PolicyFlags sim_policy;
  double sim_lambda = 0.0;
  std::int64_t sim_cycles = 100000;
  std::uint64_t sim_seed = 0;
  std::string sim_output;
  CLI::App* sim = app.add_subcommand(
      "simulate", "regenerative Monte Carlo estimates with standard errors");
  add_policy_flags(sim, sim_policy);
  sim->add_option("--lambda", sim_lambda, "arrival rate")->required();
  sim->add_option("--n-cycles", sim_cycles, "number of regeneration cycles");
  sim->add_option("--seed", sim_seed, "RNG seed (required; no wall-clock seeding)")
      ->required();
  sim->add_option("--output", sim_output, "write to file instead of stdout");

  // ---- calibrate ----
  std::string cal_kind;
  std::optional<std::int64_t> cal_q;
  double cal_lambda = 0.0, cal_target = 0.0;
  std::string cal_output;
  CLI::App* cal = app.add_subcommand(
      "calibrate", "solve for the parameter matching a target E[C]");
  cal->add_option("--policy", cal_kind, "policy kind")->required();
  cal->add_option("--q", cal_q, "quantity trigger (hp1, hp2, rhp1)");
  cal->add_option("--lambda", cal_lambda, "arrival rate")->required();
  cal->add_option("--target-cycle", cal_target, "desired E[C]")->required();
  cal->add_option("--output", cal_output, "write to file instead of stdout");

  // ---- compare-ec ----
  double ec_lambda = 0.0, ec_target = 0.0;
  std::vector<std::int64_t> ec_qlist{2, 3, 4, 5, 6, 7, 8, 9, 10};
  CostFlags ec_costs;
  std::string ec_config, ec_format = "json", ec_output;
  CLI::App* ec = app.add_subcommand(
      "compare-ec", "compare all policies calibrated to one E[C]");
  ec->add_option("--lambda", ec_lambda, "arrival rate")->required();
  ec->add_option("--target-cycle", ec_target, "shared E[C]")->required();
  CLI::Option* ec_qlist_opt =
      ec->add_option("--q-list", ec_qlist, "quantity levels for the hybrids")
          ->delimiter(',');
  ec->add_option("--config", ec_config,
                 "JSON file supplying q_values (flags override)");
  add_cost_flags(ec, ec_costs);
  ec->add_option("--format", ec_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  ec->add_option("--output", ec_output, "write to file instead of stdout");

  // ---- compare-qt ----
  double qt_lambda = 0.0, qt_T = 0.0;
  std::int64_t qt_q = 0;
  CostFlags qt_costs;
  std::string qt_format = "json", qt_output;
  CLI::App* qt = app.add_subcommand(
      "compare-qt", "compare all seven policies at shared (q, T)");
  qt->add_option("--lambda", qt_lambda, "arrival rate")->required();
  qt->add_option("--q", qt_q, "shared quantity trigger (>= 2)")->required();
  qt->add_option("--T", qt_T, "shared time trigger")->required();
  add_cost_flags(qt, qt_costs);
  qt->add_option("--format", qt_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  qt->add_option("--output", qt_output, "write to file instead of stdout");

  // ---- verify ----
  std::uint64_t verify_seed = 0;
  std::string verify_config, verify_output;
  std::optional<std::int64_t> verify_cycles;
  CLI::App* verify = app.add_subcommand(
      "verify", "run the full certification battery; exit 0 iff all hold");
  verify->add_option("--seed", verify_seed, "RNG seed (required)")->required();
  verify->add_option("--config", verify_config,
                     "JSON file overriding the default grids");
  verify->add_option("--n-cycles", verify_cycles,
                     "cycles per simulation cross-check (overrides config)");
  verify->add_option("--output", verify_output, "write the full JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::stringstream message;
    app.exit(e, message, message);
    fail_with_json("argument_error", message.str());
    return kExitArgumentError;
  }

  try {
    if (eval->parsed()) {
      const PolicySpec spec = parse_policy(eval_policy);
      const ArrivalRate rate(eval_lambda);
      const clearsim::PolicyMetrics metrics =
          clearsim::evaluate(spec, rate, eval_costs.to_params());
      emit(eval_format == "csv"
               ? clearsim::metrics_to_csv(spec, metrics)
               : clearsim::metrics_to_json(spec, eval_lambda, metrics),
           eval_output);
      return kExitOk;
    }

    if (sim->parsed()) {
      const PolicySpec spec = parse_policy(sim_policy);
      const ArrivalRate rate(sim_lambda);
      const clearsim::SimEstimate est =
          clearsim::simulate(spec, rate, sim_cycles, sim_seed);
      emit(clearsim::estimate_to_json(spec, sim_lambda, est), sim_output);
      return kExitOk;
    }

    if (cal->parsed()) {
      const ArrivalRate rate(cal_lambda);
      const PolicySpec spec = clearsim::calibrate(
          parse_kind(cal_kind), cal_q, CycleTarget(cal_target), rate);
      nlohmann::ordered_json j;
      j["policy"] = nlohmann::ordered_json::parse(clearsim::policy_to_json(spec));
      j["lambda"] = cal_lambda;
      j["target_cycle"] = cal_target;
      j["achieved_cycle"] = clearsim::expected_cycle(spec, rate);
      emit(j.dump(2), cal_output);
      return kExitOk;
    }

    if (ec->parsed()) {
      if (!ec_config.empty() && ec_qlist_opt->count() == 0) {
        std::ifstream in(ec_config);
        if (!in) throw std::runtime_error("cannot open config file: " + ec_config);
        const nlohmann::json j = nlohmann::json::parse(in);
        if (j.contains("q_values"))
          ec_qlist = j["q_values"].get<std::vector<std::int64_t>>();
      }
      const clearsim::ComparisonReport report =
          clearsim::compare_fixed_cycle(ArrivalRate(ec_lambda),
                                        CycleTarget(ec_target), ec_qlist,
                                        ec_costs.to_params());
      emit(ec_format == "csv" ? clearsim::report_to_csv(report)
                              : clearsim::report_to_json(report),
           ec_output);
      return report_exit(report);
    }

    if (qt->parsed()) {
      const clearsim::ComparisonReport report = clearsim::compare_fixed_params(
          ArrivalRate(qt_lambda), qt_q, qt_T, qt_costs.to_params());
      emit(qt_format == "csv" ? clearsim::report_to_csv(report)
                              : clearsim::report_to_json(report),
           qt_output);
      return report_exit(report);
    }

    if (verify->parsed()) {
      clearsim::VerifyConfig cfg = load_verify_config(verify_config);
      cfg.seed = verify_seed;
      if (verify_cycles) cfg.n_cycles = *verify_cycles;
      const clearsim::VerifySummary summary = clearsim::run_verification(cfg);
      for (const clearsim::ComparisonReport& r : summary.reports) {
        std::int64_t held = 0;
        for (const clearsim::Verdict& v : r.verdicts) held += v.holds ? 1 : 0;
        std::cout << r.scenario;
        if (r.lambda) std::cout << " lambda=" << *r.lambda;
        if (r.target_cycle) std::cout << " target=" << *r.target_cycle;
        if (r.q) std::cout << " q=" << *r.q;
        if (r.T) std::cout << " T=" << *r.T;
        std::cout << ": " << held << "/" << r.verdicts.size()
                  << " verdicts hold\n";
        for (const clearsim::Verdict& v : r.verdicts) {
          if (!v.holds)
            std::cout << "  FAILED: " << v.claim << " (margin " << v.margin
                      << ")\n";
        }
      }
      std::cout << (summary.all_hold() ? "VERIFY PASS" : "VERIFY FAIL") << ": "
                << (summary.total_verdicts - summary.failed_verdicts) << "/"
                << summary.total_verdicts << " verdicts hold\n";
      if (!verify_output.empty())
        emit(clearsim::summary_to_json(summary, verify_seed), verify_output);
      return summary.all_hold() ? kExitOk : kExitVerdictFailure;
    }
  } catch (const std::invalid_argument& e) {
    fail_with_json("invalid_argument", e.what());
    return kExitArgumentError;
  } catch (const std::domain_error& e) {
    fail_with_json("domain_error", e.what());
    return kExitArgumentError;
  } catch (const std::exception& e) {
    fail_with_json("error", e.what());
    return kExitArgumentError;
  }
  return kExitArgumentError;
}
