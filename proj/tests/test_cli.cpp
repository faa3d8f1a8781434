// End-to-end checks of the command-line tool via subprocesses.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <doctest.h>
#include <fstream>

#include <json.hpp>

#include "clearsim/policy.hpp"
#include "clearsim/report_io.hpp"

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  const std::string err_path =
      std::string(CLEARSIM_CLI_PATH) + ".stderr.tmp";
  const std::string cmd =
      std::string(CLEARSIM_CLI_PATH) + " " + args + " 2>" + err_path;
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (FILE* ef = fopen(err_path.c_str(), "r")) {
    while ((got = fread(buf.data(), 1, buf.size(), ef)) > 0)
      r.err.append(buf.data(), got);
    fclose(ef);
  }
  std::remove(err_path.c_str());
  return r;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("eval matches the library serialization bit for bit") {
  const RunResult r = run_cli("eval --policy qp --q 5 --lambda 1");
  CHECK(r.exit_code == 0);
  const auto spec = clearsim::PolicySpec::qp(5);
  const auto metrics = clearsim::evaluate(spec, clearsim::ArrivalRate(1.0));
  CHECK(r.out == clearsim::metrics_to_json(spec, 1.0, metrics) + "\n");
  CHECK(json::parse(r.out)["metrics"]["aod"].get<double>() == 2.0);
}

TEST_CASE("eval csv") {
  const RunResult r =
      run_cli("eval --policy hp1 --q 2 --T 1 --lambda 1 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("kind,q,T,E_C,E_W,AOD,avg_cost\n", 0) == 0);
  CHECK(r.out.find("hp1,2,1,") != std::string::npos);
}

TEST_CASE("argument errors exit 2 with a JSON error object") {
  const RunResult missing = run_cli("eval --policy qp --lambda 1");  // no --q
  CHECK(missing.exit_code == 2);
  CHECK(json::parse(missing.err.substr(missing.err.find('{')))
            .contains("error"));

  const RunResult unknown = run_cli("eval --policy zp --q 2 --lambda 1");
  CHECK(unknown.exit_code == 2);

  const RunResult bad_lambda = run_cli("eval --policy qp --q 2 --lambda -1");
  CHECK(bad_lambda.exit_code == 2);

  const RunResult infeasible =
      run_cli("calibrate --policy hp1 --q 4 --lambda 1 --target-cycle 9");
  CHECK(infeasible.exit_code == 2);
}

TEST_CASE("simulate requires a seed and is reproducible") {
  const RunResult no_seed =
      run_cli("simulate --policy tp1 --T 1 --lambda 1 --n-cycles 100");
  CHECK(no_seed.exit_code == 2);

  const std::string args =
      "simulate --policy hp1 --q 5 --T 1.5 --lambda 2 --n-cycles 5000 --seed 42";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j["n_cycles"].get<std::int64_t>() == 5000);
  CHECK(j["seed"].get<std::uint64_t>() == 42);
  CHECK(j["estimates"]["aod"]["se"].get<double>() > 0.0);
}

TEST_CASE("calibrate round trip through the CLI") {
  const RunResult r =
      run_cli("calibrate --policy hp1 --q 4 --lambda 1 --target-cycle 3");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["policy"]["kind"] == "hp1");
  CHECK(j["policy"]["q"].get<std::int64_t>() == 4);
  const double achieved = j["achieved_cycle"].get<double>();
  CHECK(std::abs(achieved - 3.0) <= 3e-10);
}

TEST_CASE("compare subcommands exit 0 when every verdict holds") {
  const RunResult qt = run_cli("compare-qt --lambda 1 --q 5 --T 2");
  CHECK(qt.exit_code == 0);
  const json j = json::parse(qt.out);
  CHECK(j["all_hold"].get<bool>());
  CHECK(j["rows"].size() == 7);

  const RunResult ec =
      run_cli("compare-ec --lambda 1 --target-cycle 3 --q-list 4,5,6");
  CHECK(ec.exit_code == 0);
  CHECK(json::parse(ec.out)["scenario"] == "fixed-cycle");

  const RunResult csv =
      run_cli("compare-ec --lambda 1 --target-cycle 3 --q-list 4,5 --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(csv.out.rfind("kind,q,T,E_C,E_W,AOD,avg_cost\n", 0) == 0);
}

TEST_CASE("output files and config grids") {
  const std::string out_path = std::string(CLEARSIM_CLI_PATH) + ".report.tmp";
  const RunResult r = run_cli("compare-qt --lambda 1 --q 5 --T 2 --output " +
                              out_path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out_path);
  REQUIRE(in.good());
  const json j = json::parse(in);
  CHECK(j["all_hold"].get<bool>());
  std::remove(out_path.c_str());

  const std::string cfg_path = std::string(CLEARSIM_CLI_PATH) + ".cfg.tmp";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"q_values": [4, 5]})";
  }
  const RunResult ec = run_cli("compare-ec --lambda 1 --target-cycle 3 --config " +
                               cfg_path);
  CHECK(ec.exit_code == 0);
  // qp + tp1 + tp2 + rtp1 + 2x(hp1, hp2, rhp1) from the config's q_values.
  CHECK(json::parse(ec.out)["rows"].size() == 10);
  // Explicit flags override the file.
  const RunResult ec2 = run_cli(
      "compare-ec --lambda 1 --target-cycle 3 --config " + cfg_path +
      " --q-list 4");
  CHECK(json::parse(ec2.out)["rows"].size() == 7);
  std::remove(cfg_path.c_str());
}

TEST_CASE("verify runs the battery deterministically") {
  // Reduced cycle count keeps this fast; grid checks are unaffected.
  const std::string json_path = std::string(CLEARSIM_CLI_PATH) + ".verify.tmp";
  const std::string args =
      "verify --seed 42 --n-cycles 50000 --output " + json_path;
  const RunResult a = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out.find("VERIFY PASS") != std::string::npos);
  {
    std::ifstream in(json_path);
    REQUIRE(in.good());
    const json j = json::parse(in);
    CHECK(j["all_hold"].get<bool>());
    CHECK(j["seed"].get<std::uint64_t>() == 42);
    CHECK(j["failed_verdicts"].get<std::int64_t>() == 0);
    CHECK(j["reports"].size() > 100);
  }
  std::remove(json_path.c_str());
  const RunResult b = run_cli(args);
  CHECK(a.out == b.out);
  std::remove(json_path.c_str());
}

TEST_SUITE_END();
