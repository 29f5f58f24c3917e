#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "cli/commands.hpp"
#include "fockphase/experiment_config.hpp"
#include "support.hpp"

using namespace fockphase;
using json = nlohmann::json;
using test_support::scratch_dir;
using test_support::slurp;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::string& command, const cli::CommandOptions& options) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run_command(command, options, out, err);
  return {code, out.str(), err.str()};
}

json base_config(std::int64_t n, std::size_t events) {
  return {{"condensate", {{"n_a", n / 2}, {"n_b", n - n / 2}, {"spinful", true}}},
          {"events", {{"count", events}, {"kind", "spin"}, {"policy", {{"kind", "perpendicular"}}}}},
          {"seed", 11}};
}

cli::CommandOptions write_config(const json& doc, const std::filesystem::path& dir) {
  test_support::write_text(dir / "config.json", doc.dump(2));
  cli::CommandOptions options;
  options.config = dir / "config.json";
  options.out_dir = dir / "out";
  return options;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream l(line);
    while (std::getline(l, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("experiment-cli") {

TEST_CASE("config errors name the offending field") {
  std::vector<ConfigIssue> issues;
  (void)parse_config(R"({"condensate": {"n_a": "ten", "n_b": 5}, "colour": 1})", issues);
  bool typed = false;
  bool unknown = false;
  for (const auto& i : issues) {
    typed = typed || i.path == "condensate.n_a";
    unknown = unknown || i.path == "colour";
  }
  CHECK(typed);
  CHECK(unknown);

  issues.clear();
  (void)parse_config("{not json", issues);
  CHECK_FALSE(issues.empty());
}

TEST_CASE("missing or invalid configs exit with 2") {
  const auto dir = scratch_dir("cli-invalid");
  cli::CommandOptions options;
  options.config = dir / "nope.json";
  CHECK(run("simulate", options).code == cli::exit_validation);

  auto doc = base_config(100, 50);
  const auto r = run("simulate", write_config(doc, dir));
  CHECK(r.code == cli::exit_validation);
  CHECK(r.err.find("events.count: approximation domain violated") != std::string::npos);
  CHECK(run("frobnicate", options).code == cli::exit_validation);
}

TEST_CASE("simulate with no events keeps the prior") {
  const auto dir = scratch_dir("cli-empty");
  const auto options = write_config(base_config(1000, 0), dir);
  REQUIRE(run("simulate", options).code == cli::exit_ok);
  CHECK(slurp(dir / "out" / "record.csv") == "index,u,theta,eta\n");
  const auto summary = json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(summary["final"]["resultant"] == 0.0);
  CHECK(summary["final"]["mean"].is_null());
  CHECK(summary["final"]["circular_std"].is_null());
}

TEST_CASE("simulate is byte-identical across reruns and narrows the phase") {
  const auto dir = scratch_dir("cli-rerun");
  auto doc = base_config(2000, 100);
  doc["events"] = {{"count", 100}, {"kind", "position"}};
  auto options = write_config(doc, dir);
  REQUIRE(run("simulate", options).code == cli::exit_ok);
  const auto first_record = slurp(dir / "out" / "record.csv");
  const auto first_summary = slurp(dir / "out" / "summary.json");
  const auto first_steps = slurp(dir / "out" / "posterior_steps.csv");
  REQUIRE(run("simulate", options).code == cli::exit_ok);
  CHECK(slurp(dir / "out" / "record.csv") == first_record);
  CHECK(slurp(dir / "out" / "summary.json") == first_summary);
  CHECK(slurp(dir / "out" / "posterior_steps.csv") == first_steps);

  const auto summary = json::parse(first_summary);
  CHECK(summary["initial"]["circular_std"].is_null());
  CHECK(summary["final"]["circular_std"].get<double>() < 0.3);
  CHECK(summary["trajectory"].size() == 101);

  options.seed = 12;
  REQUIRE(run("simulate", options).code == cli::exit_ok);
  CHECK(slurp(dir / "out" / "record.csv") != first_record);
}

TEST_CASE("posterior recomputes simulate's final density from its record") {
  const auto dir = scratch_dir("cli-posterior");
  auto options = write_config(base_config(4000, 80), dir);
  REQUIRE(run("simulate", options).code == cli::exit_ok);
  const auto simulated = slurp(dir / "out" / "posterior.csv");
  std::filesystem::rename(dir / "out" / "record.csv", dir / "record.csv");
  options.record = dir / "record.csv";
  options.out_dir = dir / "replay";
  const auto r = run("posterior", options);
  REQUIRE_MESSAGE(r.code == cli::exit_ok, r.err);
  CHECK(slurp(dir / "replay" / "posterior.csv") == simulated);
  const auto summary = json::parse(slurp(dir / "replay" / "summary.json"));
  CHECK(std::isfinite(summary["log_sequence_probability"].get<double>()));
}

TEST_CASE("oracle-compare reproduces 580 and 600") {
  const auto dir = scratch_dir("cli-oracle");
  auto doc = base_config(20, 0);
  doc["allow_approximation_violation"] = true;
  doc["events"] = {{"count", 0}, {"kind", "position"}};
  doc["oracle"] = {{"record", {{{"kind", "position"}, {"u", 0.0}}, {{"kind", "position"}, {"u", 0.0}}}}};
  auto options = write_config(doc, dir);
  options.out_dir.reset();
  const auto r = run("oracle-compare", options);
  REQUIRE_MESSAGE(r.code == cli::exit_ok, r.err);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][5] == "oracle_power");
  CHECK(rows[0][6] == "oracle_falling");
  CHECK(std::stod(rows[1][5]) == doctest::Approx(600.0).epsilon(1e-12));
  CHECK(std::stod(rows[1][6]) == doctest::Approx(580.0).epsilon(1e-12));
  CHECK(std::stod(rows[1][7]) <= 1e-10);
}

TEST_CASE("oracle-compare deviations shrink with N") {
  const auto dir = scratch_dir("cli-oracle-sweep");
  auto doc = base_config(100000, 10);
  doc["oracle"] = {{"populations", {{50, 50}, {500, 500}, {5000, 5000}, {50000, 50000}}}};
  auto options = write_config(doc, dir);
  options.out_dir.reset();
  const auto r = run("oracle-compare", options);
  REQUIRE_MESSAGE(r.code == cli::exit_ok, r.err);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 5);
  double last = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][7]) <= 1e-10);
    const double dev = std::stod(rows[i][8]);
    CHECK(dev < last);
    last = dev;
  }
}

TEST_CASE("oracle-compare refuses records beyond its cap") {
  const auto dir = scratch_dir("cli-oracle-cap");
  auto doc = base_config(1000000, 10);
  json record = json::array();
  for (int i = 0; i < 2001; ++i) record.push_back({{"kind", "position"}, {"u", 0.001 * i}});
  doc["oracle"] = {{"record", record}};
  auto options = write_config(doc, dir);
  options.out_dir.reset();
  CHECK(run("oracle-compare", options).code == cli::exit_runtime);
}

TEST_CASE("wallis table") {
  cli::CommandOptions options;
  options.max_events = 3;
  const auto r = run("wallis", options);
  REQUIRE(r.code == cli::exit_ok);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 1 + 1 + 2 + 3 + 4);
  CHECK(rows[0][0] == "p_plus");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][4]) <= 1e-12);
  CHECK(std::stod(rows[5][2]) == doctest::Approx(0.125));  // one up, one down
  options.max_events = 65;
  CHECK(run("wallis", options).code == cli::exit_validation);
}

TEST_CASE("sweep cells") {
  const auto dir = scratch_dir("cli-sweep");
  auto doc = base_config(10000, 5);
  doc["events"] = {{"count", 5}, {"kind", "position"}};

  SUBCASE("one cell with one seed matches simulate") {
    auto options = write_config(doc, dir);
    REQUIRE(run("sweep", options).code == cli::exit_ok);
    REQUIRE(run("simulate", options).code == cli::exit_ok);
    const auto rows = read_csv(slurp(dir / "out" / "sweep.csv"));
    REQUIRE(rows.size() == 2);
    const auto summary = json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(std::stod(rows[1][4]) == summary["final"]["circular_std"].get<double>());
    CHECK(std::stod(rows[1][5]) == summary["final"]["resultant"].get<double>());
  }

  SUBCASE("more events narrow the phase and jobs do not change results") {
    doc["sweep"] = {{"events", {5, 50}}, {"seeds", 20}};
    auto options = write_config(doc, dir);
    REQUIRE(run("sweep", options).code == cli::exit_ok);
    const auto serial = slurp(dir / "out" / "sweep.csv");
    options.jobs = 4;
    REQUIRE(run("sweep", options).code == cli::exit_ok);
    CHECK(slurp(dir / "out" / "sweep.csv") == serial);
    const auto rows = read_csv(serial);
    REQUIRE(rows.size() == 3);
    CHECK(std::stod(rows[2][4]) < std::stod(rows[1][4]));
  }

  SUBCASE("larger coherent amplitudes start narrower") {
    doc["events"] = {{"count", 0}, {"kind", "position"}};
    doc["sweep"] = {{"modulus", {2.0, 5.0}}, {"seeds", 2}};
    auto options = write_config(doc, dir);
    const auto r = run("sweep", options);
    REQUIRE_MESSAGE(r.code == cli::exit_ok, r.err);
    const auto rows = read_csv(slurp(dir / "out" / "sweep.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][1] == "coherent");
    CHECK(std::stod(rows[2][4]) < std::stod(rows[1][4]));
  }
}

}  // TEST_SUITE
