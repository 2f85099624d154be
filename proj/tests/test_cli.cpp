#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "swipt/cli.hpp"
#include "swipt/csv.hpp"

using namespace swipt;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto path = fs::temp_directory_path() / ("swipt_cli_" + name + ".cfg");
  std::ofstream(path) << text;
  return path.string();
}

// The TS optimum at lambda_u = 1e-2: every constraint holds.
const std::string feasible_text =
    "preset = paper-default, ts, llp\n"
    "[population]\nlambda_u = 1e-2\nlambda_b = 2e-3\n"
    "[radio]\nP = 11 W\n"
    "[mode]\nsplit = 0.9996\n";

const std::string small_ga = "[ga]\npopulation = 12\nmax_generations = 4\n";

std::map<std::string, std::string> single_row(const std::string& csv_text) {
  const auto rows = csv::parse(csv_text);
  REQUIRE(rows.size() == 2);
  std::map<std::string, std::string> m;
  for (std::size_t i = 0; i < rows[0].size(); ++i) m[rows[0][i]] = rows[1][i];
  return m;
}

}  // namespace

TEST_CASE("evaluate reports a feasible point with exit 0") {
  const auto cfg = write_config("feasible", feasible_text);
  const auto r = run({"evaluate", "--config", cfg});
  CHECK(r.code == cli::exit_ok);
  const auto row = single_row(r.out);
  CHECK(row.at("schema") == csv::schema);
  CHECK(row.at("feasible") == "true");
  CHECK(row.count("tau_d [s/bit]"));
  CHECK(row.count("power_per_km2 [W/km^2]"));
  CHECK(std::stod(row.at("power_per_km2 [W/km^2]")) ==
        doctest::Approx(1e6 * std::stod(row.at("objective [W/m^2]"))));
}

TEST_CASE("evaluate exits 1 on an infeasible point") {
  const auto cfg = write_config("infeasible", "population.lambda_u = 1e-3\n");
  CHECK(run({"evaluate", "--config", cfg}).code == cli::exit_infeasible);
}

TEST_CASE("invalid scenarios and usage errors exit 2 with a diagnostic") {
  const auto cfg = write_config("alpha", "radio.alpha = 2\n");
  const auto r = run({"evaluate", "--config", cfg});
  CHECK(r.code == cli::exit_invalid);
  CHECK(r.err.find("radio.alpha") != std::string::npos);

  CHECK(run({"evaluate"}).code == cli::exit_invalid);
  CHECK(run({"evaluate", "--config", "/nonexistent/file.cfg"}).code == cli::exit_invalid);
  CHECK(run({"frobnicate"}).code == cli::exit_invalid);
  CHECK(run({"evaluate", "--config", cfg, "--set", "radio.bogus=1"}).code == cli::exit_invalid);
  CHECK(run({"evaluate", "--config", cfg, "--set", "noequals"}).code == cli::exit_invalid);
  CHECK(run({"evaluate", "--config", cfg, "--format", "xml"}).code == cli::exit_invalid);
  CHECK(run({"--help"}).code == cli::exit_ok);
}

TEST_CASE("csv and human formats carry identical numbers") {
  const auto cfg = write_config("formats", feasible_text);
  const auto csv_row = single_row(run({"evaluate", "--config", cfg, "--format", "csv"}).out);
  const auto human = run({"evaluate", "--config", cfg, "--format", "human"}).out;
  std::istringstream lines(human);
  std::map<std::string, std::string> h;
  for (std::string line; std::getline(lines, line);) {
    const auto gap = line.find("  ");
    REQUIRE(gap != std::string::npos);
    const auto value = line.substr(line.find_first_not_of(' ', gap));
    h[line.substr(0, gap)] = value;
  }
  for (const auto& [key, value] : csv_row) {
    if (key == "schema") continue;
    REQUIRE(h.count(key));
    CHECK(h.at(key) == value);
  }
}

TEST_CASE("presets and overrides apply after the file") {
  const auto cfg = write_config("override", feasible_text);
  const auto base = single_row(run({"evaluate", "--config", cfg}).out);
  const auto changed = single_row(run({"evaluate", "--config", cfg, "--preset", "hlp", "--set", "radio.P=10"}).out);
  CHECK(changed.at("P [W]") == "10");
  CHECK(changed.at("objective [W/m^2]") != base.at("objective [W/m^2]"));
}

TEST_CASE("sweep yields one row per value") {
  const auto cfg = write_config("sweep", "population.lambda_u = 1e-2\n[sweep]\nkey = population.lambda_u\n"
                                         "values = 1e-3, 3e-3, 1e-2\ntask = evaluate\n");
  const auto r = run({"sweep", "--config", cfg, "--jobs", "2"});
  CHECK(r.code == cli::exit_ok);
  const auto rows = csv::parse(r.out);
  REQUIRE(rows.size() == 4);
  const auto& header = rows[0];
  const auto col = std::find(header.begin(), header.end(), "population.lambda_u [m^-2]") - header.begin();
  CHECK(rows[1][col] == "0.001");
  CHECK(rows[2][col] == "0.003");
  CHECK(rows[3][col] == "0.01");
}

TEST_CASE("a fixed seed reproduces the output bytes") {
  const auto cfg = write_config("seeded", "population.lambda_u = 1e-2\n" + small_ga +
                                              "[sim]\nreplications = 3\n");
  for (const char* cmd : {"optimize", "simulate"}) {
    const auto a = run({cmd, "--config", cfg, "--seed", "7", "--jobs", "1"});
    const auto b = run({cmd, "--config", cfg, "--seed", "7", "--jobs", "2"});
    CHECK(a.out == b.out);
    CHECK(a.err.find("seed:") == std::string::npos);
  }
}

TEST_CASE("omitting the seed prints the one chosen") {
  const auto cfg = write_config("unseeded", "population.lambda_u = 1e-2\n" + small_ga);
  const auto r = run({"optimize", "--config", cfg});
  CHECK(r.err.find("seed: ") != std::string::npos);
  // Evaluation uses no randomness and prints no seed.
  CHECK(run({"evaluate", "--config", cfg}).err.find("seed:") == std::string::npos);
}

TEST_CASE("output files") {
  const auto cfg = write_config("files", "population.lambda_u = 1e-2\n" + small_ga);
  const auto out = (fs::temp_directory_path() / "swipt_cli_out.csv").string();
  const auto trace = (fs::temp_directory_path() / "swipt_cli_trace.csv").string();
  const auto r = run({"optimize", "--config", cfg, "--seed", "1", "--out", out, "--trace-out", trace});
  CHECK(r.out.empty());
  std::ifstream o(out), t(trace);
  std::stringstream os, ts;
  os << o.rdbuf();
  ts << t.rdbuf();
  CHECK(csv::parse(os.str()).size() == 2);
  CHECK(csv::parse(ts.str()).size() >= 2);
}

TEST_CASE("grid prints the grid and refined stages") {
  const auto cfg = write_config("grid", "population.lambda_u = 1e-2\n[grid]\npower = 3\nlambda_b = 3\nsplit = 3\n"
                                        "refine_points = 3\n");
  const auto rows = csv::parse(run({"grid", "--config", cfg}).out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][1] == "grid");
  CHECK(rows[2][1] == "refined");
}
