// Copyright 2026 The agpsr developers

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "agpsr/cli/commands.hpp"
#include "agpsr/io.hpp"
#include "agpsr/shift_rules.hpp"

using namespace agpsr;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "agpsr_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const json& config) {
  const fs::path path = dir / "config.json";
  std::ofstream out(path);
  out << config.dump(2);
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
      ++i;
    } else {
      field += c;
    }
  }
  return rows;
}

int run_command(const std::string& command, const fs::path& config, const fs::path& out_dir,
                int threads = 1) {
  cli::Options options;
  options.command = command;
  options.config_path = config.string();
  options.out_dir = out_dir.string();
  options.threads = threads;
  return cli::run(options);
}

}  // namespace

TEST_CASE("format_double emits round-trippable decimals") {
  for (const double v : {0.1, -3.25, 1.0 / 3.0, 1e-17, 12345.678901234567}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("csv writer quotes per RFC 4180") {
  const fs::path dir = fresh_dir("csv");
  const fs::path path = dir / "t.csv";
  {
    io::CsvWriter csv(path.string());
    csv.write_row({"a,b", "plain", "say \"hi\""});
  }
  CHECK(slurp(path) == "\"a,b\",plain,\"say \"\"hi\"\"\"\r\n");
}

TEST_CASE("complex matrices survive the json round trip") {
  CMatrix m(2, 2);
  m << Complex(0, 0), Complex(1, -2), Complex(1, 2), Complex(3, 0);
  const CMatrix back = io::matrix_from_json(io::matrix_to_json(m));
  CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("derivative results serialize with per-shift evaluations") {
  const auto f = make_expectation_fn([](double x) { return std::cos(x); });
  ShiftRuleSpec spec;
  spec.kind = RuleKind::Gpsr;
  spec.gaps = RVector::Constant(1, 2.0);
  spec.shifts = RVector::Constant(1, 0.7853981633974483);
  const json j = io::to_json(estimate_derivative(f, 1.5707963267948966, spec));
  CHECK(j.at("estimate").get<double>() == doctest::Approx(-1.0));
  CHECK(j.at("expectation_calls") == 2);
  CHECK(j.at("f_plus").size() == 1);
  CHECK(j.at("f_minus").size() == 1);
  CHECK(j.at("r_values").size() == 1);
}

TEST_CASE("scan command: single-qubit exact column is -sin(x)") {
  const fs::path dir = fresh_dir("scan1q");
  const json config = {
      {"generator", {{"type", "matrix"}, {"data", {{0.0, 1.0}, {1.0, 0.0}}}}},
      {"initial_state", "zero"},
      {"methods", {{{"type", "gpsr"}}, {{"type", "psr"}}}},
      {"scan", {{"start", 0.0}, {"stop", 3.0}, {"points", 13}}},
      {"seed", 7},
  };
  const fs::path cfg = write_config(dir, config);
  REQUIRE(run_command("scan", cfg, dir / "out") == 0);

  const auto rows = parse_csv(slurp(dir / "out" / "scan.csv"));
  REQUIRE(rows.size() == 14);
  CHECK(rows[0] == std::vector<std::string>{"x", "exact", "gpsr", "psr"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double x = std::stod(rows[i][0]);
    const double exact = std::stod(rows[i][1]);
    CHECK(std::abs(exact - (-std::sin(x))) <= 1e-10);
    CHECK(std::abs(std::stod(rows[i][2]) - exact) <= 1e-9);  // single gap: GPSR is exact
    CHECK(std::abs(std::stod(rows[i][3]) - exact) <= 1e-9);  // and so is PSR
  }

  SUBCASE("manifest lists outputs and echoes the config") {
    const json manifest = json::parse(slurp(dir / "out" / "manifest.json"));
    CHECK(manifest.at("command") == "scan");
    CHECK(manifest.at("seed") == 7);
    CHECK(manifest.at("outputs").size() == 1);
    CHECK(manifest.at("config").at("scan").at("points") == 13);
    CHECK(!manifest.contains("error"));
  }

  SUBCASE("same config and seed reproduce byte-identical csv") {
    REQUIRE(run_command("scan", cfg, dir / "out2", 4) == 0);
    CHECK(slurp(dir / "out" / "scan.csv") == slurp(dir / "out2" / "scan.csv"));
  }
}

TEST_CASE("scan command with finite shots is seeded per point") {
  const fs::path dir = fresh_dir("scan_shots");
  const json config = {
      {"generator", {{"type", "matrix"}, {"data", {{0.0, 1.0}, {1.0, 0.0}}}}},
      {"methods", {{{"type", "gpsr"}}}},
      {"scan", {{"start", 0.3}, {"stop", 1.2}, {"points", 4}}},
      {"shots", 2000},
      {"seed", 11},
  };
  const fs::path cfg = write_config(dir, config);
  REQUIRE(run_command("scan", cfg, dir / "out") == 0);
  const auto rows = parse_csv(slurp(dir / "out" / "scan.csv"));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double exact = std::stod(rows[i][1]);
    const double noisy = std::stod(rows[i][2]);
    CHECK(noisy != exact);
    CHECK(std::abs(noisy - exact) < 0.2);
  }
}

TEST_CASE("failing runs still write a manifest with the error") {
  const fs::path dir = fresh_dir("fail");
  const json config = {{"generator", {{"type", "bogus"}}}};
  const fs::path cfg = write_config(dir, config);
  CHECK(run_command("scan", cfg, dir / "out") != 0);
  const json manifest = json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(manifest.contains("error"));
  CHECK(manifest.at("outputs").empty());
}

TEST_CASE("error-curve command crosses zero at the pseudo-gap") {
  const fs::path dir = fresh_dir("curve");
  const json config = {
      {"gammas", {2.0}},
      {"delta_range", {{"start", 0.0}, {"stop", 4.0}, {"points", 9}}},
  };
  const fs::path cfg = write_config(dir, config);
  REQUIRE(run_command("error-curve", cfg, dir / "out") == 0);

  const auto rows = parse_csv(slurp(dir / "out" / "error_curve.csv"));
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == std::vector<std::string>{"delta", "qk"});
  CHECK(std::abs(std::stod(rows[1][1])) <= 1e-15);  // delta = 0
  // delta = 2.0 lands on row 5 of the 9-point grid over [0, 4].
  CHECK(std::stod(rows[5][0]) == doctest::Approx(2.0));
  CHECK(std::abs(std::stod(rows[5][1])) <= 1e-12);
}

TEST_CASE("gaps command dumps the controlled-RX gap set") {
  const fs::path dir = fresh_dir("gaps");
  const json config = {
      {"generator",
       {{"type", "matrix"},
        {"data", {{0.0, 0.0, 0.0, 0.0},
                  {0.0, 0.0, 0.0, 0.0},
                  {0.0, 0.0, 0.0, 1.0},
                  {0.0, 0.0, 1.0, 0.0}}}}},
      {"bins", 2},
  };
  const fs::path cfg = write_config(dir, config);
  REQUIRE(run_command("gaps", cfg, dir / "out") == 0);

  const auto rows = parse_csv(slurp(dir / "out" / "gaps.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(std::stod(rows[1][0]) == doctest::Approx(1.0));
  CHECK(rows[1][1] == "4");
  CHECK(std::stod(rows[2][0]) == doctest::Approx(2.0));
  CHECK(rows[2][1] == "1");
  CHECK(fs::exists(dir / "out" / "gap_histogram.csv"));
}

TEST_CASE("gaps command exports the canonical neutral-atom record") {
  const fs::path dir = fresh_dir("gaps_canonical");
  const json config = {
      {"generator",
       {{"type", "neutral_atom"}, {"n_qubits", 3}, {"omega", 2.0},
        {"lattice", {{"rows", 1}, {"cols", 3}}}, {"coupling", "weak"}}},
  };
  REQUIRE(run_command("gaps", write_config(dir, config), dir / "out") == 0);

  const json record = json::parse(slurp(dir / "out" / "generator_config.json"));
  CHECK(record.at("n_qubits") == 3);
  CHECK(record.at("omega") == 2.0);
  // Weak regime: nearest-neighbor J = 0.5 * omega; next neighbor r = 2.
  CHECK(record.at("couplings").at(0).at(1).get<double>() == doctest::Approx(1.0));
  CHECK(record.at("couplings").at(0).at(2).get<double>() == doctest::Approx(1.0 / 64.0));
}

TEST_CASE("variance-opt command finds the single-gap optimum") {
  const fs::path dir = fresh_dir("varopt");
  const json config = {
      {"generator", {{"type", "matrix"}, {"data", {{0.0, 1.0}, {1.0, 0.0}}}}},
      {"k", 1},
      {"step_a", 2.0},
  };
  const fs::path cfg = write_config(dir, config);
  REQUIRE(run_command("variance-opt", cfg, dir / "out") == 0);

  const json out = json::parse(slurp(dir / "out" / "variance_opt.json"));
  const double delta_opt = out.at("report").at("optimal_shifts").at(0).get<double>();
  CHECK(std::abs(delta_opt - 1.5707963267948966) <= 1e-3);
  CHECK(out.at("report").at("optimal_g").get<double>() <=
        out.at("report").at("initial_g").get<double>());
  CHECK(out.at("spec").at("kind") == "gpsr");
}

TEST_CASE("vqe command: zero iterations, unit run") {
  const fs::path dir = fresh_dir("vqe0");
  const json config = {
      {"n_qubits", 2},   {"ansatz", "digital"},
      {"diff", {{"method", "agpsr"}, {"k", 1}}},
      {"iterations", 0}, {"runs", 1},
      {"seed", 3},
  };
  const fs::path cfg = write_config(dir, config);
  REQUIRE(run_command("vqe", cfg, dir / "out") == 0);

  const auto rows = parse_csv(slurp(dir / "out" / "run_0.csv"));
  REQUIRE(rows.size() == 2);  // header + initial point
  CHECK(rows[1][2] == "0");

  const json summary = json::parse(slurp(dir / "out" / "vqe_summary.json"));
  CHECK(summary.at("total_calls_per_run") == 0);
  // Digital N=2: GPSR costs 3*(2*2+1*4) = 16, aGPSR(K=1) 3*(2*2+1*2) = 12.
  CHECK(summary.at("savings_factor_vs_gpsr").get<double>() == doctest::Approx(16.0 / 12.0));
}

TEST_CASE("strong-regime random-state scan improves through K = 20") {
  // Fixed-extent shift grids (extent 2 pi / a) so the methods differ only
  // in how finely they cover the gap distribution.
  const double a = 4.0;
  auto grid = [&](int k) {
    std::vector<double> shifts(k);
    for (int i = 0; i < k; ++i) shifts[i] = 2.0 * 3.14159265358979324 / a * (i + 1.0) / (k + 1.0);
    return shifts;
  };
  json methods = json::array();
  for (const int k : {4, 8, 20})
    methods.push_back({{"type", "agpsr"}, {"k", k}, {"step_a", a}, {"shifts", grid(k)}});

  const fs::path dir = fresh_dir("scan_k20");
  const json config = {
      {"generator",
       {{"type", "neutral_atom"}, {"n_qubits", 6}, {"omega", 1.0},
        {"lattice", {{"rows", 2}, {"cols", 3}}}, {"coupling", "strong"}}},
      {"initial_state", {{"type", "random"}, {"seed", 424242}}},
      {"methods", methods},
      {"scan", {{"start", 0.1}, {"stop", 2.5}, {"points", 40}}},
  };
  REQUIRE(run_command("scan", write_config(dir, config), dir / "out", 4) == 0);

  const auto rows = parse_csv(slurp(dir / "out" / "scan.csv"));
  REQUIRE(rows.size() == 41);
  double err[3] = {0, 0, 0};
  int used = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double exact = std::stod(rows[i][1]);
    if (std::abs(exact) < 1e-6) continue;
    ++used;
    for (int m = 0; m < 3; ++m)
      err[m] += std::abs(std::stod(rows[i][2 + m]) - exact) / std::abs(exact);
  }
  for (int m = 0; m < 3; ++m) err[m] /= used;
  CHECK(err[2] < err[1]);  // K=20 beats K=8
  CHECK(err[1] < err[0]);  // which beats K=4
}

TEST_CASE("vqe command reports the N=4 analog savings factor") {
  const fs::path dir = fresh_dir("vqe_n4");
  const json config = {
      {"n_qubits", 4}, {"ansatz", "analog"},
      {"diff", {{"method", "agpsr"}, {"k", 4}, {"step_a", 4.0}}},
      {"iterations", 0}, {"runs", 1}, {"seed", 1},
  };
  REQUIRE(run_command("vqe", write_config(dir, config), dir / "out") == 0);
  const json summary = json::parse(slurp(dir / "out" / "vqe_summary.json"));
  CHECK(summary.at("savings_factor_vs_gpsr").get<double>() == doctest::Approx(30.0));
  CHECK(summary.at("calls_per_gradient") == 8);
}

TEST_CASE("digital vqe reaches the ground state under both rules") {
  const fs::path dir = fresh_dir("vqe_digital3");
  json config = {
      {"n_qubits", 3},      {"ansatz", "digital"},
      {"diff", {{"method", "gpsr"}}},
      {"learning_rate", 0.05}, {"iterations", 200},
      {"runs", 10},         {"seed", 33},
  };
  REQUIRE(run_command("vqe", write_config(dir, config), dir / "gpsr") == 0);
  config["diff"] = {{"method", "agpsr"}, {"k", 1}};
  REQUIRE(run_command("vqe", write_config(dir, config), dir / "agpsr") == 0);

  const json gpsr = json::parse(slurp(dir / "gpsr" / "vqe_summary.json"));
  const json agpsr = json::parse(slurp(dir / "agpsr" / "vqe_summary.json"));
  CHECK(std::abs(gpsr.at("mean_final_energy").get<double>() - (-3.0)) <= 1e-2);
  CHECK(std::abs(agpsr.at("mean_final_energy").get<double>() - (-3.0)) <= 1e-2);
  // The K=1 approximate rule halves every entangler's four calls.
  CHECK(gpsr.at("calls_per_gradient") == 42);
  CHECK(agpsr.at("calls_per_gradient") == 30);
}

TEST_CASE("variance-opt monte-carlo check emits the paired comparison") {
  const fs::path dir = fresh_dir("varopt_mc");
  const json config = {
      {"generator", {{"type", "matrix"}, {"data", {{0.0, 1.0}, {1.0, 0.0}}}}},
      {"k", 1},
      {"step_a", 2.0},
      {"monte_carlo_check", {{"trials", 300}, {"shots", 500}, {"x", 0.7853981633974483}}},
      {"seed", 17},
  };
  REQUIRE(run_command("variance-opt", write_config(dir, config), dir / "out") == 0);
  const json out = json::parse(slurp(dir / "out" / "variance_opt.json"));
  const json& mc = out.at("monte_carlo_check");
  // Optimized shifts cannot be noisier than the defaults (paired seeds).
  CHECK(mc.at("empirical_variance_optimal").get<double>() <=
        mc.at("empirical_variance_initial").get<double>() * 1.25);
  const double predicted = mc.at("predicted_variance_optimal").at("sigma_d_sq").get<double>();
  CHECK(mc.at("empirical_variance_optimal").get<double>() ==
        doctest::Approx(predicted).epsilon(0.5));
}

TEST_CASE("scaling command covers small sizes") {
  const fs::path dir = fresh_dir("scaling");
  const json config = {
      {"n_min", 2}, {"n_max", 3},
      {"k_values", {2, 4, 6}},
      {"target_r", 0.01},
      {"scan", {{"start", 0.1}, {"stop", 2.0}, {"points", 12}}},
  };
  const fs::path cfg = write_config(dir, config);
  REQUIRE(run_command("scaling", cfg, dir / "out", 2) == 0);

  const auto rows = parse_csv(slurp(dir / "out" / "scaling.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][0] == "2");
  CHECK(rows[1][1] == "6");   // 4 levels -> 6 unique gaps
  CHECK(rows[2][0] == "3");
  CHECK(rows[2][1] == "28");  // 8 levels -> 28 unique gaps

  const auto table = parse_csv(slurp(dir / "out" / "scaling_errors.csv"));
  CHECK(table.size() == 1 + 2 * 3);
}

TEST_CASE("scaling errors shrink monotonically over the narrow-window K range") {
  const fs::path dir = fresh_dir("scaling_mono");
  const json config = {
      {"n_min", 3}, {"n_max", 4},
      {"k_values", {1, 2, 3, 4}},
      {"target_r", 0.002},
      {"scan", {{"start", 0.1}, {"stop", 3.0}, {"points", 30}}},
  };
  REQUIRE(run_command("scaling", write_config(dir, config), dir / "out", 2) == 0);

  const auto table = parse_csv(slurp(dir / "out" / "scaling_errors.csv"));
  REQUIRE(table.size() == 1 + 2 * 4);
  for (int n_idx = 0; n_idx < 2; ++n_idx) {
    for (int k_idx = 1; k_idx < 4; ++k_idx) {
      const double prev = std::stod(table[1 + n_idx * 4 + k_idx - 1][2]);
      const double curr = std::stod(table[1 + n_idx * 4 + k_idx][2]);
      CHECK(curr < prev);
    }
  }
}
