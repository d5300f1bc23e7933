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
#include "agpsr/cli/commands.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "agpsr/detail/rng.hpp"
#include "agpsr/error_analysis.hpp"
#include "agpsr/experiments.hpp"
#include "agpsr/io.hpp"
#include "agpsr/quantum.hpp"
#include "agpsr/shift_rules.hpp"
#include "agpsr/spectral.hpp"
#include "agpsr/variance_opt.hpp"
#include "agpsr/vqe.hpp"

namespace agpsr::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) {
  throw std::invalid_argument("config: " + message);
}

const json& require(const json& j, const std::string& key) {
  if (!j.contains(key)) config_error("missing required field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_number()) config_error("field '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

int integer(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_number_integer()) config_error("field '" + key + "' must be an integer");
  return v.get<int>();
}

int integer_or(const json& j, const std::string& key, int fallback) {
  return j.contains(key) ? integer(j, key) : fallback;
}

RVector vector_field(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_array() || v.empty()) config_error("field '" + key + "' must be a non-empty array");
  RVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) config_error("field '" + key + "' must contain numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

// Run pure per-index work across threads, results kept in index order.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> futures;
  futures.reserve(threads);
  for (int t = 0; t < threads; ++t)
    futures.push_back(std::async(std::launch::async, [&, t]() {
      for (int i = t; i < count; i += threads) fn(i);
    }));
  for (auto& f : futures) f.get();
}

struct Context {
  json config;
  fs::path out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<std::string> outputs;

  fs::path artifact(const std::string& name) {
    outputs.push_back(name);
    return out_dir / name;
  }
};

double coupling_c6(const json& gen) {
  if (!gen.contains("coupling")) return 1.0;
  const json& c = gen.at("coupling");
  if (c.is_number()) return c.get<double>();
  if (c.is_string()) {
    const std::string regime = c.get<std::string>();
    // Nearest-neighbor J / Omega at unit spacing: 0.5 weak, 2.0 strong.
    if (regime == "weak") return 0.5;
    if (regime == "strong") return 2.0;
    if (regime == "unit") return 1.0;
    config_error("coupling must be weak|strong|unit or a number");
  }
  config_error("coupling must be weak|strong|unit or a number");
}

// A parsed generator plus, for the neutral-atom form, the canonical
// {n_qubits, omega, couplings} record with lattice specs expanded into the
// explicit J matrix.
struct ParsedGenerator {
  Generator generator;
  std::optional<json> canonical;
};

ParsedGenerator parse_generator(const json& gen) {
  const std::string type = require(gen, "type").get<std::string>();
  if (type == "matrix") {
    Generator g = make_generator(io::matrix_from_json(require(gen, "data")));
    const Eigen::Index dim = g.dim();
    if (dim < 2 || (dim & (dim - 1)) != 0)
      config_error("matrix generator dimension must be a power of two");
    return {std::move(g), std::nullopt};
  }
  if (type != "neutral_atom") config_error("generator type must be neutral_atom or matrix");

  const int n = integer(gen, "n_qubits");
  const double omega = number_or(gen, "omega", 1.0);
  if (gen.contains("couplings")) {
    const CMatrix raw = io::matrix_from_json(gen.at("couplings"));
    if (raw.imag().cwiseAbs().maxCoeff() > 0.0) config_error("couplings must be real");
    const RMatrix j = raw.real();
    return {neutral_atom_generator(n, omega, j), io::generator_config_to_json(n, omega, j)};
  }

  const double c6 = coupling_c6(gen) * omega;
  Lattice lattice;
  if (gen.contains("lattice")) {
    const json& lat = gen.at("lattice");
    if (lat.contains("positions")) {
      lattice.c6 = c6;
      for (const auto& p : lat.at("positions")) {
        if (!p.is_array() || p.size() != 2) config_error("lattice positions must be [x, y] pairs");
        lattice.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      }
      if (static_cast<int>(lattice.positions.size()) != n)
        config_error("lattice position count must equal n_qubits");
    } else {
      const int rows = integer(lat, "rows");
      const int cols = integer(lat, "cols");
      if (rows * cols != n) config_error("lattice rows*cols must equal n_qubits");
      lattice = rectangular_lattice(rows, cols, c6);
    }
  } else {
    lattice = two_row_lattice(n, c6);
  }
  const RMatrix j = lattice_couplings(lattice);
  return {neutral_atom_generator(n, omega, j), io::generator_config_to_json(n, omega, j)};
}

Generator generator_from_config(const json& gen) { return parse_generator(gen).generator; }

QuantumState state_from_config(const json& cfg, int n_qubits, std::uint64_t run_seed) {
  if (!cfg.contains("initial_state")) return zero_state(n_qubits);
  const json& st = cfg.at("initial_state");
  if (st.is_string()) {
    const std::string name = st.get<std::string>();
    if (name == "zero") return zero_state(n_qubits);
    if (name == "random") return random_state(n_qubits, detail::splitmix64(run_seed));
    config_error("initial_state must be zero, random, or an object");
  }
  const std::string type = require(st, "type").get<std::string>();
  if (type == "zero") return zero_state(n_qubits);
  if (type == "random")
    return random_state(n_qubits,
                        st.contains("seed") ? st.at("seed").get<std::uint64_t>()
                                            : detail::splitmix64(run_seed));
  config_error("initial_state type must be zero or random");
}

CostOperator cost_from_config(const json& cfg, int n_qubits) {
  if (!cfg.contains("cost")) return build_cost_hamiltonian(n_qubits);
  const json& c = cfg.at("cost");
  if (c.is_string()) {
    if (c.get<std::string>() == "total_z") return build_cost_hamiltonian(n_qubits);
    config_error("cost must be total_z or a matrix object");
  }
  return make_cost_operator(io::matrix_from_json(require(c, "data")));
}

ShotModel shots_from_config(const json& cfg, std::uint64_t seed) {
  if (!cfg.contains("shots") || cfg.at("shots").is_null()) return ShotModel::exact();
  const json& s = cfg.at("shots");
  const std::uint64_t n = s.is_number() ? s.get<std::uint64_t>()
                                        : require(s, "n").get<std::uint64_t>();
  if (n < 1) config_error("shots must be >= 1");
  return ShotModel::finite(n, seed);
}

struct NamedSpec {
  std::string name;
  ShiftRuleSpec spec;
  std::optional<double> psr_gap;    // PSR runs outside the spec machinery
  std::optional<double> psr_shift;
};

NamedSpec method_from_config(const json& m, const GapSet& true_gaps, const ShotModel& shots) {
  const std::string type = require(m, "type").get<std::string>();
  NamedSpec named;
  if (type == "psr") {
    named.psr_gap = number_or(m, "gap", 2.0);
    named.psr_shift = number_or(m, "shift", std::numbers::pi / 2.0);
    named.name = "psr";
    return named;
  }
  if (type == "gpsr") {
    named.spec = make_gpsr_spec(true_gaps, shots);
    named.name = "gpsr";
    return named;
  }
  if (type != "agpsr") config_error("method type must be psr, gpsr, or agpsr");

  const int k = integer(m, "k");
  const double step = number(m, "step_a");
  const RVector gammas = pseudo_gaps(PseudoGapConfig{k, UniformStep{step}, std::nullopt});
  named.spec = make_agpsr_spec(gammas, shots);
  if (m.contains("shifts")) named.spec.shifts = vector_field(m, "shifts");
  named.name = "agpsr_k" + std::to_string(k);
  return named;
}

RVector scan_grid(const json& cfg) {
  const json& scan = require(cfg, "scan");
  const double start = number(scan, "start");
  const double stop = number(scan, "stop");
  const int points = integer(scan, "points");
  if (points < 1 || !(stop > start)) config_error("scan needs stop > start and points >= 1");
  return RVector::LinSpaced(points, start, stop);
}

void cmd_scan(Context& ctx) {
  const json& cfg = ctx.config;
  const Generator g = generator_from_config(require(cfg, "generator"));
  const int n_qubits = static_cast<int>(std::round(std::log2(static_cast<double>(g.dim()))));
  const CostOperator cost = cost_from_config(cfg, n_qubits);
  const QuantumState psi0 = state_from_config(cfg, n_qubits, ctx.seed);
  const ExpectationEvaluator f(g, cost, psi0);
  const GapSet true_gaps = unique_gaps(g.eig);
  const ShotModel shots = shots_from_config(cfg, ctx.seed);

  const json& methods_cfg = require(cfg, "methods");
  if (!methods_cfg.is_array() || methods_cfg.empty())
    config_error("methods must be a non-empty array");
  std::vector<NamedSpec> methods;
  for (const auto& m : methods_cfg) methods.push_back(method_from_config(m, true_gaps, shots));

  const RVector xs = scan_grid(cfg);
  const int points = static_cast<int>(xs.size());
  std::vector<std::vector<double>> rows(points);

  parallel_for(points, ctx.threads, [&](int i) {
    std::vector<double> row;
    row.reserve(methods.size() + 1);
    row.push_back(f.derivative_oracle(xs[i]));
    const ExpectationFn fn = [&f](double x, const ShotModel& s) { return f(x, s); };
    for (const auto& method : methods) {
      if (method.psr_gap) {
        ShotModel point_shots = shots;
        point_shots.seed = detail::derive_seed(ctx.seed, static_cast<std::uint64_t>(i), 4);
        row.push_back(
            psr_single_gap(fn, xs[i], *method.psr_gap, *method.psr_shift, point_shots).estimate);
      } else {
        ShiftRuleSpec spec = method.spec;
        spec.shot_model.seed = detail::derive_seed(ctx.seed, static_cast<std::uint64_t>(i), 4);
        row.push_back(estimate_derivative(fn, xs[i], spec).estimate);
      }
    }
    rows[static_cast<std::size_t>(i)] = std::move(row);
  });

  io::CsvWriter csv(ctx.artifact("scan.csv").string());
  std::vector<std::string> header = {"x", "exact"};
  for (const auto& method : methods) header.push_back(method.name);
  csv.write_row(header);
  for (int i = 0; i < points; ++i) csv.write_row(xs[i], rows[static_cast<std::size_t>(i)]);
}

void cmd_error_curve(Context& ctx) {
  const json& cfg = ctx.config;

  RVector gammas;
  if (cfg.contains("gammas")) {
    gammas = vector_field(cfg, "gammas");
  } else {
    const int k = integer(cfg, "k");
    if (cfg.contains("epsilon"))
      gammas = pseudo_gaps(PseudoGapConfig{k, EpsilonInteger{number(cfg, "epsilon")}, std::nullopt});
    else
      gammas = pseudo_gaps(PseudoGapConfig{k, UniformStep{number(cfg, "step_a")}, std::nullopt});
  }
  const RVector shifts =
      cfg.contains("shifts") ? vector_field(cfg, "shifts") : default_agpsr_shifts(gammas);

  const json& range = require(cfg, "delta_range");
  const double start = number(range, "start");
  const double stop = number(range, "stop");
  const int points = integer(range, "points");
  if (points < 1 || !(stop >= start)) config_error("delta_range needs stop >= start, points >= 1");

  const ErrorFunctionCurve curve =
      sample_error_curve(gammas, shifts, RVector::LinSpaced(points, start, stop));
  io::write_error_curve_csv(ctx.artifact("error_curve.csv").string(), curve);
}

void cmd_scaling(Context& ctx) {
  const json& cfg = ctx.config;
  const int n_min = integer_or(cfg, "n_min", 3);
  const int n_max = integer_or(cfg, "n_max", 6);
  if (n_min < 2 || n_max > 7 || n_min > n_max) config_error("scaling supports n in [2, 7]");
  const double target_r = number_or(cfg, "target_r", 0.002);
  const double c6 = cfg.contains("coupling") ? coupling_c6(cfg) : 1.0;
  const double step_a = number_or(cfg, "step_a", 0.0);

  std::vector<int> k_values;
  if (cfg.contains("k_values")) {
    for (const auto& v : cfg.at("k_values")) k_values.push_back(v.get<int>());
  } else {
    k_values = {1, 2, 4, 6, 8, 12, 16};
  }

  const json scan = cfg.contains("scan")
                        ? cfg.at("scan")
                        : json{{"start", 0.1}, {"stop", 3.0}, {"points", 50}};
  const RVector xs = RVector::LinSpaced(integer(scan, "points"), number(scan, "start"),
                                        number(scan, "stop"));

  const int count = n_max - n_min + 1;
  std::vector<ScalingRow> rows(static_cast<std::size_t>(count));
  parallel_for(count, ctx.threads, [&](int i) {
    rows[static_cast<std::size_t>(i)] = scaling_row(n_min + i, c6, k_values, target_r, xs, step_a);
  });

  io::CsvWriter summary(ctx.artifact("scaling.csv").string());
  summary.write_row({"n", "total_gaps", "k_min", "target_r"});
  for (const auto& row : rows)
    summary.write_row({std::to_string(row.n_qubits), std::to_string(row.total_gaps),
                       std::to_string(row.k_min), io::format_double(target_r)});

  io::CsvWriter table(ctx.artifact("scaling_errors.csv").string());
  table.write_row({"n", "k", "r"});
  for (const auto& row : rows)
    for (const auto& [k, r] : row.r_by_k)
      table.write_row({std::to_string(row.n_qubits), std::to_string(k), io::format_double(r)});
}

void cmd_variance_opt(Context& ctx) {
  const json& cfg = ctx.config;
  const Generator g = generator_from_config(require(cfg, "generator"));
  const int n_qubits = static_cast<int>(std::round(std::log2(static_cast<double>(g.dim()))));
  const int k = integer(cfg, "k");
  const double step_a = number_or(cfg, "step_a", max_gap(g.eig) / std::max(1, k));

  const GapSet true_gaps = unique_gaps(g.eig);
  RVector gammas;
  if (k == true_gaps.count())
    gammas = true_gaps.gaps;
  else
    gammas = pseudo_gaps(PseudoGapConfig{k, UniformStep{step_a}, std::nullopt});

  ShiftBounds bounds = default_shift_bounds(gammas);
  if (cfg.contains("bounds")) {
    bounds.lo = number(cfg.at("bounds"), "lo");
    bounds.hi = number(cfg.at("bounds"), "hi");
  }

  const RVector initial = default_agpsr_shifts(gammas);
  const ShiftOptimizationReport report = optimize_shifts(gammas, initial, bounds);

  ShiftRuleSpec spec;
  spec.kind = k == true_gaps.count() ? RuleKind::Gpsr : RuleKind::Agpsr;
  spec.gaps = gammas;
  spec.shifts = report.optimal_shifts;
  spec.shot_model = shots_from_config(cfg, ctx.seed);

  json out;
  out["report"] = io::to_json(report);
  out["spec"] = io::to_json(spec);

  // Optional paired-seed A/B check: empirical derivative variance with the
  // default shifts vs the optimized shifts, same seeds on both sides.
  if (cfg.contains("monte_carlo_check")) {
    const json& mc = cfg.at("monte_carlo_check");
    const int trials = integer_or(mc, "trials", 500);
    const std::uint64_t mc_shots = mc.contains("shots") ? mc.at("shots").get<std::uint64_t>() : 1000;
    const double x = number_or(mc, "x", std::numbers::pi / 4.0);

    const CostOperator cost = cost_from_config(cfg, n_qubits);
    const QuantumState psi0 = state_from_config(cfg, n_qubits, ctx.seed);
    const ExpectationEvaluator f(g, cost, psi0);
    const ExpectationFn fn = [&f](double xx, const ShotModel& s) { return f(xx, s); };

    auto empirical = [&](const RVector& shifts) {
      ShiftRuleSpec s = spec;
      s.shifts = shifts;
      double sum = 0.0, sum_sq = 0.0;
      for (int t = 0; t < trials; ++t) {
        s.shot_model = ShotModel::finite(mc_shots, detail::derive_seed(ctx.seed, t, 5));
        const double est = estimate_derivative(fn, x, s).estimate;
        sum += est;
        sum_sq += est * est;
      }
      return (sum_sq - sum * sum / trials) / (trials - 1);
    };

    const double sigma0_sq = f.variance(x);
    ShiftRuleSpec pred_spec = spec;
    pred_spec.shot_model = ShotModel::finite(mc_shots, 0);
    json check;
    check["x"] = x;
    check["trials"] = trials;
    check["shots"] = mc_shots;
    check["sigma0_sq"] = sigma0_sq;
    check["empirical_variance_initial"] = empirical(report.initial_shifts);
    check["empirical_variance_optimal"] = empirical(report.optimal_shifts);
    ShiftRuleSpec init_spec = pred_spec;
    init_spec.shifts = report.initial_shifts;
    check["predicted_variance_initial"] = io::to_json(predict_variance(init_spec, sigma0_sq));
    check["predicted_variance_optimal"] = io::to_json(predict_variance(pred_spec, sigma0_sq));
    out["monte_carlo_check"] = check;
  }

  std::ofstream stream(ctx.artifact("variance_opt.json"));
  stream << out.dump(2) << "\n";
}

void cmd_vqe(Context& ctx) {
  const json& cfg = ctx.config;
  VqeConfig config;
  config.n_qubits = integer(cfg, "n_qubits");
  const std::string ansatz = require(cfg, "ansatz").get<std::string>();
  if (ansatz == "digital")
    config.ansatz = AnsatzKind::Digital;
  else if (ansatz == "analog")
    config.ansatz = AnsatzKind::Analog;
  else
    config_error("ansatz must be digital or analog");

  const json& diff = require(cfg, "diff");
  const std::string method = require(diff, "method").get<std::string>();
  if (method == "gpsr") {
    config.diff.kind = RuleKind::Gpsr;
  } else if (method == "agpsr") {
    config.diff.kind = RuleKind::Agpsr;
    config.diff.k = integer(diff, "k");
    config.diff.step_a = number_or(diff, "step_a", 0.0);
  } else {
    config_error("diff.method must be gpsr or agpsr");
  }

  config.learning_rate = number_or(cfg, "learning_rate", 0.01);
  config.iterations = integer_or(cfg, "iterations", 100);
  config.runs = integer_or(cfg, "runs", 10);
  config.seed = ctx.seed;
  config.shot_model = shots_from_config(cfg, ctx.seed);
  config.threads = ctx.threads;

  const std::vector<TrainTrace> traces = run_vqe(config);
  for (std::size_t i = 0; i < traces.size(); ++i)
    io::write_trace_csv(ctx.artifact("run_" + std::to_string(i) + ".csv").string(), traces[i]);

  const Ansatz built = build_ansatz(config.ansatz, config.n_qubits);
  const std::uint64_t calls_this = gradient_call_count(built, config.diff);
  const std::uint64_t calls_gpsr =
      gradient_call_count(built, DiffMethod{RuleKind::Gpsr, 0, 0.0});

  double mean_final = 0.0, min_final = std::numeric_limits<double>::infinity();
  for (const auto& t : traces) {
    mean_final += t.final_energy;
    min_final = std::min(min_final, t.final_energy);
  }
  mean_final /= static_cast<double>(traces.size());

  json out;
  out["n_qubits"] = config.n_qubits;
  out["ansatz"] = ansatz;
  out["method"] = method;
  out["runs"] = config.runs;
  out["iterations"] = config.iterations;
  out["mean_final_energy"] = mean_final;
  out["min_final_energy"] = min_final;
  out["calls_per_gradient"] = calls_this;
  out["total_calls_per_run"] = calls_this * static_cast<std::uint64_t>(config.iterations);
  out["savings_factor_vs_gpsr"] =
      static_cast<double>(calls_gpsr) / static_cast<double>(calls_this);
  std::ofstream stream(ctx.artifact("vqe_summary.json"));
  stream << out.dump(2) << "\n";
}

void cmd_gaps(Context& ctx) {
  const json& cfg = ctx.config;
  ParsedGenerator parsed = parse_generator(require(cfg, "generator"));
  const Generator& g = parsed.generator;
  const GapSet gaps = unique_gaps(g.eig);
  io::write_gap_set_csv(ctx.artifact("gaps.csv").string(), gaps);

  // Canonical neutral-atom record with lattice specs expanded to J_ij.
  if (parsed.canonical) {
    std::ofstream stream(ctx.artifact("generator_config.json"));
    stream << parsed.canonical->dump(2) << "\n";
  }

  if (cfg.contains("bins")) {
    const GapHistogram hist = gap_histogram(gaps, integer(cfg, "bins"));
    io::CsvWriter csv(ctx.artifact("gap_histogram.csv").string());
    csv.write_row({"bin_lo", "bin_hi", "mass"});
    for (Eigen::Index b = 0; b < hist.mass.size(); ++b)
      csv.write_row({io::format_double(hist.edges[b]), io::format_double(hist.edges[b + 1]),
                     io::format_double(hist.mass[b])});
  }

  // Dense matrix dump for debugging.
  if (cfg.contains("dump_matrix") && cfg.at("dump_matrix").get<bool>()) {
    std::ofstream stream(ctx.artifact("generator_matrix.json"));
    stream << io::matrix_to_json(g.matrix).dump() << "\n";
  }
}

}  // namespace

int run(const Options& options) {
  const auto start_time = std::chrono::steady_clock::now();

  json manifest;
  manifest["command"] = options.command;
  manifest["tool_version"] = kVersion;

  Context ctx;
  ctx.out_dir = options.out_dir;
  ctx.threads = std::max(1, options.threads);

  std::string error;
  try {
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);

    std::ifstream stream(options.config_path);
    if (!stream) config_error("cannot open config file '" + options.config_path + "'");
    ctx.config = json::parse(stream);

    ctx.seed = options.seed ? *options.seed
                            : (ctx.config.contains("seed")
                                   ? ctx.config.at("seed").get<std::uint64_t>()
                                   : 0);
    manifest["seed"] = ctx.seed;
    manifest["config"] = ctx.config;

    if (options.command == "scan")
      cmd_scan(ctx);
    else if (options.command == "error-curve")
      cmd_error_curve(ctx);
    else if (options.command == "scaling")
      cmd_scaling(ctx);
    else if (options.command == "variance-opt")
      cmd_variance_opt(ctx);
    else if (options.command == "vqe")
      cmd_vqe(ctx);
    else if (options.command == "gaps")
      cmd_gaps(ctx);
    else
      config_error("unknown command '" + options.command + "'");
  } catch (const std::exception& e) {
    error = e.what();
  }

  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time);
  manifest["outputs"] = ctx.outputs;
  manifest["wall_time_s"] = elapsed.count();
  if (!error.empty()) manifest["error"] = error;

  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  std::ofstream manifest_stream(ctx.out_dir / "manifest.json");
  manifest_stream << manifest.dump(2) << "\n";

  if (!error.empty()) {
    std::cerr << "agpsr " << options.command << ": " << error << "\n";
    return 1;
  }
  return 0;
}

}  // namespace agpsr::cli
