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
#include "agpsr/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace agpsr::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

std::string escape_field(const std::string& field) {
  if (!needs_quoting(field)) return field;
  std::string out = "\"";
  for (const char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::vector<double> vec(const RVector& v) { return {v.begin(), v.end()}; }

}  // namespace

CsvWriter::CsvWriter(std::string path) : path_(std::move(path)) {}

CsvWriter::~CsvWriter() {
  std::ofstream out(path_, std::ios::binary);
  out << buffer_;
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += escape_field(fields[i]);
  }
  buffer_ += "\r\n";
}

void CsvWriter::write_row(double x, const std::vector<double>& values) {
  std::vector<std::string> fields;
  fields.reserve(values.size() + 1);
  fields.push_back(format_double(x));
  for (const double v : values) fields.push_back(format_double(v));
  write_row(fields);
}

json generator_config_to_json(int n_qubits, double omega, const RMatrix& couplings) {
  json j;
  j["n_qubits"] = n_qubits;
  j["omega"] = omega;
  std::vector<std::vector<double>> rows;
  for (Eigen::Index r = 0; r < couplings.rows(); ++r)
    rows.emplace_back(couplings.row(r).begin(), couplings.row(r).end());
  j["couplings"] = rows;
  return j;
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix json: expected array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw std::invalid_argument("matrix json: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& entry = row.at(static_cast<std::size_t>(c));
      if (entry.is_number()) {
        m(r, c) = Complex(entry.get<double>(), 0.0);
      } else if (entry.is_array() && entry.size() == 2) {
        m(r, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
      } else {
        throw std::invalid_argument("matrix json: entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

json to_json(const DerivativeResult& result) {
  json j;
  j["estimate"] = result.estimate;
  j["r_values"] = vec(result.r_values);
  j["f_plus"] = vec(result.f_plus);
  j["f_minus"] = vec(result.f_minus);
  j["expectation_calls"] = result.expectation_calls;
  if (result.predicted_variance) j["predicted_variance"] = *result.predicted_variance;
  return j;
}

json to_json(const ShiftRuleSpec& spec) {
  json j;
  switch (spec.kind) {
    case RuleKind::Psr: j["kind"] = "psr"; break;
    case RuleKind::Gpsr: j["kind"] = "gpsr"; break;
    case RuleKind::Agpsr: j["kind"] = "agpsr"; break;
  }
  j["gaps"] = vec(spec.gaps);
  j["shifts"] = vec(spec.shifts);
  if (spec.shot_model.shots)
    j["shots"] = *spec.shot_model.shots;
  else
    j["shots"] = nullptr;
  j["seed"] = spec.shot_model.seed;
  return j;
}

json to_json(const ShiftOptimizationReport& report) {
  json j;
  j["initial_shifts"] = vec(report.initial_shifts);
  j["optimal_shifts"] = vec(report.optimal_shifts);
  j["initial_g"] = report.initial_g;
  j["optimal_g"] = report.optimal_g;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  return j;
}

json to_json(const VariancePrediction& prediction) {
  json j;
  j["sigma0_sq"] = prediction.sigma0_sq;
  if (prediction.n_shots == 0)
    j["n_shots"] = nullptr;
  else
    j["n_shots"] = prediction.n_shots;
  j["g_value"] = prediction.g_value;
  j["sigma_d_sq"] = prediction.sigma_d_sq;
  return j;
}

void write_gap_set_csv(const std::string& path, const GapSet& gaps) {
  CsvWriter csv(path);
  csv.write_row({"gap", "multiplicity"});
  for (int i = 0; i < gaps.count(); ++i)
    csv.write_row({format_double(gaps.gaps[i]), std::to_string(gaps.multiplicities[i])});
}

void write_error_curve_csv(const std::string& path, const ErrorFunctionCurve& curve) {
  CsvWriter csv(path);
  csv.write_row({"delta", "qk"});
  for (const auto& [delta, qk] : curve.samples)
    csv.write_row({format_double(delta), format_double(qk)});
}

void write_trace_csv(const std::string& path, const TrainTrace& trace) {
  CsvWriter csv(path);
  csv.write_row({"iteration", "energy", "cumulative_calls"});
  for (std::size_t i = 0; i < trace.energies.size(); ++i)
    csv.write_row({std::to_string(i), format_double(trace.energies[i]),
                   std::to_string(trace.cumulative_calls[i])});
}

}  // namespace agpsr::io
