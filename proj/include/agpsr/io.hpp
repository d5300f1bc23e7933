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
/**
 * @file
 * CSV and JSON serialization: RFC-4180 CSV with reproducible number
 * formatting, generator import/export, and result records for the CLI.
 */
#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "agpsr/error_analysis.hpp"
#include "agpsr/quantum.hpp"
#include "agpsr/shift_rules.hpp"
#include "agpsr/spectral.hpp"
#include "agpsr/variance_opt.hpp"
#include "agpsr/vqe.hpp"

namespace agpsr::io {

/// Shortest round-trip decimal representation of a double; identical input
/// yields identical bytes.
std::string format_double(double v);

/// RFC-4180 writer: CRLF line endings, quoting only where required.
class CsvWriter {
 public:
  explicit CsvWriter(std::string path);
  ~CsvWriter();

  void write_row(const std::vector<std::string>& fields);
  void write_row(double x, const std::vector<double>& values);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string buffer_;
};

// JSON records.
nlohmann::json generator_config_to_json(int n_qubits, double omega, const RMatrix& couplings);
CMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const CMatrix& m);

nlohmann::json to_json(const DerivativeResult& result);
nlohmann::json to_json(const ShiftRuleSpec& spec);
nlohmann::json to_json(const ShiftOptimizationReport& report);
nlohmann::json to_json(const VariancePrediction& prediction);

// CSV exports.
void write_gap_set_csv(const std::string& path, const GapSet& gaps);
void write_error_curve_csv(const std::string& path, const ErrorFunctionCurve& curve);
void write_trace_csv(const std::string& path, const TrainTrace& trace);

}  // namespace agpsr::io
