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
 * Derivative-accuracy studies shared by the CLI and the acceptance suite:
 * mean relative error of a shift rule over a scan, and the per-system-size
 * search for the smallest equation count reaching a target error.
 */
#pragma once

#include <vector>

#include "agpsr/quantum.hpp"
#include "agpsr/shift_rules.hpp"
#include "agpsr/types.hpp"

namespace agpsr {

/// Mean of |estimate - exact| / |exact| over the scan grid, skipping points
/// where the exact derivative is below `guard` (the ratio degenerates).
struct RelativeErrorResult {
  double mean_rel_err = 0.0;
  int used_points = 0;
  int excluded_points = 0;
};

RelativeErrorResult mean_relative_error(const ExpectationEvaluator& f, const ShiftRuleSpec& spec,
                                        const RVector& xs, double guard = 1e-6);

/// One row of the gap-count scaling study on the two-row lattice with
/// J approximately equal to Omega: the true gap count, the relative error
/// for each candidate K (pseudo-gap step gap_max / K unless `step_a` > 0),
/// and the smallest K meeting `target_r` (-1 when none does).
struct ScalingRow {
  int n_qubits = 0;
  int total_gaps = 0;
  int k_min = -1;
  std::vector<std::pair<int, double>> r_by_k;
};

ScalingRow scaling_row(int n_qubits, double c6, const std::vector<int>& k_values, double target_r,
                       const RVector& xs, double step_a = 0.0);

}  // namespace agpsr
