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
 * Shot-noise variance of shift-rule derivatives and variance-minimizing
 * shift selection.
 *
 * With a = M^{-1}, the derivative variance is
 * sigma_d^2 = (2 sigma_0^2 / N_shots) * g where
 * g = sum_s sum_k gap_s^2 a_sk^2 depends only on gaps and shifts. The
 * optimizer minimizes g over shifts inside a bounded box with a
 * derivative-free simplex.
 */
#pragma once

#include <cstdint>

#include "agpsr/quantum.hpp"
#include "agpsr/shift_rules.hpp"
#include "agpsr/types.hpp"

namespace agpsr {

/// Variance prefactor g(gaps, shifts); +infinity for singular sine systems
/// so optimizers can route around them.
double g_objective(const RVector& gaps, const RVector& shifts);

struct ShiftBounds {
  double lo = 0.01;
  double hi = 1.0;
};

/// Default bounds (0.01, pi/gap_max].
ShiftBounds default_shift_bounds(const RVector& gaps);

struct ShiftOptimizationReport {
  RVector initial_shifts;
  RVector optimal_shifts;
  double initial_g = 0.0;
  double optimal_g = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimize g over shifts with a bounded Nelder-Mead simplex. Iterates are
/// projected into the bounds and kept ascending/distinct; the best point
/// never regresses, so optimal_g <= initial_g. Deterministic.
ShiftOptimizationReport optimize_shifts(const RVector& gaps, const RVector& initial_shifts,
                                        const ShiftBounds& bounds);

struct VariancePrediction {
  double sigma0_sq = 0.0;
  std::uint64_t n_shots = 0;  // 0 encodes the exact (infinite-shot) model
  double g_value = 0.0;
  double sigma_d_sq = 0.0;    // 2 sigma0_sq / n_shots * g_value
};

VariancePrediction predict_variance(const ShiftRuleSpec& spec, double sigma0_sq);

/// The four-step pipeline producing a ready-to-use approximate-rule spec:
/// sweep the pseudo-gap step around `step_a` scored against the true gap
/// set, then optimize the shifts for variance. Degenerates to the exact
/// rule when the chosen pseudo-gaps coincide with the true gaps.
ShiftRuleSpec variance_optimized_spec(const Generator& g, int k, double step_a,
                                      const ShiftBounds& bounds,
                                      ShotModel shots = ShotModel::exact());

}  // namespace agpsr
