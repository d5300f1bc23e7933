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
 * The differentiation engines: single-gap PSR, the exact generalized rule
 * over all spectral gaps, and the approximate rule over K pseudo-gaps.
 *
 * All three share one evaluation scheme: measure F_k = f(x+d_k) - f(x-d_k)
 * for each shift, solve the sine system M R = F with
 * M_ij = 4 sin(d_i g_j / 2), and return sum_k g_k R_k along with the
 * per-shift evaluations and the expectation-call count.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "agpsr/quantum.hpp"
#include "agpsr/spectral.hpp"
#include "agpsr/types.hpp"

namespace agpsr {

enum class RuleKind { Psr, Gpsr, Agpsr };

/// Everything needed to evaluate one derivative: the rule, its gap values
/// (true gaps for GPSR, pseudo-gaps for aGPSR), the shifts, and the shot
/// model forwarded to every expectation call.
struct ShiftRuleSpec {
  RuleKind kind = RuleKind::Gpsr;
  RVector gaps;
  RVector shifts;
  ShotModel shot_model = ShotModel::exact();

  int equations() const { return static_cast<int>(gaps.size()); }
};

/// Throws std::invalid_argument / SingularSystemError when the spec cannot
/// produce a solvable system (shifts not ascending-positive-distinct, size
/// mismatch, or condition estimate beyond NumericsConfig::max_condition).
void validate(const ShiftRuleSpec& spec, const NumericsConfig& cfg = {});

struct DerivativeResult {
  double estimate = 0.0;
  RVector r_values;
  RVector f_plus;
  RVector f_minus;
  std::uint64_t expectation_calls = 0;
  std::optional<double> predicted_variance;
};

/// Expectation function handle: x and the shot model for this evaluation.
/// The engine derives a per-evaluation seed from (spec seed, shift index,
/// sign), so shifted calls are reproducible and independently samplable.
using ExpectationFn = std::function<double(double, const ShotModel&)>;

/// Handle over a fixed (generator, cost, initial state) triple.
ExpectationFn make_expectation_fn(const Generator& g, const CostOperator& c,
                                  const QuantumState& psi0);
/// Handle over a plain scalar function (ignores the shot model); for tests
/// and synthetic scans.
ExpectationFn make_expectation_fn(std::function<double(double)> f);

/// M_ij = 4 sin(shift_i * gap_j / 2).
RMatrix build_shift_matrix(const RVector& gaps, const RVector& shifts);

/// Evaluate one derivative at x per the spec. 2K expectation calls; the
/// linear solve runs at extended precision internally.
DerivativeResult estimate_derivative(const ExpectationFn& f, double x, const ShiftRuleSpec& spec);

/// K=1 specialization: gap * (f(x+d) - f(x-d)) / (4 sin(d * gap / 2)).
DerivativeResult psr_single_gap(const ExpectationFn& f, double x, double gap, double shift,
                                const ShotModel& shots = ShotModel::exact());

/// Expectation calls one full-GPSR derivative costs on an N-qubit
/// generator with a maximal gap set: 2^N (2^N - 1).
std::uint64_t count_full_gpsr_cost(int n_qubits);

/// Default shifts for few-equation rules: K values equidistant in
/// [pi/4, pi/2], scaled by 1/gamma_max (midpoint for K = 1).
RVector default_agpsr_shifts(const RVector& pseudo_gaps);

/// Default shifts for the exact rule over a full gap set: an equidistant
/// grid d_i = i * T / (S + 1) whose extent T is widened until the sine
/// system is well conditioned enough to resolve neighboring gaps.
RVector default_gpsr_shifts(const RVector& gaps);

ShiftRuleSpec make_gpsr_spec(const GapSet& gaps, ShotModel shots = ShotModel::exact());
ShiftRuleSpec make_agpsr_spec(const RVector& pseudo_gaps, ShotModel shots = ShotModel::exact());

}  // namespace agpsr
