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
 * Variational eigensolver harness: digital (RX + controlled-RX layers) and
 * analog (single neutral-atom evolution) ansatzes, the sum-of-Z cost
 * Hamiltonian, Adam, and gradient assembly from shift rules with exact
 * expectation-call accounting.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agpsr/quantum.hpp"
#include "agpsr/shift_rules.hpp"
#include "agpsr/spectral.hpp"
#include "agpsr/types.hpp"

namespace agpsr {

enum class AnsatzKind { Digital, Analog };

/// One parameterized evolution exp(-i theta/2 G) with the generator's gap
/// set cached for per-parameter rule selection.
struct ParamGate {
  Generator generator;
  GapSet gaps;
  std::string label;
};

struct Ansatz {
  AnsatzKind kind = AnsatzKind::Digital;
  int n_qubits = 0;
  std::vector<ParamGate> gates;  // applied in order, one parameter each

  int parameter_count() const { return static_cast<int>(gates.size()); }
};

/// Digital: 3 layers of per-qubit RX rotations followed by a nearest-
/// neighbor chain of controlled-RX entanglers (generator |1><1| (x) X,
/// gaps {1, 2}). Analog: one parameter multiplying the strong-interaction
/// neutral-atom generator on the two-row lattice.
Ansatz build_ansatz(AnsatzKind kind, int n_qubits);

/// Cost Hamiltonian sum_i Z_i; ground energy -N.
CostOperator build_cost_hamiltonian(int n_qubits);

struct DiffMethod {
  RuleKind kind = RuleKind::Gpsr;
  int k = 4;           // aGPSR equation count
  double step_a = 0.0; // aGPSR pseudo-gap step; <= 0 selects gap_max / K per gate
};

struct VqeConfig {
  int n_qubits = 3;
  AnsatzKind ansatz = AnsatzKind::Digital;
  DiffMethod diff;
  double learning_rate = 0.01;
  int iterations = 100;
  int runs = 10;
  std::uint64_t seed = 0;
  ShotModel shot_model = ShotModel::exact();
  int threads = 1;  // independent runs may execute in parallel
};

struct TrainTrace {
  std::vector<double> energies;                 // length iterations + 1
  std::vector<std::uint64_t> cumulative_calls;  // same length, starts at 0
  double final_energy = 0.0;
  std::uint64_t run_seed = 0;
};

/// Adam first/second moment accumulators; zero-initialized.
struct AdamState {
  RVector m;
  RVector v;

  explicit AdamState(int n) : m(RVector::Zero(n)), v(RVector::Zero(n)) {}
};

/// One bias-corrected Adam update (beta1 = 0.9, beta2 = 0.999, eps = 1e-8);
/// returns the parameter delta, t counts from 1.
RVector adam_step(AdamState& state, const RVector& grad, double learning_rate, int t);

QuantumState apply_ansatz(const Ansatz& ansatz, const RVector& params);
double ansatz_energy(const Ansatz& ansatz, const CostOperator& cost, const RVector& params);

/// Per-parameter shift-rule specs resolved once per method: the exact rule
/// over a parameter's true gaps, or the K-equation approximate rule when
/// the parameter has more than K gaps.
struct GradientPlan {
  std::vector<ShiftRuleSpec> specs;  // one per parameter
  std::uint64_t calls_per_gradient = 0;
};

GradientPlan make_gradient_plan(const Ansatz& ansatz, const DiffMethod& diff);

RVector vqe_gradient(const Ansatz& ansatz, const CostOperator& cost, const RVector& params,
                     const GradientPlan& plan, const ShotModel& shots,
                     std::uint64_t* calls = nullptr);

/// Convenience wrapper building the plan on the fly.
RVector vqe_gradient(const Ansatz& ansatz, const CostOperator& cost, const RVector& params,
                     const DiffMethod& diff, const ShotModel& shots,
                     std::uint64_t* calls = nullptr);

/// Expectation calls one gradient evaluation costs under `diff`.
std::uint64_t gradient_call_count(const Ansatz& ansatz, const DiffMethod& diff);

/// Independent seeded runs: init parameters uniform in [-pi, pi], Adam for
/// config.iterations steps, energies and cumulative gradient calls recorded
/// per iteration.
std::vector<TrainTrace> run_vqe(const VqeConfig& config);

}  // namespace agpsr
