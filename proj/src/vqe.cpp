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
#include "agpsr/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>

#include "agpsr/detail/rng.hpp"

namespace agpsr {

namespace {

constexpr int kDigitalLayers = 3;
constexpr double kStrongCouplingC6 = 2.0;  // nearest-neighbor J / Omega in the strong regime

ParamGate make_gate(CMatrix m, std::string label) {
  Generator gen = make_generator(std::move(m));
  GapSet gaps = unique_gaps(gen.eig);
  return ParamGate{std::move(gen), std::move(gaps), std::move(label)};
}

// Controlled-RX generator |1><1| on the control tensored with X on the
// target, embedded in the full register.
CMatrix crx_generator(int control, int target, int n_qubits) {
  const CMatrix one = (CMatrix(2, 2) << 0, 0, 0, 1).finished();
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q) {
    if (q == control)
      out = kron(out, one);
    else if (q == target)
      out = kron(out, pauli_x());
    else
      out = kron(out, CMatrix::Identity(2, 2));
  }
  return out;
}

}  // namespace

Ansatz build_ansatz(AnsatzKind kind, int n_qubits) {
  if (n_qubits < 2 || n_qubits > 8)
    throw std::invalid_argument("build_ansatz: supported sizes are 2..8 qubits");

  Ansatz ansatz;
  ansatz.kind = kind;
  ansatz.n_qubits = n_qubits;

  if (kind == AnsatzKind::Analog) {
    Generator g = neutral_atom_generator(1.0, two_row_lattice(n_qubits, kStrongCouplingC6));
    GapSet gaps = unique_gaps(g.eig);
    ansatz.gates.push_back(ParamGate{std::move(g), std::move(gaps), "analog"});
    return ansatz;
  }

  for (int layer = 0; layer < kDigitalLayers; ++layer) {
    for (int q = 0; q < n_qubits; ++q)
      ansatz.gates.push_back(make_gate(embed_single_qubit(pauli_x(), q, n_qubits),
                                       "rx[" + std::to_string(layer) + "][" + std::to_string(q) + "]"));
    for (int q = 0; q + 1 < n_qubits; ++q)
      ansatz.gates.push_back(make_gate(crx_generator(q, q + 1, n_qubits),
                                       "crx[" + std::to_string(layer) + "][" + std::to_string(q) + "]"));
  }
  return ansatz;
}

CostOperator build_cost_hamiltonian(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("build_cost_hamiltonian: need >= 1 qubit");
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  CMatrix c = CMatrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    double z = 0.0;
    for (int q = 0; q < n_qubits; ++q)
      z += ((b >> (n_qubits - 1 - q)) & 1) ? -1.0 : 1.0;
    c(b, b) = z;
  }
  return make_cost_operator(std::move(c));
}

RVector adam_step(AdamState& state, const RVector& grad, double learning_rate, int t) {
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  if (t < 1) throw std::invalid_argument("adam_step: t counts from 1");
  if (state.m.size() != grad.size())
    throw std::invalid_argument("adam_step: state/gradient size mismatch");

  state.m = beta1 * state.m + (1.0 - beta1) * grad;
  state.v = beta2 * state.v + (1.0 - beta2) * grad.cwiseProduct(grad);
  const double m_corr = 1.0 - std::pow(beta1, t);
  const double v_corr = 1.0 - std::pow(beta2, t);

  RVector delta(grad.size());
  for (Eigen::Index i = 0; i < grad.size(); ++i) {
    const double m_hat = state.m[i] / m_corr;
    const double v_hat = state.v[i] / v_corr;
    delta[i] = -learning_rate * m_hat / (std::sqrt(v_hat) + eps);
  }
  return delta;
}

QuantumState apply_ansatz(const Ansatz& ansatz, const RVector& params) {
  if (params.size() != ansatz.parameter_count())
    throw std::invalid_argument("apply_ansatz: parameter count mismatch");
  QuantumState psi = zero_state(ansatz.n_qubits);
  for (Eigen::Index i = 0; i < params.size(); ++i)
    psi = evolve(ansatz.gates[static_cast<std::size_t>(i)].generator, params[i], psi);
  return psi;
}

double ansatz_energy(const Ansatz& ansatz, const CostOperator& cost, const RVector& params) {
  const QuantumState psi = apply_ansatz(ansatz, params);
  return (psi.amplitudes.adjoint() * cost.matrix * psi.amplitudes)(0, 0).real();
}

namespace {

// Shift-rule spec for one parameter. The approximate rule only applies
// where the parameter has more than K true gaps; a parameter with a small
// exact gap set keeps the exact rule.
ShiftRuleSpec parameter_spec(const ParamGate& gate, const DiffMethod& diff) {
  if (diff.kind == RuleKind::Agpsr && gate.gaps.count() > diff.k) {
    const double step =
        diff.step_a > 0.0 ? diff.step_a
                          : gate.gaps.gaps[gate.gaps.gaps.size() - 1] / static_cast<double>(diff.k);
    const RVector gammas =
        pseudo_gaps(PseudoGapConfig{diff.k, UniformStep{step}, std::nullopt});
    return make_agpsr_spec(gammas);
  }
  return make_gpsr_spec(gate.gaps);
}

}  // namespace

GradientPlan make_gradient_plan(const Ansatz& ansatz, const DiffMethod& diff) {
  GradientPlan plan;
  plan.specs.reserve(ansatz.gates.size());
  for (const auto& gate : ansatz.gates) {
    plan.specs.push_back(parameter_spec(gate, diff));
    plan.calls_per_gradient += 2 * static_cast<std::uint64_t>(plan.specs.back().equations());
  }
  return plan;
}

RVector vqe_gradient(const Ansatz& ansatz, const CostOperator& cost, const RVector& params,
                     const GradientPlan& plan, const ShotModel& shots, std::uint64_t* calls) {
  if (params.size() != ansatz.parameter_count())
    throw std::invalid_argument("vqe_gradient: parameter count mismatch");
  if (plan.specs.size() != static_cast<std::size_t>(params.size()))
    throw std::invalid_argument("vqe_gradient: plan does not match the ansatz");

  RVector grad(params.size());
  std::uint64_t total_calls = 0;
  for (Eigen::Index p = 0; p < params.size(); ++p) {
    // Pure-value closure over the full circuit with parameter p rebound.
    auto f = make_expectation_fn([&, p](double y) {
      RVector shifted = params;
      shifted[p] = y;
      return ansatz_energy(ansatz, cost, shifted);
    });
    ShiftRuleSpec spec = plan.specs[static_cast<std::size_t>(p)];
    spec.shot_model = shots;
    spec.shot_model.seed = detail::derive_seed(shots.seed, static_cast<std::uint64_t>(p), 2);
    const DerivativeResult result = estimate_derivative(f, params[p], spec);
    grad[p] = result.estimate;
    total_calls += result.expectation_calls;
  }
  if (calls) *calls = total_calls;
  return grad;
}

RVector vqe_gradient(const Ansatz& ansatz, const CostOperator& cost, const RVector& params,
                     const DiffMethod& diff, const ShotModel& shots, std::uint64_t* calls) {
  return vqe_gradient(ansatz, cost, params, make_gradient_plan(ansatz, diff), shots, calls);
}

std::uint64_t gradient_call_count(const Ansatz& ansatz, const DiffMethod& diff) {
  std::uint64_t calls = 0;
  for (const auto& gate : ansatz.gates) {
    const int k = (diff.kind == RuleKind::Agpsr && gate.gaps.count() > diff.k)
                      ? diff.k
                      : gate.gaps.count();
    calls += 2 * static_cast<std::uint64_t>(k);
  }
  return calls;
}

std::vector<TrainTrace> run_vqe(const VqeConfig& config) {
  if (config.iterations < 0 || config.runs < 1)
    throw std::invalid_argument("run_vqe: need runs >= 1 and iterations >= 0");
  if (!(config.learning_rate > 0.0))
    throw std::invalid_argument("run_vqe: learning rate must be positive");

  const Ansatz ansatz = build_ansatz(config.ansatz, config.n_qubits);
  const CostOperator cost = build_cost_hamiltonian(config.n_qubits);
  const GradientPlan plan = make_gradient_plan(ansatz, config.diff);
  const int n_params = ansatz.parameter_count();

  auto execute_run = [&](int run) {
    const std::uint64_t run_seed = detail::splitmix64(config.seed + static_cast<std::uint64_t>(run));
    std::mt19937_64 rng(run_seed);

    RVector params(n_params);
    for (int p = 0; p < n_params; ++p)
      params[p] = detail::uniform(rng, -std::numbers::pi, std::numbers::pi);

    TrainTrace trace;
    trace.run_seed = run_seed;
    // Trace energies are exact diagnostics; only gradient evaluations
    // consume the shot budget.
    trace.energies.push_back(ansatz_energy(ansatz, cost, params));
    trace.cumulative_calls.push_back(0);

    AdamState adam(n_params);
    std::uint64_t calls = 0;
    for (int t = 1; t <= config.iterations; ++t) {
      ShotModel iteration_shots = config.shot_model;
      iteration_shots.seed = detail::derive_seed(run_seed, static_cast<std::uint64_t>(t), 3);
      std::uint64_t grad_calls = 0;
      const RVector grad =
          vqe_gradient(ansatz, cost, params, plan, iteration_shots, &grad_calls);
      params += adam_step(adam, grad, config.learning_rate, t);
      calls += grad_calls;
      trace.energies.push_back(ansatz_energy(ansatz, cost, params));
      trace.cumulative_calls.push_back(calls);
    }
    trace.final_energy = trace.energies.back();
    return trace;
  };

  std::vector<TrainTrace> traces(static_cast<std::size_t>(config.runs));
  const int threads = std::clamp(config.threads, 1, config.runs);
  if (threads == 1) {
    for (int run = 0; run < config.runs; ++run) traces[static_cast<std::size_t>(run)] = execute_run(run);
    return traces;
  }
  std::vector<std::future<void>> futures;
  futures.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    futures.push_back(std::async(std::launch::async, [&, t]() {
      for (int run = t; run < config.runs; run += threads)
        traces[static_cast<std::size_t>(run)] = execute_run(run);
    }));
  for (auto& f : futures) f.get();
  return traces;
}

}  // namespace agpsr
