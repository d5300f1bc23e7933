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
#include "agpsr/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "agpsr/spectral.hpp"
#include "agpsr/vqe.hpp"

namespace agpsr {

RelativeErrorResult mean_relative_error(const ExpectationEvaluator& f, const ShiftRuleSpec& spec,
                                        const RVector& xs, double guard) {
  if (xs.size() < 1) throw std::invalid_argument("mean_relative_error: empty scan grid");
  const ExpectationFn fn = [&f](double x, const ShotModel& shots) { return f(x, shots); };

  RelativeErrorResult out;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    const double exact = f.derivative_oracle(xs[i]);
    if (std::abs(exact) < guard) {
      ++out.excluded_points;
      continue;
    }
    const double estimate = estimate_derivative(fn, xs[i], spec).estimate;
    sum += std::abs(estimate - exact) / std::abs(exact);
    ++out.used_points;
  }
  if (out.used_points == 0)
    throw std::runtime_error("mean_relative_error: every scan point fell below the guard");
  out.mean_rel_err = sum / out.used_points;
  return out;
}

ScalingRow scaling_row(int n_qubits, double c6, const std::vector<int>& k_values, double target_r,
                       const RVector& xs, double step_a) {
  ScalingRow row;
  row.n_qubits = n_qubits;

  const Generator g = neutral_atom_generator(1.0, two_row_lattice(n_qubits, c6));
  const CostOperator cost = build_cost_hamiltonian(n_qubits);
  const QuantumState psi0 = zero_state(n_qubits);
  const ExpectationEvaluator f(g, cost, psi0);

  const GapSet gaps = unique_gaps(g.eig);
  row.total_gaps = gaps.count();
  const double gap_max = max_gap(g.eig);

  for (const int k : k_values) {
    const double a = step_a > 0.0 ? step_a : gap_max / k;
    const RVector gammas = pseudo_gaps(PseudoGapConfig{k, UniformStep{a}, std::nullopt});
    const ShiftRuleSpec spec = make_agpsr_spec(gammas);
    const double r = mean_relative_error(f, spec, xs).mean_rel_err;
    row.r_by_k.emplace_back(k, r);
    if (row.k_min < 0 && r <= target_r) row.k_min = k;
  }
  return row;
}

}  // namespace agpsr
