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
#include "agpsr/shift_rules.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "agpsr/detail/extended.hpp"
#include "agpsr/detail/rng.hpp"

namespace agpsr {

void validate(const ShiftRuleSpec& spec, const NumericsConfig& cfg) {
  const Eigen::Index k = spec.gaps.size();
  if (k < 1) throw std::invalid_argument("shift rule: need at least one gap");
  if (spec.shifts.size() != k)
    throw std::invalid_argument("shift rule: gaps and shifts must have equal length");
  if (spec.kind == RuleKind::Psr && k != 1)
    throw std::invalid_argument("shift rule: PSR uses exactly one gap");
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(spec.gaps[i] > 0.0)) throw std::invalid_argument("shift rule: gaps must be positive");
    if (!(spec.shifts[i] > 0.0))
      throw std::invalid_argument("shift rule: shifts must be positive");
    if (i > 0 && !(spec.shifts[i] > spec.shifts[i - 1]))
      throw std::invalid_argument("shift rule: shifts must be strictly ascending");
    if (i > 0 && !(spec.gaps[i] > spec.gaps[i - 1]))
      throw std::invalid_argument("shift rule: gaps must be strictly ascending");
  }
  if (spec.shot_model.shots && *spec.shot_model.shots < 1)
    throw std::invalid_argument("shift rule: finite shot model needs at least one shot");

  const double cond = condition_estimate(build_shift_matrix(spec.gaps, spec.shifts));
  if (!(cond < cfg.max_condition))
    throw SingularSystemError(
        "shift rule: sine system is numerically singular; change shifts or pseudo-gaps", cond);
}

ExpectationFn make_expectation_fn(const Generator& g, const CostOperator& c,
                                  const QuantumState& psi0) {
  auto eval = std::make_shared<ExpectationEvaluator>(g, c, psi0);
  return [eval](double x, const ShotModel& shots) { return (*eval)(x, shots); };
}

ExpectationFn make_expectation_fn(std::function<double(double)> f) {
  return [f = std::move(f)](double x, const ShotModel&) { return f(x); };
}

RMatrix build_shift_matrix(const RVector& gaps, const RVector& shifts) {
  if (gaps.size() != shifts.size())
    throw std::invalid_argument("build_shift_matrix: length mismatch");
  RMatrix m(shifts.size(), gaps.size());
  for (Eigen::Index i = 0; i < shifts.size(); ++i)
    for (Eigen::Index j = 0; j < gaps.size(); ++j)
      m(i, j) = 4.0 * std::sin(0.5 * shifts[i] * gaps[j]);
  return m;
}

namespace {

// Solve M R = F at extended precision. Sine systems turn ill-conditioned
// quickly as shifts shrink or gaps cluster; the widened mantissa keeps the
// solve itself out of the error budget.
RVector solve_shift_system(const RVector& gaps, const RVector& shifts, const RVector& f) {
  using detail::xreal;
  const int k = static_cast<int>(gaps.size());
  detail::XMatrix m(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      m(i, j) = xreal(4) * detail::xsin(xreal(0.5) * xreal(shifts[i]) * xreal(gaps[j]));
  std::vector<xreal> rhs(k);
  for (int i = 0; i < k; ++i) rhs[i] = xreal(f[i]);
  if (!detail::solve_gauss(std::move(m), rhs, 1))
    throw SingularSystemError(
        "estimate_derivative: sine system is singular; change shifts or pseudo-gaps",
        std::numeric_limits<double>::infinity());
  RVector r(k);
  for (int i = 0; i < k; ++i) r[i] = static_cast<double>(rhs[i]);
  return r;
}

}  // namespace

DerivativeResult estimate_derivative(const ExpectationFn& f, double x, const ShiftRuleSpec& spec) {
  validate(spec);
  const Eigen::Index k = spec.gaps.size();

  DerivativeResult result;
  result.f_plus.resize(k);
  result.f_minus.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    ShotModel plus = spec.shot_model;
    ShotModel minus = spec.shot_model;
    plus.seed = detail::derive_seed(spec.shot_model.seed, static_cast<std::uint64_t>(i), 0);
    minus.seed = detail::derive_seed(spec.shot_model.seed, static_cast<std::uint64_t>(i), 1);
    result.f_plus[i] = f(x + spec.shifts[i], plus);
    result.f_minus[i] = f(x - spec.shifts[i], minus);
  }

  result.r_values = solve_shift_system(spec.gaps, spec.shifts, result.f_plus - result.f_minus);
  result.estimate = spec.gaps.dot(result.r_values);
  result.expectation_calls = 2 * static_cast<std::uint64_t>(k);
  return result;
}

DerivativeResult psr_single_gap(const ExpectationFn& f, double x, double gap, double shift,
                                const ShotModel& shots) {
  if (!(gap > 0.0)) throw std::invalid_argument("psr_single_gap: gap must be positive");
  if (!(shift > 0.0) || !(shift < 2.0 * std::numbers::pi / gap))
    throw std::invalid_argument("psr_single_gap: shift must lie in (0, 2*pi/gap)");
  const double denom = 4.0 * std::sin(0.5 * shift * gap);
  if (denom == 0.0)
    throw std::invalid_argument("psr_single_gap: sin(shift * gap / 2) vanishes");

  ShiftRuleSpec spec;
  spec.kind = RuleKind::Psr;
  spec.gaps = RVector::Constant(1, gap);
  spec.shifts = RVector::Constant(1, shift);
  spec.shot_model = shots;
  return estimate_derivative(f, x, spec);
}

std::uint64_t count_full_gpsr_cost(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 31)
    throw std::invalid_argument("count_full_gpsr_cost: unsupported qubit count");
  const std::uint64_t dim = std::uint64_t(1) << n_qubits;
  return dim * (dim - 1);  // 2 * S_max with S_max = dim (dim - 1) / 2
}

namespace {

// L1 norm of the derivative functional w solving M^T w = gaps; the factor
// by which roundoff in the measured f values reaches the estimate.
double functional_amplification(const RVector& gaps, const RVector& shifts) {
  using detail::xreal;
  const int k = static_cast<int>(gaps.size());
  detail::XMatrix mt(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      mt(i, j) = xreal(4) * detail::xsin(xreal(0.5) * xreal(shifts[j]) * xreal(gaps[i]));
  std::vector<xreal> w(k);
  for (int i = 0; i < k; ++i) w[i] = xreal(gaps[i]);
  if (!detail::solve_gauss(std::move(mt), w, 1)) return std::numeric_limits<double>::infinity();
  xreal norm(0);
  for (int i = 0; i < k; ++i) norm += detail::xabs(w[i]);
  return static_cast<double>(norm);
}

// Equidistant grid d_i = i * extent / (K + 1). The base extent gives the
// K sample points one average gap-spacing period each (2 pi K / gap_max);
// among doublings of it, pick the one with the smallest derivative noise
// amplification, charging wide windows for the phase roundoff their large
// arguments cost.
RVector resolution_matched_shifts(const RVector& gaps) {
  const Eigen::Index k = gaps.size();
  const double gap_max = gaps[k - 1];

  auto grid = [&](double extent) {
    RVector shifts(k);
    for (Eigen::Index i = 0; i < k; ++i)
      shifts[i] = extent * static_cast<double>(i + 1) / static_cast<double>(k + 1);
    return shifts;
  };

  double extent = 2.0 * std::numbers::pi * static_cast<double>(k) / gap_max;
  RVector best = grid(extent);
  RVector best_valid;
  double best_cond = std::numeric_limits<double>::infinity();
  double best_score = std::numeric_limits<double>::infinity();
  // The extended-precision refinement is cubic in K; past a few hundred
  // gaps the condition estimate alone has to pick the grid.
  const bool refine = k <= 200;
  for (int attempt = 0; attempt < 14; ++attempt) {
    const RVector shifts = grid(extent);
    const double cond = condition_estimate(build_shift_matrix(gaps, shifts));
    if (cond < best_cond) {
      best_cond = cond;
      best = shifts;
    }
    if (!refine && cond < 1e8) return shifts;
    // Among grids inside the validity bound, pick the lowest-noise one.
    if (refine && cond < 1e11) {
      const double score =
          functional_amplification(gaps, shifts) * (1.0 + 0.01 * extent * gap_max);
      if (score < best_score) {
        best_score = score;
        best_valid = shifts;
      }
    }
    extent *= 2.0;
  }
  return best_valid.size() > 0 ? best_valid : best;
}

}  // namespace

RVector default_agpsr_shifts(const RVector& pseudo_gaps) {
  const Eigen::Index k = pseudo_gaps.size();
  if (k < 1) throw std::invalid_argument("default_agpsr_shifts: empty pseudo-gap list");
  const double gamma_max = pseudo_gaps[k - 1];
  constexpr double lo = std::numbers::pi / 4.0;
  constexpr double hi = std::numbers::pi / 2.0;
  RVector shifts(k);
  if (k == 1) {
    shifts[0] = 0.5 * (lo + hi) / gamma_max;
    return shifts;
  }
  for (Eigen::Index i = 0; i < k; ++i)
    shifts[i] = (lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1)) / gamma_max;
  // The narrow window turns numerically singular as K grows; switch to the
  // resolution-matched grid once the condition estimate nears the validity
  // bound.
  if (condition_estimate(build_shift_matrix(pseudo_gaps, shifts)) < 1e11) return shifts;
  return resolution_matched_shifts(pseudo_gaps);
}

RVector default_gpsr_shifts(const RVector& gaps) {
  if (gaps.size() < 1) throw std::invalid_argument("default_gpsr_shifts: empty gap list");
  return resolution_matched_shifts(gaps);
}

ShiftRuleSpec make_gpsr_spec(const GapSet& gaps, ShotModel shots) {
  if (gaps.count() == 0)
    throw std::invalid_argument("make_gpsr_spec: generator has no spectral gaps");
  ShiftRuleSpec spec;
  spec.kind = RuleKind::Gpsr;
  spec.gaps = gaps.gaps;
  spec.shifts = default_gpsr_shifts(gaps.gaps);
  spec.shot_model = shots;
  return spec;
}

ShiftRuleSpec make_agpsr_spec(const RVector& pseudo_gaps, ShotModel shots) {
  ShiftRuleSpec spec;
  spec.kind = RuleKind::Agpsr;
  spec.gaps = pseudo_gaps;
  spec.shifts = default_agpsr_shifts(pseudo_gaps);
  spec.shot_model = shots;
  return spec;
}

}  // namespace agpsr
