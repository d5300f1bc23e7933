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
#include "agpsr/variance_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "agpsr/error_analysis.hpp"

namespace agpsr {

double g_objective(const RVector& gaps, const RVector& shifts) {
  if (gaps.size() != shifts.size() || gaps.size() < 1)
    throw std::invalid_argument("g_objective: gaps and shifts must match and be non-empty");
  try {
    const RMatrix a = invert(build_shift_matrix(gaps, shifts));
    double g = 0.0;
    for (Eigen::Index s = 0; s < gaps.size(); ++s)
      g += gaps[s] * gaps[s] * a.row(s).squaredNorm();
    return g;
  } catch (const SingularSystemError&) {
    return std::numeric_limits<double>::infinity();
  }
}

ShiftBounds default_shift_bounds(const RVector& gaps) {
  if (gaps.size() < 1) throw std::invalid_argument("default_shift_bounds: empty gap list");
  return ShiftBounds{0.01, std::numbers::pi / gaps[gaps.size() - 1]};
}

namespace {

// Clamp into bounds, sort ascending, and spread exact collisions so the
// sine system stays nonsingular.
RVector repair_shifts(RVector shifts, const ShiftBounds& bounds) {
  for (Eigen::Index i = 0; i < shifts.size(); ++i)
    shifts[i] = std::clamp(shifts[i], bounds.lo, bounds.hi);
  std::sort(shifts.begin(), shifts.end());
  const double nudge = 1e-9 * (bounds.hi - bounds.lo);
  for (Eigen::Index i = 1; i < shifts.size(); ++i)
    if (shifts[i] <= shifts[i - 1]) shifts[i] = shifts[i - 1] + nudge;
  return shifts;
}

}  // namespace

ShiftOptimizationReport optimize_shifts(const RVector& gaps, const RVector& initial_shifts,
                                        const ShiftBounds& bounds) {
  if (!(bounds.lo > 0.0) || !(bounds.hi > bounds.lo))
    throw std::invalid_argument("optimize_shifts: bounds must satisfy 0 < lo < hi");
  const int n = static_cast<int>(initial_shifts.size());
  if (n < 1 || gaps.size() != n)
    throw std::invalid_argument("optimize_shifts: gaps and shifts must match and be non-empty");

  auto objective = [&](const RVector& point) {
    return g_objective(gaps, repair_shifts(point, bounds));
  };

  // Nelder-Mead with standard coefficients; vertex 0 starts at the caller's
  // shifts so the best value can only improve on it.
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  const int max_iterations = 400 * n;

  std::vector<RVector> simplex(n + 1, repair_shifts(initial_shifts, bounds));
  for (int i = 1; i <= n; ++i) {
    const double h = std::max(0.05 * (bounds.hi - bounds.lo), 1e-4);
    double moved = std::clamp(simplex[i][i - 1] + h, bounds.lo, bounds.hi);
    if (moved == simplex[i][i - 1])  // at the upper bound: perturb downward
      moved = std::clamp(simplex[i][i - 1] - h, bounds.lo, bounds.hi);
    simplex[i][i - 1] = moved;
  }
  std::vector<double> value(n + 1);
  for (int i = 0; i <= n; ++i) value[i] = objective(simplex[i]);

  ShiftOptimizationReport report;
  report.initial_shifts = repair_shifts(initial_shifts, bounds);
  report.initial_g = value[0];

  auto order = [&]() {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return value[a] < value[b]; });
    std::vector<RVector> s2(n + 1);
    std::vector<double> v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      s2[i] = simplex[idx[i]];
      v2[i] = value[idx[i]];
    }
    simplex.swap(s2);
    value.swap(v2);
  };

  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    order();
    if (std::isfinite(value[0]) &&
        value[n] - value[0] <= 1e-12 * (1.0 + std::abs(value[0])))
      break;

    RVector centroid = RVector::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[i];
    centroid /= n;

    const RVector reflected = centroid + kReflect * (centroid - simplex[n]);
    const double f_reflected = objective(reflected);

    if (f_reflected < value[0]) {
      const RVector expanded = centroid + kExpand * (reflected - centroid);
      const double f_expanded = objective(expanded);
      if (f_expanded < f_reflected) {
        simplex[n] = expanded;
        value[n] = f_expanded;
      } else {
        simplex[n] = reflected;
        value[n] = f_reflected;
      }
    } else if (f_reflected < value[n - 1]) {
      simplex[n] = reflected;
      value[n] = f_reflected;
    } else {
      const bool outside = f_reflected < value[n];
      const RVector contracted =
          outside ? RVector(centroid + kContract * (reflected - centroid))
                  : RVector(centroid + kContract * (simplex[n] - centroid));
      const double f_contracted = objective(contracted);
      if (f_contracted < (outside ? f_reflected : value[n])) {
        simplex[n] = contracted;
        value[n] = f_contracted;
      } else {
        for (int i = 1; i <= n; ++i) {
          simplex[i] = simplex[0] + kShrink * (simplex[i] - simplex[0]);
          value[i] = objective(simplex[i]);
        }
      }
    }
  }
  order();

  report.optimal_shifts = repair_shifts(simplex[0], bounds);
  report.optimal_g = value[0];
  report.iterations = iter;
  report.converged = std::isfinite(report.optimal_g) && iter < max_iterations;

  // Monotone acceptance: never hand back something worse than the input.
  if (!(report.optimal_g <= report.initial_g)) {
    report.optimal_shifts = report.initial_shifts;
    report.optimal_g = report.initial_g;
  }
  return report;
}

VariancePrediction predict_variance(const ShiftRuleSpec& spec, double sigma0_sq) {
  if (!(sigma0_sq >= 0.0)) throw std::invalid_argument("predict_variance: sigma0_sq < 0");

  VariancePrediction out;
  out.sigma0_sq = sigma0_sq;
  out.g_value = g_objective(spec.gaps, spec.shifts);
  if (spec.shot_model.is_exact()) {
    out.n_shots = 0;
    out.sigma_d_sq = 0.0;
    return out;
  }
  out.n_shots = *spec.shot_model.shots;
  out.sigma_d_sq = 2.0 * sigma0_sq / static_cast<double>(out.n_shots) * out.g_value;
  return out;
}

ShiftRuleSpec variance_optimized_spec(const Generator& g, int k, double step_a,
                                      const ShiftBounds& bounds, ShotModel shots) {
  if (k < 1) throw std::invalid_argument("variance_optimized_spec: K must be >= 1");
  if (!(step_a > 0.0)) throw std::invalid_argument("variance_optimized_spec: step_a must be > 0");

  const GapSet true_gaps = unique_gaps(g.eig);
  if (true_gaps.count() == 0)
    throw std::invalid_argument("variance_optimized_spec: degenerate generator spectrum");

  // Stage 1: sweep the pseudo-gap step around step_a, scored against the
  // true gap set with the default shifts for each candidate.
  double best_step = step_a;
  double best_score = std::numeric_limits<double>::infinity();
  for (const double factor : {0.5, 0.75, 1.0, 1.25, 1.5}) {
    const double a = step_a * factor;
    const RVector gammas = pseudo_gaps(PseudoGapConfig{k, UniformStep{a}, std::nullopt});
    const double score = score_pseudo_gaps(true_gaps, gammas, default_agpsr_shifts(gammas));
    if (score < best_score) {
      best_score = score;
      best_step = a;
    }
  }
  RVector gammas = pseudo_gaps(PseudoGapConfig{k, UniformStep{best_step}, std::nullopt});

  // If the sweep landed on the true gaps themselves, the rule is exact.
  bool exact_gaps = k == true_gaps.count();
  if (exact_gaps)
    for (int i = 0; i < k; ++i)
      if (std::abs(gammas[i] - true_gaps.gaps[i]) > 1e-9 * true_gaps.gaps[i]) exact_gaps = false;
  if (exact_gaps) gammas = true_gaps.gaps;

  // Stages 2-3: a = M^{-1} lives inside g_objective; minimize over shifts.
  const auto report = optimize_shifts(gammas, default_agpsr_shifts(gammas), bounds);

  ShiftRuleSpec spec;
  spec.kind = exact_gaps ? RuleKind::Gpsr : RuleKind::Agpsr;
  spec.gaps = gammas;
  spec.shifts = report.optimal_shifts;
  spec.shot_model = shots;
  validate(spec);
  return spec;
}

}  // namespace agpsr
