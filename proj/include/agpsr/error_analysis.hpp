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
 * Gap-approximation error analysis for the approximate shift rule.
 *
 * A K-equation rule with pseudo-gaps {gamma_k} effectively replaces every
 * true gap D by xi(D) = sum_k gamma_k eta_k(D), where eta solves
 * sin(d_i D / 2) = sum_k sin(d_i gamma_k / 2) eta_k. The error function
 * Q_K(D) = xi(D) - D vanishes at every pseudo-gap and is O(alpha^{2K}) in
 * the shift scale; the low-order closed forms are kept as reference
 * constants and verified by regression.
 */
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "agpsr/spectral.hpp"
#include "agpsr/types.hpp"

namespace agpsr {

/// Effective gap xi(delta_true) via the eta linear system (solved at
/// extended precision; near cancellation Q_K sits many digits below the
/// gap scale).
double xi(double delta_true, const RVector& gammas, const RVector& shifts);

/// Q_K(delta_true) = xi(delta_true) - delta_true.
double q_error(double delta_true, const RVector& gammas, const RVector& shifts);

/// Determinant-ratio evaluation of xi (Cramer route); kept as a cross-check
/// against the linear-solve path, K <= 6 or so.
double xi_cramer(double delta_true, const RVector& gammas, const RVector& shifts);

struct ErrorFunctionCurve {
  int k = 0;
  RVector pseudo_gaps;
  RVector shifts;
  std::vector<std::pair<double, double>> samples;  // (delta, Q_K(delta))
};

ErrorFunctionCurve sample_error_curve(const RVector& gammas, const RVector& shifts,
                                      const RVector& deltas);

/// Leading error term of Q_K for K in {1, 2, 3}, with the shift scale
/// folded into `shifts`:
///   K=1:  d1^2 D (g1^2 - D^2) / 24
///   K=2:  d1^2 d2^2 D (g1^2 - D^2)(D^2 - g2^2) / 1920
///   K=3:  d1^2 d2^2 d3^2 D (g1^2 - D^2)(g2^2 - D^2)(g3^2 - D^2) / 322560
double leading_error_term(int k, double delta_true, const RVector& gammas, const RVector& shifts);

struct ExpansionTrial {
  double slope = 0.0;          // log|Q_K| vs log alpha regression
  double coeff_rel_err = 0.0;  // |Q_K - leading term| / |leading term| at alpha_ref
};

struct ExpansionOrderReport {
  int k = 0;
  double alpha_ref = 0.0;
  std::vector<ExpansionTrial> trials;
  double mean_slope = 0.0;
  double max_coeff_rel_err = 0.0;
};

/// Random-draw regression of the error order: for each trial, fit the slope
/// of log|Q_K| over alpha in [0.02, 0.2] (expected 2K) and compare Q_K at
/// alpha_ref = 0.02 against the closed-form leading term. K in {1, 2, 3}.
ExpansionOrderReport verify_expansion_orders(int k, int trials, std::uint64_t seed);

/// Aggregate gap-approximation error sum_s mult_s * Q_K(D_s)^2 of a
/// pseudo-gap configuration against a true gap set; lower is better. This
/// is the ranking metric behind the pseudo-gap step sweep.
double score_pseudo_gaps(const GapSet& gaps, const RVector& gammas, const RVector& shifts);

}  // namespace agpsr
