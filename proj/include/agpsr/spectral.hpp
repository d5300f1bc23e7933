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
 * Spectral gaps of a generator and pseudo-gap selection: unique positive
 * eigenvalue differences with multiplicities, the largest gap, the gap
 * distribution histogram, and the pseudo-gap strategies for the
 * approximate shift rule.
 */
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "agpsr/numerics.hpp"
#include "agpsr/types.hpp"

namespace agpsr {

/// Unique positive spectral gaps, strictly ascending, with the number of
/// eigenvalue pairs merged into each entry.
struct GapSet {
  RVector gaps;
  std::vector<int> multiplicities;
  bool degenerate = false;  // fewer than two distinct eigenvalues

  int count() const { return static_cast<int>(gaps.size()); }
};

/// All pairwise eigenvalue differences, merged within `tol` (default
/// 1e-9 times the spectral spread), ascending.
GapSet unique_gaps(const EigenDecomposition& eig, double tol = 0.0);

/// Largest spectral gap, lambda_max - lambda_min. Zero (degenerate) spectra
/// return 0.
double max_gap(const EigenDecomposition& eig);

// Pseudo-gap selection strategies.
struct UniformStep {
  double a;  // gamma_k = k * a, k = 1..K
};
struct EpsilonInteger {
  double epsilon;  // {eps, 1, 2, ..., K-1}
};
struct ExplicitGaps {
  RVector gammas;  // validated pass-through
};
using PseudoGapStrategy = std::variant<UniformStep, EpsilonInteger, ExplicitGaps>;

struct PseudoGapConfig {
  int k = 1;
  PseudoGapStrategy strategy = UniformStep{1.0};
  std::optional<double> delta_max;  // when set, all gammas must stay below it
};

/// Materialize the pseudo-gap list: strictly positive, strictly ascending,
/// length K. Zero or duplicated values are rejected (they make the shift
/// matrix singular).
RVector pseudo_gaps(const PseudoGapConfig& cfg);

/// Gap distribution over (0, max_gap]: per-bin mass fractions summing to 1,
/// multiplicity-weighted, right-inclusive bins.
struct GapHistogram {
  RVector edges;  // bins + 1 entries, starting at 0
  RVector mass;
};

GapHistogram gap_histogram(const GapSet& gaps, int bins);

}  // namespace agpsr
