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
 * Dense complex linear algebra foundation: Hermitian eigendecomposition,
 * pivoted linear solves, determinants and inverses. Everything downstream
 * (spectral gaps, shift rules, variance optimization) consumes these.
 */
#pragma once

#include <stdexcept>
#include <string>

#include "agpsr/types.hpp"

namespace agpsr {

/// Tolerances shared across the numeric kernels.
struct NumericsConfig {
  double hermiticity_tol = 1e-12;   // max |M - M^dagger| entry, relative to scale
  double pivot_rel_tol = 1e-13;     // pivot below this times the matrix scale -> singular
  double max_condition = 1e12;      // shift-rule specs reject matrices beyond this
};

/// Thrown when a linear system is singular or too close to it to trust.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// Spectrum of a Hermitian matrix: ascending eigenvalues, orthonormal
/// eigenvector columns.
struct EigenDecomposition {
  RVector eigenvalues;
  CMatrix eigenvectors;

  Eigen::Index dim() const { return eigenvalues.size(); }
};

bool is_hermitian(const CMatrix& m, double tol = 1e-12);

/// Full eigendecomposition of a Hermitian matrix. Rejects non-Hermitian
/// input; reconstruction satisfies |M - V diag(l) V^dagger|_max <= 1e-10 |M|_max.
EigenDecomposition hermitian_eig(const CMatrix& m, const NumericsConfig& cfg = {});

/// Solve a x = b by LU with row pivoting. Near-singular systems raise
/// SingularSystemError carrying a condition estimate.
RVector solve_linear(const RMatrix& a, const RVector& b, const NumericsConfig& cfg = {});

/// Sign-correct determinant via pivoted elimination; 0 for singular input.
double determinant(const RMatrix& a);

RMatrix invert(const RMatrix& a, const NumericsConfig& cfg = {});

/// 1-norm condition estimate (1 / rcond from the LU factorization).
double condition_estimate(const RMatrix& a);

}  // namespace agpsr
