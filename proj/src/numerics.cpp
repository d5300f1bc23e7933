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
#include "agpsr/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <limits>

namespace agpsr {

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

EigenDecomposition hermitian_eig(const CMatrix& m, const NumericsConfig& cfg) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw std::invalid_argument("hermitian_eig: matrix must be square and non-empty");
  if (!is_hermitian(m, cfg.hermiticity_tol))
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian within tolerance");

  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");

  // SelfAdjointEigenSolver already returns ascending eigenvalues.
  return EigenDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

// Shared pivot check for solve/invert.
void require_nonsingular(const Eigen::PartialPivLU<RMatrix>& lu, const RMatrix& a,
                         const NumericsConfig& cfg, const char* op) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < cfg.pivot_rel_tol * scale) {
    const double rc = lu.rcond();
    const double cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    throw SingularSystemError(std::string(op) + ": system is singular or near-singular", cond);
  }
}

}  // namespace

RVector solve_linear(const RMatrix& a, const RVector& b, const NumericsConfig& cfg) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve_linear: matrix must be square");
  if (a.rows() != b.size()) throw std::invalid_argument("solve_linear: dimension mismatch");

  Eigen::PartialPivLU<RMatrix> lu(a);
  require_nonsingular(lu, a, cfg, "solve_linear");
  return lu.solve(b);
}

double determinant(const RMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: matrix must be square");
  if (a.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<RMatrix>(a).determinant();
}

RMatrix invert(const RMatrix& a, const NumericsConfig& cfg) {
  if (a.rows() != a.cols()) throw std::invalid_argument("invert: matrix must be square");

  Eigen::PartialPivLU<RMatrix> lu(a);
  require_nonsingular(lu, a, cfg, "invert");
  return lu.inverse();
}

double condition_estimate(const RMatrix& a) {
  Eigen::PartialPivLU<RMatrix> lu(a);
  const double rc = lu.rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

}  // namespace agpsr
