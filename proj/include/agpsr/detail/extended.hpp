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
 * Extended-precision scalar and a small pivoted Gaussian solver.
 *
 * Shift-rule matrices M_ij = 4 sin(delta_i gap_j / 2) become severely
 * ill-conditioned for small shifts or clustered gaps, so the solves behind
 * the derivative engines run at extended precision internally while all
 * public interfaces stay in double.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#if defined(AGPSR_HAVE_FLOAT128)
#include <quadmath.h>
#endif

namespace agpsr::detail {

#if defined(AGPSR_HAVE_FLOAT128)
using xreal = __float128;
inline xreal xsin(xreal v) { return sinq(v); }
inline xreal xabs(xreal v) { return fabsq(v); }
#else
using xreal = long double;
inline xreal xsin(xreal v) { return std::sin(v); }
inline xreal xabs(xreal v) { return std::fabs(v); }
#endif

/// Dense row-major matrix of extended-precision scalars.
struct XMatrix {
  int n = 0;
  std::vector<xreal> a;  // n * n, row-major

  explicit XMatrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, xreal(0)) {}
  xreal& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  xreal operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// In-place LU solve with partial pivoting, nrhs right-hand sides stored
/// column-contiguous in `b`. Returns false when a pivot collapses to zero.
inline bool solve_gauss(XMatrix m, std::vector<xreal>& b, int nrhs) {
  const int n = m.n;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    xreal best = xabs(m(col, col));
    for (int r = col + 1; r < n; ++r) {
      const xreal v = xabs(m(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == xreal(0)) return false;
    if (pivot != col) {
      for (int c = col; c < n; ++c) std::swap(m(pivot, c), m(col, c));
      for (int k = 0; k < nrhs; ++k)
        std::swap(b[static_cast<std::size_t>(k) * n + pivot], b[static_cast<std::size_t>(k) * n + col]);
    }
    const xreal inv = xreal(1) / m(col, col);
    for (int r = col + 1; r < n; ++r) {
      const xreal factor = m(r, col) * inv;
      if (factor == xreal(0)) continue;
      m(r, col) = xreal(0);
      for (int c = col + 1; c < n; ++c) m(r, c) -= factor * m(col, c);
      for (int k = 0; k < nrhs; ++k)
        b[static_cast<std::size_t>(k) * n + r] -= factor * b[static_cast<std::size_t>(k) * n + col];
    }
  }
  for (int k = 0; k < nrhs; ++k) {
    xreal* rhs = b.data() + static_cast<std::size_t>(k) * n;
    for (int row = n - 1; row >= 0; --row) {
      xreal sum = rhs[row];
      for (int c = row + 1; c < n; ++c) sum -= m(row, c) * rhs[c];
      rhs[row] = sum / m(row, row);
    }
  }
  return true;
}

/// Determinant via the same pivoted elimination.
inline xreal determinant_gauss(XMatrix m) {
  const int n = m.n;
  xreal det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    xreal best = xabs(m(col, col));
    for (int r = col + 1; r < n; ++r) {
      const xreal v = xabs(m(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == xreal(0)) return xreal(0);
    if (pivot != col) {
      for (int c = col; c < n; ++c) std::swap(m(pivot, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    const xreal inv = xreal(1) / m(col, col);
    for (int r = col + 1; r < n; ++r) {
      const xreal factor = m(r, col) * inv;
      if (factor == xreal(0)) continue;
      for (int c = col + 1; c < n; ++c) m(r, c) -= factor * m(col, c);
    }
  }
  return det;
}

}  // namespace agpsr::detail
