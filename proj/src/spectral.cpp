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
#include "agpsr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace agpsr {

GapSet unique_gaps(const EigenDecomposition& eig, double tol) {
  const Eigen::Index n = eig.eigenvalues.size();
  GapSet out;
  if (n < 2) {
    out.degenerate = true;
    return out;
  }

  const double spread = eig.eigenvalues[n - 1] - eig.eigenvalues[0];
  if (tol <= 0.0) tol = 1e-9 * spread;
  if (spread <= tol) {
    out.degenerate = true;
    return out;
  }

  std::vector<double> diffs;
  diffs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      diffs.push_back(std::abs(eig.eigenvalues[j] - eig.eigenvalues[i]));
  std::sort(diffs.begin(), diffs.end());

  // Cluster consecutive differences within tol; zero-width gaps (exactly
  // degenerate eigenvalue pairs) are dropped since gaps must be positive.
  std::vector<double> gaps;
  std::vector<int> mult;
  std::size_t i = 0;
  while (i < diffs.size() && diffs[i] <= tol) ++i;
  while (i < diffs.size()) {
    double sum = diffs[i];
    int count = 1;
    std::size_t j = i + 1;
    while (j < diffs.size() && diffs[j] - diffs[i] <= tol) {
      sum += diffs[j];
      ++count;
      ++j;
    }
    gaps.push_back(sum / count);
    mult.push_back(count);
    i = j;
  }

  out.gaps = Eigen::Map<RVector>(gaps.data(), static_cast<Eigen::Index>(gaps.size()));
  out.multiplicities = std::move(mult);
  out.degenerate = out.gaps.size() == 0;
  return out;
}

double max_gap(const EigenDecomposition& eig) {
  if (eig.eigenvalues.size() < 2)
    throw std::invalid_argument("max_gap: need at least two eigenvalues");
  return eig.eigenvalues[eig.eigenvalues.size() - 1] - eig.eigenvalues[0];
}

namespace {

void check_valid_gammas(const RVector& gammas, const std::optional<double>& delta_max) {
  if (gammas.size() == 0) throw std::invalid_argument("pseudo_gaps: empty gamma list");
  for (Eigen::Index i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0.0))
      throw std::invalid_argument("pseudo_gaps: gammas must be strictly positive");
    if (i > 0 && !(gammas[i] > gammas[i - 1]))
      throw std::invalid_argument("pseudo_gaps: gammas must be strictly ascending");
    if (delta_max && gammas[i] > *delta_max)
      throw std::invalid_argument("pseudo_gaps: gamma exceeds delta_max");
  }
}

}  // namespace

RVector pseudo_gaps(const PseudoGapConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("pseudo_gaps: K must be at least 1");

  RVector gammas(cfg.k);
  if (const auto* uniform = std::get_if<UniformStep>(&cfg.strategy)) {
    if (!(uniform->a > 0.0)) throw std::invalid_argument("pseudo_gaps: step must be positive");
    for (int k = 0; k < cfg.k; ++k) gammas[k] = (k + 1) * uniform->a;
  } else if (const auto* eps = std::get_if<EpsilonInteger>(&cfg.strategy)) {
    if (!(eps->epsilon > 0.0) || (cfg.k > 1 && eps->epsilon >= 1.0))
      throw std::invalid_argument("pseudo_gaps: epsilon must lie in (0, 1)");
    gammas[0] = eps->epsilon;
    for (int k = 1; k < cfg.k; ++k) gammas[k] = k;
  } else {
    const auto& list = std::get<ExplicitGaps>(cfg.strategy).gammas;
    if (list.size() != cfg.k)
      throw std::invalid_argument("pseudo_gaps: explicit list length differs from K");
    gammas = list;
  }

  check_valid_gammas(gammas, cfg.delta_max);
  return gammas;
}

GapHistogram gap_histogram(const GapSet& gaps, int bins) {
  if (gaps.count() == 0) throw std::invalid_argument("gap_histogram: empty gap set");
  if (bins < 1) throw std::invalid_argument("gap_histogram: need at least one bin");

  const double upper = gaps.gaps[gaps.gaps.size() - 1];
  const double width = upper / bins;

  GapHistogram hist;
  hist.edges = RVector::LinSpaced(bins + 1, 0.0, upper);
  hist.mass = RVector::Zero(bins);

  double total = 0.0;
  for (int i = 0; i < gaps.count(); ++i) total += gaps.multiplicities[i];
  for (int i = 0; i < gaps.count(); ++i) {
    // Right-inclusive bins (k*w, (k+1)*w] so that a gap at the upper edge
    // lands in the last bin.
    int bin = static_cast<int>(std::ceil(gaps.gaps[i] / width)) - 1;
    bin = std::clamp(bin, 0, bins - 1);
    hist.mass[bin] += gaps.multiplicities[i] / total;
  }
  return hist;
}

}  // namespace agpsr
