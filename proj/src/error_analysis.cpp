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
#include "agpsr/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "agpsr/detail/extended.hpp"
#include "agpsr/detail/rng.hpp"
#include "agpsr/numerics.hpp"

namespace agpsr {

namespace {

using detail::xreal;

void check_config(const RVector& gammas, const RVector& shifts) {
  if (gammas.size() < 1 || gammas.size() != shifts.size())
    throw std::invalid_argument("error analysis: gammas and shifts must match and be non-empty");
  for (Eigen::Index i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0.0) || !(shifts[i] > 0.0))
      throw std::invalid_argument("error analysis: gammas and shifts must be positive");
    if (i > 0 && (!(gammas[i] > gammas[i - 1]) || !(shifts[i] > shifts[i - 1])))
      throw std::invalid_argument("error analysis: gammas and shifts must be strictly ascending");
  }
}

// xi as extended-precision value; both public routes round at the end.
xreal xi_extended(double delta_true, const RVector& gammas, const RVector& shifts) {
  const int k = static_cast<int>(gammas.size());
  detail::XMatrix m(k);
  std::vector<xreal> rhs(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j)
      m(i, j) = detail::xsin(xreal(0.5) * xreal(shifts[i]) * xreal(gammas[j]));
    rhs[i] = detail::xsin(xreal(0.5) * xreal(shifts[i]) * xreal(delta_true));
  }
  if (!detail::solve_gauss(std::move(m), rhs, 1))
    throw SingularSystemError("xi: eta system is singular; change shifts or pseudo-gaps",
                              std::numeric_limits<double>::infinity());
  xreal value(0);
  for (int j = 0; j < k; ++j) value += xreal(gammas[j]) * rhs[j];
  return value;
}

}  // namespace

double xi(double delta_true, const RVector& gammas, const RVector& shifts) {
  check_config(gammas, shifts);
  return static_cast<double>(xi_extended(delta_true, gammas, shifts));
}

double q_error(double delta_true, const RVector& gammas, const RVector& shifts) {
  check_config(gammas, shifts);
  return static_cast<double>(xi_extended(delta_true, gammas, shifts) - xreal(delta_true));
}

double xi_cramer(double delta_true, const RVector& gammas, const RVector& shifts) {
  check_config(gammas, shifts);
  const int k = static_cast<int>(gammas.size());

  detail::XMatrix m(k);
  std::vector<xreal> rhs(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j)
      m(i, j) = detail::xsin(xreal(0.5) * xreal(shifts[i]) * xreal(gammas[j]));
    rhs[i] = detail::xsin(xreal(0.5) * xreal(shifts[i]) * xreal(delta_true));
  }

  const xreal det_m = detail::determinant_gauss(m);
  if (det_m == xreal(0))
    throw SingularSystemError("xi_cramer: singular pseudo-gap system",
                              std::numeric_limits<double>::infinity());

  xreal value(0);
  for (int col = 0; col < k; ++col) {
    detail::XMatrix a = m;
    for (int i = 0; i < k; ++i) a(i, col) = rhs[i];
    value += xreal(gammas[col]) * detail::determinant_gauss(a) / det_m;
  }
  return static_cast<double>(value);
}

ErrorFunctionCurve sample_error_curve(const RVector& gammas, const RVector& shifts,
                                      const RVector& deltas) {
  check_config(gammas, shifts);
  ErrorFunctionCurve curve;
  curve.k = static_cast<int>(gammas.size());
  curve.pseudo_gaps = gammas;
  curve.shifts = shifts;
  curve.samples.reserve(static_cast<std::size_t>(deltas.size()));
  for (Eigen::Index i = 0; i < deltas.size(); ++i)
    curve.samples.emplace_back(deltas[i], q_error(deltas[i], gammas, shifts));
  return curve;
}

double leading_error_term(int k, double delta_true, const RVector& gammas,
                          const RVector& shifts) {
  if (gammas.size() != k || shifts.size() != k)
    throw std::invalid_argument("leading_error_term: config length must equal K");
  const double d = delta_true;
  switch (k) {
    case 1: {
      const double d1 = shifts[0], g1 = gammas[0];
      return d1 * d1 * d * (g1 * g1 - d * d) / 24.0;
    }
    case 2: {
      const double d1 = shifts[0], d2 = shifts[1];
      const double g1 = gammas[0], g2 = gammas[1];
      return d1 * d1 * d2 * d2 * d * (g1 * g1 - d * d) * (d * d - g2 * g2) / 1920.0;
    }
    case 3: {
      const double d1 = shifts[0], d2 = shifts[1], d3 = shifts[2];
      const double g1 = gammas[0], g2 = gammas[1], g3 = gammas[2];
      return d1 * d1 * d2 * d2 * d3 * d3 * d * (g1 * g1 - d * d) * (g2 * g2 - d * d) *
             (g3 * g3 - d * d) / 322560.0;
    }
    default:
      throw std::invalid_argument("leading_error_term: closed forms available for K in {1,2,3}");
  }
}

ExpansionOrderReport verify_expansion_orders(int k, int trials, std::uint64_t seed) {
  if (k < 1 || k > 3)
    throw std::invalid_argument("verify_expansion_orders: K must be in {1,2,3}");
  if (trials < 1) throw std::invalid_argument("verify_expansion_orders: need trials >= 1");

  ExpansionOrderReport report;
  report.k = k;
  report.alpha_ref = 0.02;

  std::mt19937_64 rng(seed);
  constexpr double pi = std::numbers::pi;

  for (int trial = 0; trial < trials; ++trial) {
    // Draw ascending gammas, base shifts in [pi/4, pi/2], and a true gap
    // kept away from every gamma so the leading term cannot vanish.
    RVector gammas(k), base_shifts(k);
    double delta_true = 0.0;
    while (true) {
      std::vector<double> g(k);
      for (auto& v : g) v = detail::uniform(rng, 0.5, 3.5);
      std::sort(g.begin(), g.end());
      bool spaced = true;
      for (int i = 1; i < k; ++i)
        if (g[i] - g[i - 1] < 0.3) spaced = false;
      if (!spaced) continue;
      delta_true = detail::uniform(rng, 0.4, 4.0);
      bool clear = true;
      for (const double v : g)
        if (std::abs(v - delta_true) < 0.25) clear = false;
      if (!clear) continue;
      for (int i = 0; i < k; ++i) gammas[i] = g[i];
      break;
    }
    while (true) {
      std::vector<double> d(k);
      for (auto& v : d) v = detail::uniform(rng, pi / 4.0, pi / 2.0);
      std::sort(d.begin(), d.end());
      bool spaced = true;
      for (int i = 1; i < k; ++i)
        if (d[i] - d[i - 1] < 0.05) spaced = false;
      if (!spaced) continue;
      for (int i = 0; i < k; ++i) base_shifts[i] = d[i];
      break;
    }

    // Regression of log|Q_K| against log alpha.
    std::vector<double> xs, ys;
    for (int p = 0; p < 12; ++p) {
      const double alpha = 0.02 * std::pow(10.0, p / 11.0);  // 0.02 .. 0.2
      const double q = q_error(delta_true, gammas, RVector(alpha * base_shifts));
      if (std::abs(q) < 1e-13) continue;  // floating-point floor
      xs.push_back(std::log(alpha));
      ys.push_back(std::log(std::abs(q)));
    }

    ExpansionTrial t;
    if (xs.size() >= 3) {
      const double n = static_cast<double>(xs.size());
      double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
      }
      t.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    const RVector ref_shifts = report.alpha_ref * base_shifts;
    const double q_ref = q_error(delta_true, gammas, ref_shifts);
    const double closed = leading_error_term(k, delta_true, gammas, ref_shifts);
    t.coeff_rel_err = std::abs(q_ref - closed) / std::abs(closed);

    report.trials.push_back(t);
  }

  double slope_sum = 0.0;
  for (const auto& t : report.trials) {
    slope_sum += t.slope;
    report.max_coeff_rel_err = std::max(report.max_coeff_rel_err, t.coeff_rel_err);
  }
  report.mean_slope = slope_sum / static_cast<double>(report.trials.size());
  return report;
}

double score_pseudo_gaps(const GapSet& gaps, const RVector& gammas, const RVector& shifts) {
  check_config(gammas, shifts);
  double score = 0.0;
  for (int s = 0; s < gaps.count(); ++s) {
    const double q = q_error(gaps.gaps[s], gammas, shifts);
    score += gaps.multiplicities[s] * q * q;
  }
  return score;
}

}  // namespace agpsr
