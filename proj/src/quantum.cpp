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
#include "agpsr/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "agpsr/detail/rng.hpp"

namespace agpsr {

namespace {

Eigen::Index dim_of(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 20)
    throw std::invalid_argument("qubit count out of supported range [1, 20]");
  return Eigen::Index(1) << n_qubits;
}

}  // namespace

QuantumState zero_state(int n_qubits) { return basis_state(n_qubits, 0); }

QuantumState basis_state(int n_qubits, std::uint64_t index) {
  const Eigen::Index dim = dim_of(n_qubits);
  if (index >= static_cast<std::uint64_t>(dim))
    throw std::invalid_argument("basis_state: index out of range");
  CVector amps = CVector::Zero(dim);
  amps[static_cast<Eigen::Index>(index)] = Complex(1.0, 0.0);
  return QuantumState{n_qubits, std::move(amps)};
}

QuantumState random_state(int n_qubits, std::uint64_t seed) {
  const Eigen::Index dim = dim_of(n_qubits);
  std::mt19937_64 rng(seed);
  CVector amps(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    amps[i] = Complex(detail::normal01(rng), detail::normal01(rng));
  amps /= amps.norm();
  return QuantumState{n_qubits, std::move(amps)};
}

Generator make_generator(CMatrix m, const NumericsConfig& cfg) {
  auto eig = hermitian_eig(m, cfg);
  return Generator{std::move(m), std::move(eig)};
}

CostOperator make_cost_operator(CMatrix m, const NumericsConfig& cfg) {
  auto eig = hermitian_eig(m, cfg);
  return CostOperator{std::move(m), std::move(eig)};
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix embed_single_qubit(const CMatrix& op, int qubit, int n_qubits) {
  if (op.rows() != 2 || op.cols() != 2)
    throw std::invalid_argument("embed_single_qubit: operator must be 2x2");
  if (qubit < 0 || qubit >= n_qubits) throw std::invalid_argument("embed_single_qubit: bad qubit");
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q)
    out = kron(out, q == qubit ? op : CMatrix::Identity(2, 2));
  return out;
}

Lattice rectangular_lattice(int rows, int cols, double c6) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("rectangular_lattice: bad shape");
  Lattice lattice;
  lattice.c6 = c6;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      lattice.positions.push_back({static_cast<double>(r), static_cast<double>(c)});
  return lattice;
}

Lattice two_row_lattice(int n_qubits, double c6) {
  if (n_qubits < 1) throw std::invalid_argument("two_row_lattice: bad qubit count");
  // Four qubits would fill a 2x2 square whose point-group symmetry
  // degenerates the gap spectrum; a staircase keeps all 2^N (2^N - 1) / 2
  // gaps unique and well separated.
  if (n_qubits == 4) {
    Lattice stairs;
    stairs.c6 = c6;
    stairs.positions = {{0, 0}, {0, 1}, {1, 1}, {1, 2}};
    return stairs;
  }
  Lattice full = rectangular_lattice(2, (n_qubits + 1) / 2, c6);
  full.positions.resize(n_qubits);
  return full;
}

RMatrix lattice_couplings(const Lattice& lattice) {
  const int n = static_cast<int>(lattice.positions.size());
  RMatrix j = RMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double dx = lattice.positions[a][0] - lattice.positions[b][0];
      const double dy = lattice.positions[a][1] - lattice.positions[b][1];
      const double r2 = dx * dx + dy * dy;
      if (r2 <= 0.0) throw std::invalid_argument("lattice_couplings: coincident atoms");
      j(a, b) = j(b, a) = lattice.c6 / (r2 * r2 * r2);
    }
  }
  return j;
}

Generator neutral_atom_generator(int n_qubits, double omega, const RMatrix& couplings) {
  const Eigen::Index dim = dim_of(n_qubits);
  if (omega <= 0.0) throw std::invalid_argument("neutral_atom_generator: omega must be positive");
  if (couplings.rows() != n_qubits || couplings.cols() != n_qubits)
    throw std::invalid_argument("neutral_atom_generator: coupling matrix shape mismatch");
  const double scale = std::max(1.0, couplings.cwiseAbs().maxCoeff());
  if ((couplings - couplings.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("neutral_atom_generator: couplings must be symmetric");
  if (couplings.diagonal().cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("neutral_atom_generator: couplings must have zero diagonal");

  CMatrix g = CMatrix::Zero(dim, dim);
  // Drive: sum_i sigma_x^i (the Omega/2 prefactor cancels in G = 2H/Omega).
  for (Eigen::Index b = 0; b < dim; ++b)
    for (int q = 0; q < n_qubits; ++q)
      g(b ^ (Eigen::Index(1) << (n_qubits - 1 - q)), b) += 1.0;
  // Interactions: (2/Omega) sum_{j<i} J_ij n_i n_j, diagonal in the
  // computational basis with n_i |b> = b_i |b>.
  for (Eigen::Index b = 0; b < dim; ++b) {
    double v = 0.0;
    for (int i = 0; i < n_qubits; ++i) {
      if (!((b >> (n_qubits - 1 - i)) & 1)) continue;
      for (int j = i + 1; j < n_qubits; ++j)
        if ((b >> (n_qubits - 1 - j)) & 1) v += couplings(i, j);
    }
    g(b, b) += 2.0 * v / omega;
  }
  return make_generator(std::move(g));
}

Generator neutral_atom_generator(double omega, const Lattice& lattice) {
  return neutral_atom_generator(static_cast<int>(lattice.positions.size()), omega,
                                lattice_couplings(lattice));
}

QuantumState evolve(const Generator& g, double x, const QuantumState& psi0) {
  if (g.dim() != psi0.dim()) throw std::invalid_argument("evolve: dimension mismatch");
  const CVector projected = g.eig.eigenvectors.adjoint() * psi0.amplitudes;
  CVector rotated(projected.size());
  for (Eigen::Index i = 0; i < projected.size(); ++i) {
    const double phase = -0.5 * x * g.eig.eigenvalues[i];
    rotated[i] = projected[i] * Complex(std::cos(phase), std::sin(phase));
  }
  return QuantumState{psi0.n_qubits, g.eig.eigenvectors * rotated};
}

double expectation(const Generator& g, const CostOperator& c, double x,
                   const QuantumState& psi0, const ShotModel& shots) {
  return ExpectationEvaluator(g, c, psi0)(x, shots);
}

double exact_derivative_oracle(const Generator& g, const CostOperator& c, double x,
                               const QuantumState& psi0) {
  return ExpectationEvaluator(g, c, psi0).derivative_oracle(x);
}

double expectation_variance(const Generator& g, const CostOperator& c, double x,
                            const QuantumState& psi0) {
  return ExpectationEvaluator(g, c, psi0).variance(x);
}

ExpectationEvaluator::ExpectationEvaluator(const Generator& g, const CostOperator& c,
                                           const QuantumState& psi0) {
  if (g.dim() != c.dim() || g.dim() != psi0.dim())
    throw std::invalid_argument("ExpectationEvaluator: dimension mismatch");
  if (std::abs(psi0.amplitudes.squaredNorm() - 1.0) > 1e-10)
    throw std::invalid_argument("ExpectationEvaluator: initial state is not normalized");
  gen_eigenvalues_ = g.eig.eigenvalues;
  psi0_in_gen_basis_ = g.eig.eigenvectors.adjoint() * psi0.amplitudes;
  cost_in_gen_basis_ = g.eig.eigenvectors.adjoint() * c.matrix * g.eig.eigenvectors;
  cost_eigenvalues_ = c.eig.eigenvalues;
  gen_to_cost_basis_ = c.eig.eigenvectors.adjoint() * g.eig.eigenvectors;
}

CVector ExpectationEvaluator::phase_rotated(double x) const {
  CVector out(psi0_in_gen_basis_.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double phase = -0.5 * x * gen_eigenvalues_[i];
    out[i] = psi0_in_gen_basis_[i] * Complex(std::cos(phase), std::sin(phase));
  }
  return out;
}

double ExpectationEvaluator::exact(double x) const {
  const CVector phi = phase_rotated(x);
  return (phi.adjoint() * cost_in_gen_basis_ * phi)(0, 0).real();
}

double ExpectationEvaluator::sampled(double x, std::uint64_t n_shots, std::uint64_t seed) const {
  if (n_shots < 1) throw std::invalid_argument("sampled: need at least one shot");
  const CVector in_cost_basis = gen_to_cost_basis_ * phase_rotated(x);

  // Cumulative distribution over cost eigenstates.
  const Eigen::Index dim = in_cost_basis.size();
  std::vector<double> cdf(dim);
  double total = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    total += std::norm(in_cost_basis[i]);
    cdf[i] = total;
  }

  std::mt19937_64 rng(seed);
  double sum = 0.0;
  for (std::uint64_t s = 0; s < n_shots; ++s) {
    const double u = detail::uniform01(rng) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const Eigen::Index idx = std::min<Eigen::Index>(it - cdf.begin(), dim - 1);
    sum += cost_eigenvalues_[idx];
  }
  return sum / static_cast<double>(n_shots);
}

double ExpectationEvaluator::operator()(double x, const ShotModel& shots) const {
  return shots.is_exact() ? exact(x) : sampled(x, *shots.shots, shots.seed);
}

double ExpectationEvaluator::derivative_oracle(double x) const {
  // (i/2) <psi|[G, C]|psi> reduces to -Im{ (Lambda phi)^dagger (C~ phi) }
  // in the generator eigenbasis.
  const CVector phi = phase_rotated(x);
  const CVector cphi = cost_in_gen_basis_ * phi;
  Complex z(0, 0);
  for (Eigen::Index i = 0; i < phi.size(); ++i)
    z += std::conj(gen_eigenvalues_[i] * phi[i]) * cphi[i];
  return -z.imag();
}

double ExpectationEvaluator::variance(double x) const {
  const CVector in_cost_basis = gen_to_cost_basis_ * phase_rotated(x);
  double mean = 0.0;
  double second = 0.0;
  for (Eigen::Index i = 0; i < in_cost_basis.size(); ++i) {
    const double p = std::norm(in_cost_basis[i]);
    mean += p * cost_eigenvalues_[i];
    second += p * cost_eigenvalues_[i] * cost_eigenvalues_[i];
  }
  return std::max(0.0, second - mean * mean);
}

}  // namespace agpsr
