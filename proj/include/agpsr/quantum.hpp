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
 * Statevector simulation: generators (including the neutral-atom
 * Hamiltonian), unitary evolution exp(-i x G / 2), expectation values of
 * Hermitian cost operators, and finite-shot sampling in the cost operator's
 * eigenbasis.
 */
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "agpsr/numerics.hpp"
#include "agpsr/types.hpp"

namespace agpsr {

/// Pure state on n qubits; qubit 0 owns the most significant bit of the
/// basis index (tensor factors are ordered left to right).
struct QuantumState {
  int n_qubits = 0;
  CVector amplitudes;

  Eigen::Index dim() const { return amplitudes.size(); }
};

QuantumState zero_state(int n_qubits);
QuantumState basis_state(int n_qubits, std::uint64_t index);
/// Haar-like random state: i.i.d. complex normal amplitudes, normalized.
QuantumState random_state(int n_qubits, std::uint64_t seed);

/// Measurement model: nullopt shots means the exact expectation value.
struct ShotModel {
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 0;

  static ShotModel exact() { return ShotModel{std::nullopt, 0}; }
  static ShotModel finite(std::uint64_t n, std::uint64_t seed) { return ShotModel{n, seed}; }
  bool is_exact() const { return !shots.has_value(); }
};

/// Hermitian generator with its cached spectrum. The spectrum feeds both the
/// evolution (diagonalized exponential) and the spectral-gap machinery.
struct Generator {
  CMatrix matrix;
  EigenDecomposition eig;

  Eigen::Index dim() const { return matrix.rows(); }
};

/// Hermitian observable; the cached eigenbasis is the measurement basis for
/// finite-shot sampling.
struct CostOperator {
  CMatrix matrix;
  EigenDecomposition eig;

  Eigen::Index dim() const { return matrix.rows(); }
};

Generator make_generator(CMatrix m, const NumericsConfig& cfg = {});
CostOperator make_cost_operator(CMatrix m, const NumericsConfig& cfg = {});

// Pauli / tensor helpers.
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
CMatrix kron(const CMatrix& a, const CMatrix& b);
/// Embed a single-qubit operator on `qubit` into the n-qubit space.
CMatrix embed_single_qubit(const CMatrix& op, int qubit, int n_qubits);

/// Atom positions plus the van der Waals coefficient; couplings follow
/// J_ij = c6 / r_ij^6 with unit lattice spacing.
struct Lattice {
  std::vector<std::array<double, 2>> positions;
  double c6 = 1.0;
};

Lattice rectangular_lattice(int rows, int cols, double c6);
/// Row-major fill of a 2 x ceil(n/2) grid; the layout used for system-size
/// sweeps (2x3 for six qubits).
Lattice two_row_lattice(int n_qubits, double c6);
RMatrix lattice_couplings(const Lattice& lattice);

/// Neutral-atom generator G = 2 H / Omega for
/// H = sum_i (Omega/2) sigma_x^i + sum_{j<i} J_ij n_i n_j, so that
/// exp(-i t H) = exp(-i (x/2) G) with x = Omega t.
Generator neutral_atom_generator(int n_qubits, double omega, const RMatrix& couplings);
Generator neutral_atom_generator(double omega, const Lattice& lattice);

QuantumState evolve(const Generator& g, double x, const QuantumState& psi0);

double expectation(const Generator& g, const CostOperator& c, double x,
                   const QuantumState& psi0, const ShotModel& shots = ShotModel::exact());

/// Analytic derivative (i/2) <psi(x)| [G, C] |psi(x)> of the expectation
/// function; the independent oracle the shift rules are tested against.
double exact_derivative_oracle(const Generator& g, const CostOperator& c, double x,
                               const QuantumState& psi0);

/// Per-shot variance <C^2> - <C>^2 in the evolved state; the sigma_0^2
/// entering the derivative-variance prediction.
double expectation_variance(const Generator& g, const CostOperator& c, double x,
                            const QuantumState& psi0);

/// f(x) for a fixed (generator, cost, initial state) triple with the
/// eigenbasis projections precomputed; the workhorse behind scans, shift
/// rules and VQE gradients.
class ExpectationEvaluator {
 public:
  ExpectationEvaluator(const Generator& g, const CostOperator& c, const QuantumState& psi0);

  double operator()(double x, const ShotModel& shots) const;
  double exact(double x) const;
  double sampled(double x, std::uint64_t n_shots, std::uint64_t seed) const;
  double derivative_oracle(double x) const;
  double variance(double x) const;

 private:
  /// Amplitudes of the evolved state in the generator eigenbasis.
  CVector phase_rotated(double x) const;

  RVector gen_eigenvalues_;
  CVector psi0_in_gen_basis_;
  CMatrix cost_in_gen_basis_;    // V_G^dagger C V_G
  RVector cost_eigenvalues_;
  CMatrix gen_to_cost_basis_;    // V_C^dagger V_G
};

}  // namespace agpsr
