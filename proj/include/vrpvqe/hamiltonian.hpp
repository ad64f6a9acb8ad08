// Copyright 2026 The vrpvqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Diagonal cost Hamiltonian
//
//   H = -sum_{i<j} J_ij Z_i Z_j - sum_i h_i Z_i + d
//
// obtained by substituting s_i -> Z_i in the Ising form. Spin s_i = +1 is
// the Z eigenvalue of |0>, so qubit q in state |0> means x_q = 1 and state
// |1> means x_q = 0: basis index b encodes the assignment whose bits are
// the complement of b's bits (qubit q = bit q of b = variable q).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vrpvqe/error.hpp"
#include "vrpvqe/problem.hpp"
#include "vrpvqe/state.hpp"

namespace vrpvqe {

struct ZZTerm {
  std::size_t i = 0, j = 0;
  double coeff = 0.0;
};

struct ZTerm {
  std::size_t i = 0;
  double coeff = 0.0;
};

/// sum coeff Z_i Z_j + sum coeff Z_i + constant.
struct PauliZPolynomial {
  std::size_t num_qubits = 0;
  std::vector<ZZTerm> quadratic_terms;  // i < j, ascending, unique
  std::vector<ZTerm> linear_terms;      // ascending, unique
  double constant = 0.0;

  /// Energy of computational basis state |index>.
  double basis_energy(std::uint64_t index) const {
    auto z = [index](std::size_t q) { return ((index >> q) & 1U) ? -1.0 : 1.0; };
    double e = constant;
    for (const auto& t : linear_terms) e += t.coeff * z(t.i);
    for (const auto& t : quadratic_terms) e += t.coeff * z(t.i) * z(t.j);
    return e;
  }

  /// All 2^num_qubits basis energies.
  std::vector<double> diagonal() const {
    const std::size_t dim = std::size_t{1} << num_qubits;
    std::vector<double> diag(dim);
    for (std::size_t b = 0; b < dim; ++b) {
      double e = constant;
      for (const auto& t : linear_terms) e += ((b >> t.i) & 1U) ? -t.coeff : t.coeff;
      for (const auto& t : quadratic_terms) e += (((b >> t.i) ^ (b >> t.j)) & 1U) ? -t.coeff : t.coeff;
      diag[b] = e;
    }
    return diag;
  }
};

/// Assignment encoded by basis state |index> over m qubits.
inline Assignment assignment_from_basis(std::uint64_t index, std::size_t m) {
  std::vector<std::uint8_t> bits(m);
  for (std::size_t q = 0; q < m; ++q) bits[q] = ((index >> q) & 1U) ? 0 : 1;
  return Assignment(std::move(bits));
}

inline std::uint64_t basis_index_of(const Assignment& x) {
  std::uint64_t index = 0;
  for (std::size_t q = 0; q < x.size(); ++q)
    if (!x[q]) index |= std::uint64_t{1} << q;
  return index;
}

inline PauliZPolynomial from_ising(const IsingForm& ising) {
  PauliZPolynomial poly;
  poly.num_qubits = ising.dim;
  poly.constant = ising.d;
  const auto m = static_cast<Eigen::Index>(ising.dim);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      if (ising.j(i, j) != 0.0)
        poly.quadratic_terms.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), -ising.j(i, j)});
  for (Eigen::Index i = 0; i < m; ++i)
    if (ising.h[i] != 0.0) poly.linear_terms.push_back({static_cast<std::size_t>(i), -ising.h[i]});
  return poly;
}

/// sum_x p(x) E(x) for a precomputed diagonal.
inline double expectation(const std::vector<double>& diagonal, const QuantumState& state) {
  if (diagonal.size() != static_cast<std::size_t>(state.dimension()))
    fail(ErrorKind::InvalidArgument, "observable covers " + std::to_string(diagonal.size()) +
                                         " basis states, state has " + std::to_string(state.dimension()));
  const double tr = state.trace();
  if (std::abs(tr - 1.0) > 1e-6) fail(ErrorKind::Numerical, "state is not normalized (trace " + std::to_string(tr) + ")");
  double e = 0.0;
  if (state.is_density()) {
    const auto& rho = state.rho();
    for (Eigen::Index i = 0; i < rho.rows(); ++i) e += rho(i, i).real() * diagonal[static_cast<std::size_t>(i)];
  } else {
    const auto& psi = state.amplitudes();
    for (Eigen::Index i = 0; i < psi.size(); ++i) e += std::norm(psi[i]) * diagonal[static_cast<std::size_t>(i)];
  }
  return e;
}

inline double expectation(const PauliZPolynomial& h, const QuantumState& state) {
  if (h.num_qubits != state.num_qubits())
    fail(ErrorKind::InvalidArgument, "Hamiltonian acts on " + std::to_string(h.num_qubits) + " qubits, state has " +
                                         std::to_string(state.num_qubits()));
  return expectation(h.diagonal(), state);
}

}  // namespace vrpvqe
