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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vrpvqe/error.hpp"

namespace vrpvqe {

using cplx = std::complex<double>;

/// Pure or mixed state over m qubits. Qubit 0 is the least significant bit
/// of the basis index. Density matrices are stored column-major, so the
/// flattened buffer is a 2m-qubit vector whose low m bits index the row.
class QuantumState {
 public:
  static QuantumState zero_statevector(std::size_t qubits) {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dimension_of(qubits));
    amps[0] = 1.0;
    return QuantumState(qubits, std::move(amps));
  }

  static QuantumState zero_density(std::size_t qubits) {
    const auto dim = dimension_of(qubits);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    rho(0, 0) = 1.0;
    return QuantumState(qubits, std::move(rho));
  }

  QuantumState(std::size_t qubits, Eigen::VectorXcd amplitudes) : qubits_(qubits), data_(std::move(amplitudes)) {
    require(std::get<Eigen::VectorXcd>(data_).size() == dimension_of(qubits), "amplitude count must be 2^qubits");
  }

  QuantumState(std::size_t qubits, Eigen::MatrixXcd rho) : qubits_(qubits), data_(std::move(rho)) {
    const auto& m = std::get<Eigen::MatrixXcd>(data_);
    require(m.rows() == dimension_of(qubits) && m.cols() == m.rows(), "density matrix must be 2^qubits square");
  }

  std::size_t num_qubits() const noexcept { return qubits_; }
  Eigen::Index dimension() const noexcept { return dimension_of(qubits_); }
  bool is_density() const noexcept { return std::holds_alternative<Eigen::MatrixXcd>(data_); }

  const Eigen::VectorXcd& amplitudes() const { return std::get<Eigen::VectorXcd>(data_); }
  Eigen::VectorXcd& amplitudes() { return std::get<Eigen::VectorXcd>(data_); }
  const Eigen::MatrixXcd& rho() const { return std::get<Eigen::MatrixXcd>(data_); }
  Eigen::MatrixXcd& rho() { return std::get<Eigen::MatrixXcd>(data_); }

  /// Pure state as |psi><psi|; density states are returned unchanged.
  QuantumState to_density() const {
    if (is_density()) return *this;
    const auto& psi = amplitudes();
    return QuantumState(qubits_, Eigen::MatrixXcd(psi * psi.adjoint()));
  }

  double trace() const {
    if (is_density()) return rho().trace().real();
    return amplitudes().squaredNorm();
  }

  static Eigen::Index dimension_of(std::size_t qubits) { return Eigen::Index{1} << qubits; }

 private:
  std::size_t qubits_ = 0;
  std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> data_;
};

/// Computational-basis probabilities. Small negative diagonal entries from
/// floating-point drift are clamped to zero; anything below -1e-10 means
/// the state is broken.
inline std::vector<double> basis_probabilities(const QuantumState& state) {
  const auto dim = state.dimension();
  std::vector<double> p(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    double v = state.is_density() ? state.rho()(i, i).real() : std::norm(state.amplitudes()[i]);
    if (v < 0.0) {
      if (v < -1e-10)
        fail(ErrorKind::Numerical, "negative basis probability " + std::to_string(v) + " at index " + std::to_string(i));
      v = 0.0;
    }
    p[static_cast<std::size_t>(i)] = v;
  }
  return p;
}

}  // namespace vrpvqe
