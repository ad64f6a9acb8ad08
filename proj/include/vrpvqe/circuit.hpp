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

// Alternating cost/mixer ansatz built from H, CNOT, P(lambda) and
// U(theta, phi, lambda):
//
//   |+>^m  ->  for l = 1..p:  exp(-i gamma_l H_cost)  exp(i beta_l sum X)
//
// Each coupling -J Z_i Z_j is compiled to CNOT(i,j) P(-2 J gamma) CNOT(i,j),
// which equals exp(i J gamma Z_i Z_j) up to the global phase exp(-i J gamma).
// Each field -h Z_i becomes P(-2 h gamma) = exp(i h gamma Z) up to a global
// phase, and the mixer is U(2 beta, pi/2, -pi/2) = cos(beta) I + i sin(beta) X.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vrpvqe/error.hpp"
#include "vrpvqe/problem.hpp"

namespace vrpvqe {

enum class GateKind { Hadamard, Cnot, Phase, U };

inline const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::Hadamard: return "h";
    case GateKind::Cnot: return "cx";
    case GateKind::Phase: return "p";
    case GateKind::U: return "u";
  }
  return "?";
}

/// offset + scale * params[slot], or just offset when unbound.
struct Angle {
  double offset = 0.0;
  std::optional<std::size_t> slot;
  double scale = 1.0;

  static Angle constant(double value) { return {value, std::nullopt, 1.0}; }
  static Angle symbol(std::size_t slot, double scale) { return {0.0, slot, scale}; }

  double bind(std::span<const double> params) const {
    if (!slot) return offset;
    if (*slot >= params.size())
      fail(ErrorKind::InvalidArgument, "angle references unbound parameter " + std::to_string(*slot));
    return offset + scale * params[*slot];
  }
};

struct Gate {
  GateKind kind = GateKind::Hadamard;
  std::array<std::size_t, 2> qubits{};  // CNOT: {control, target}
  std::array<Angle, 3> angles{};         // Phase: lambda; U: theta, phi, lambda

  std::size_t arity() const noexcept { return kind == GateKind::Cnot ? 2 : 1; }

  static Gate hadamard(std::size_t q) { return {GateKind::Hadamard, {q, 0}, {}}; }
  static Gate cnot(std::size_t control, std::size_t target) { return {GateKind::Cnot, {control, target}, {}}; }
  static Gate phase(std::size_t q, Angle lambda) { return {GateKind::Phase, {q, 0}, {lambda, Angle{}, Angle{}}}; }
  static Gate u(std::size_t q, Angle theta, Angle phi, Angle lambda) {
    return {GateKind::U, {q, 0}, {theta, phi, lambda}};
  }
};

/// Fixed-angle gate ready for simulation.
struct BoundGate {
  GateKind kind = GateKind::Hadamard;
  std::array<std::size_t, 2> qubits{};
  std::array<double, 3> angles{};

  std::size_t arity() const noexcept { return kind == GateKind::Cnot ? 2 : 1; }
};

/// Gate list plus the positions where each ansatz layer ends (one past its
/// last gate). Hand-built circuits with no recorded layers are treated as a
/// single layer.
template <typename G>
struct BasicCircuit {
  std::size_t num_qubits = 0;
  std::vector<G> gates;
  std::vector<std::size_t> layer_ends;

  std::vector<std::size_t> effective_layer_ends() const {
    if (layer_ends.empty()) return {gates.size()};
    return layer_ends;
  }
};

using ConcreteCircuit = BasicCircuit<BoundGate>;

struct ParameterizedCircuit : BasicCircuit<Gate> {
  std::size_t layers = 0;
  std::size_t parameter_count() const noexcept { return 2 * layers; }
};

namespace detail {

inline void check_gate(const Gate& g, std::size_t num_qubits) {
  for (std::size_t a = 0; a < g.arity(); ++a)
    require(g.qubits[a] < num_qubits, "gate qubit index out of range");
  if (g.kind == GateKind::Cnot) require(g.qubits[0] != g.qubits[1], "CNOT control and target must differ");
}

}  // namespace detail

/// Slots 0..p-1 hold gamma_1..gamma_p, slots p..2p-1 hold beta_1..beta_p.
/// Zero couplings and fields are skipped.
inline ParameterizedCircuit build_ansatz(const IsingForm& ising, std::size_t layers) {
  if (layers < 1) fail(ErrorKind::InvalidArgument, "ansatz needs at least one layer");
  const std::size_t m = ising.dim;
  ParameterizedCircuit circuit;
  circuit.num_qubits = m;
  circuit.layers = layers;
  for (std::size_t q = 0; q < m; ++q) circuit.gates.push_back(Gate::hadamard(q));

  constexpr double half_pi = std::numbers::pi / 2.0;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t gamma = l;
    const std::size_t beta = layers + l;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        const double coupling = ising.j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (coupling == 0.0) continue;
        circuit.gates.push_back(Gate::cnot(i, j));
        circuit.gates.push_back(Gate::phase(j, Angle::symbol(gamma, -2.0 * coupling)));
        circuit.gates.push_back(Gate::cnot(i, j));
      }
    for (std::size_t i = 0; i < m; ++i) {
      const double field = ising.h[static_cast<Eigen::Index>(i)];
      if (field != 0.0) circuit.gates.push_back(Gate::phase(i, Angle::symbol(gamma, -2.0 * field)));
    }
    for (std::size_t i = 0; i < m; ++i)
      circuit.gates.push_back(
          Gate::u(i, Angle::symbol(beta, 2.0), Angle::constant(half_pi), Angle::constant(-half_pi)));
    circuit.layer_ends.push_back(circuit.gates.size());
  }
  return circuit;
}

inline ConcreteCircuit bind_parameters(const ParameterizedCircuit& circuit, std::span<const double> params) {
  if (params.size() != circuit.parameter_count())
    fail(ErrorKind::InvalidArgument, "expected " + std::to_string(circuit.parameter_count()) + " parameters, got " +
                                         std::to_string(params.size()));
  ConcreteCircuit bound;
  bound.num_qubits = circuit.num_qubits;
  bound.layer_ends = circuit.layer_ends;
  bound.gates.reserve(circuit.gates.size());
  for (const Gate& g : circuit.gates) {
    detail::check_gate(g, circuit.num_qubits);
    bound.gates.push_back({g.kind, g.qubits, {g.angles[0].bind(params), g.angles[1].bind(params), g.angles[2].bind(params)}});
  }
  return bound;
}

/// U(theta, phi, lambda) =
///   [[cos(theta/2),            -e^{i lambda} sin(theta/2)],
///    [e^{i phi} sin(theta/2),  e^{i(lambda+phi)} cos(theta/2)]]
inline Eigen::Matrix2cd u_matrix(double theta, double phi, double lambda) {
  using namespace std::complex_literals;
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Eigen::Matrix2cd u;
  u << c, -std::exp(1i * lambda) * s, std::exp(1i * phi) * s, std::exp(1i * (lambda + phi)) * c;
  return u;
}

inline Eigen::Matrix2cd phase_matrix(double lambda) {
  Eigen::Matrix2cd p = Eigen::Matrix2cd::Identity();
  p(1, 1) = std::polar(1.0, lambda);
  return p;
}

inline Eigen::Matrix2cd hadamard_matrix() {
  Eigen::Matrix2cd h;
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

/// CNOT in the two-qubit basis |control target>, control most significant.
inline Eigen::Matrix4cd cnot_matrix() {
  Eigen::Matrix4cd x = Eigen::Matrix4cd::Zero();
  x(0, 0) = x(1, 1) = 1.0;
  x(2, 3) = x(3, 2) = 1.0;
  return x;
}

/// 2x2 for single-qubit gates, 4x4 for CNOT.
inline Eigen::MatrixXcd gate_matrix(const BoundGate& g) {
  switch (g.kind) {
    case GateKind::Hadamard: return hadamard_matrix();
    case GateKind::Cnot: return cnot_matrix();
    case GateKind::Phase: return phase_matrix(g.angles[0]);
    case GateKind::U: return u_matrix(g.angles[0], g.angles[1], g.angles[2]);
  }
  fail(ErrorKind::InvalidArgument, "unknown gate kind");
}

inline Eigen::MatrixXcd gate_matrix(const Gate& g, std::span<const double> params) {
  return gate_matrix(BoundGate{g.kind, g.qubits, {g.angles[0].bind(params), g.angles[1].bind(params), g.angles[2].bind(params)}});
}

inline constexpr std::size_t kMaxUnitaryQubits = 8;

/// Dense 2^m x 2^m matrix of the whole circuit, built from Kronecker
/// embeddings of each gate. Intended as a test oracle.
inline Eigen::MatrixXcd circuit_unitary(const ConcreteCircuit& circuit) {
  const std::size_t m = circuit.num_qubits;
  if (m > kMaxUnitaryQubits)
    fail(ErrorKind::Guard, "circuit_unitary limited to " + std::to_string(kMaxUnitaryQubits) + " qubits");
  const Eigen::Index dim = Eigen::Index{1} << m;
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Identity(dim, dim);

  for (const BoundGate& g : circuit.gates) {
    for (std::size_t a = 0; a < g.arity(); ++a) require(g.qubits[a] < m, "gate qubit index out of range");
    Eigen::MatrixXcd full;
    if (g.kind == GateKind::Cnot) {
      require(g.qubits[0] != g.qubits[1], "CNOT control and target must differ");
      full = Eigen::MatrixXcd::Zero(dim, dim);
      for (Eigen::Index b = 0; b < dim; ++b) {
        const bool control = (b >> g.qubits[0]) & 1;
        const Eigen::Index image = control ? (b ^ (Eigen::Index{1} << g.qubits[1])) : b;
        full(image, b) = 1.0;
      }
    } else {
      // Qubit m-1 is the leftmost Kronecker factor.
      const Eigen::Matrix2cd local = gate_matrix(g);
      full = Eigen::MatrixXcd::Identity(1, 1);
      for (std::size_t q = m; q-- > 0;) {
        const Eigen::Matrix2cd factor = (q == g.qubits[0]) ? local : Eigen::Matrix2cd::Identity();
        Eigen::MatrixXcd next(full.rows() * 2, full.cols() * 2);
        for (Eigen::Index r = 0; r < full.rows(); ++r)
          for (Eigen::Index c = 0; c < full.cols(); ++c) next.block<2, 2>(2 * r, 2 * c) = full(r, c) * factor;
        full = std::move(next);
      }
    }
    total = full * total;
  }
  return total;
}

}  // namespace vrpvqe
