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

// Gate-level simulation backends: exact statevector, full density matrix
// with Kraus noise, and Monte-Carlo trajectories that unravel the same
// noise on pure states.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vrpvqe/circuit.hpp"
#include "vrpvqe/error.hpp"
#include "vrpvqe/hamiltonian.hpp"
#include "vrpvqe/noise.hpp"
#include "vrpvqe/parallel.hpp"
#include "vrpvqe/random.hpp"
#include "vrpvqe/state.hpp"

namespace vrpvqe {

/// When the channel fires. AfterEachGate applies it to the qubits the gate
/// acted on; the other modes apply it to every qubit in ascending order.
enum class NoisePlacement { AfterEachLayer, AfterEachGate, Final };

inline std::string_view placement_name(NoisePlacement p) {
  switch (p) {
    case NoisePlacement::AfterEachLayer: return "after_each_layer";
    case NoisePlacement::AfterEachGate: return "after_each_gate";
    case NoisePlacement::Final: return "final";
  }
  return "?";
}

inline std::optional<NoisePlacement> parse_placement(std::string_view name) {
  for (auto p : {NoisePlacement::AfterEachLayer, NoisePlacement::AfterEachGate, NoisePlacement::Final})
    if (placement_name(p) == name) return p;
  return std::nullopt;
}

struct SimulatorLimits {
  std::size_t max_statevector_qubits = 14;
  std::size_t max_density_qubits = 10;
  std::size_t max_large_density_qubits = 12;  // reachable only with allow_large_density
  bool allow_large_density = false;
};

namespace kernels {

// All kernels act on a flat buffer of 2^nbits amplitudes.

inline void apply_1q(std::span<cplx> data, std::size_t q, const Eigen::Matrix2cd& u) {
  const std::size_t stride = std::size_t{1} << q;
  const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  for (std::size_t base = 0; base < data.size(); base += 2 * stride)
    for (std::size_t i0 = base; i0 < base + stride; ++i0) {
      const cplx a = data[i0], b = data[i0 + stride];
      data[i0] = u00 * a + u01 * b;
      data[i0 + stride] = u10 * a + u11 * b;
    }
}

/// Multiplies every entry whose bit q is set by `phase`.
inline void apply_phase(std::span<cplx> data, std::size_t q, cplx phase) {
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = stride; base < data.size(); base += 2 * stride)
    for (std::size_t i = base; i < base + stride; ++i) data[i] *= phase;
}

inline void apply_cnot(std::span<cplx> data, std::size_t control, std::size_t target) {
  const std::size_t cmask = std::size_t{1} << control;
  const std::size_t tmask = std::size_t{1} << target;
  for (std::size_t i = 0; i < data.size(); ++i)
    if ((i & cmask) && !(i & tmask)) std::swap(data[i], data[i | tmask]);
}

/// 4x4 operator on bits (lo, hi); local index = 2*bit(hi) + bit(lo).
inline void apply_2q(std::span<cplx> data, std::size_t lo, std::size_t hi, const Eigen::Matrix4cd& m) {
  const std::size_t lmask = std::size_t{1} << lo;
  const std::size_t hmask = std::size_t{1} << hi;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i & (lmask | hmask)) continue;
    const std::size_t idx[4] = {i, i | lmask, i | hmask, i | lmask | hmask};
    const cplx v[4] = {data[idx[0]], data[idx[1]], data[idx[2]], data[idx[3]]};
    for (int r = 0; r < 4; ++r) data[idx[r]] = m(r, 0) * v[0] + m(r, 1) * v[1] + m(r, 2) * v[2] + m(r, 3) * v[3];
  }
}

/// Applies a gate to a statevector, or to both sides of a column-major
/// density matrix viewed as a 2m-qubit vector (row bits low, column bits
/// high, the column side taking the complex conjugate).
inline void apply_gate(std::span<cplx> data, std::size_t m, const BoundGate& g, bool density) {
  switch (g.kind) {
    case GateKind::Cnot:
      apply_cnot(data, g.qubits[0], g.qubits[1]);
      if (density) apply_cnot(data, g.qubits[0] + m, g.qubits[1] + m);
      return;
    case GateKind::Phase: {
      const cplx phase = std::polar(1.0, g.angles[0]);
      apply_phase(data, g.qubits[0], phase);
      if (density) apply_phase(data, g.qubits[0] + m, std::conj(phase));
      return;
    }
    default: {
      const Eigen::Matrix2cd u = gate_matrix(g);
      apply_1q(data, g.qubits[0], u);
      if (density) apply_1q(data, g.qubits[0] + m, u.conjugate());
      return;
    }
  }
}

/// Superoperator sum_k E_k (x) conj(E_k) in apply_2q's local ordering with
/// the row bit low and the column bit high.
inline Eigen::Matrix4cd superoperator(const KrausSet& kraus) {
  Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
  for (const auto& e : kraus)
    for (int cr = 0; cr < 2; ++cr)
      for (int rr = 0; rr < 2; ++rr)
        for (int cc = 0; cc < 2; ++cc)
          for (int rc = 0; rc < 2; ++rc) s(2 * cr + rr, 2 * cc + rc) += e(rr, rc) * std::conj(e(cr, cc));
  return s;
}

inline std::span<cplx> view(QuantumState& state) {
  if (state.is_density()) return {state.rho().data(), static_cast<std::size_t>(state.rho().size())};
  return {state.amplitudes().data(), static_cast<std::size_t>(state.amplitudes().size())};
}

}  // namespace kernels

namespace detail {

inline void check_circuit(const ConcreteCircuit& circuit) {
  for (const auto& g : circuit.gates) {
    for (std::size_t a = 0; a < g.arity(); ++a)
      if (g.qubits[a] >= circuit.num_qubits) fail(ErrorKind::InvalidArgument, "gate qubit index out of range");
    if (g.kind == GateKind::Cnot && g.qubits[0] == g.qubits[1])
      fail(ErrorKind::InvalidArgument, "CNOT control and target must differ");
  }
}

/// Walks the circuit, calling on_gate(gate) and on_noise(qubit) in the
/// order dictated by the placement.
template <typename OnGate, typename OnNoise>
void walk(const ConcreteCircuit& circuit, NoisePlacement placement, bool noisy, OnGate&& on_gate, OnNoise&& on_noise) {
  const auto layer_ends = circuit.effective_layer_ends();
  auto all_qubits = [&] {
    for (std::size_t q = 0; q < circuit.num_qubits; ++q) on_noise(q);
  };
  std::size_t next_layer = 0;
  for (std::size_t idx = 0; idx < circuit.gates.size(); ++idx) {
    const BoundGate& g = circuit.gates[idx];
    on_gate(g);
    if (!noisy) continue;
    if (placement == NoisePlacement::AfterEachGate) {
      if (g.arity() == 2) {
        on_noise(std::min(g.qubits[0], g.qubits[1]));
        on_noise(std::max(g.qubits[0], g.qubits[1]));
      } else {
        on_noise(g.qubits[0]);
      }
    }
    while (next_layer < layer_ends.size() && layer_ends[next_layer] == idx + 1) {
      if (placement == NoisePlacement::AfterEachLayer) all_qubits();
      ++next_layer;
    }
  }
  if (noisy && placement == NoisePlacement::Final) all_qubits();
}

}  // namespace detail

/// Exact pure-state evolution from |0...0>.
inline QuantumState run_statevector(const ConcreteCircuit& circuit, const SimulatorLimits& limits = {}) {
  if (circuit.num_qubits > limits.max_statevector_qubits)
    fail(ErrorKind::Guard, "statevector simulation limited to " + std::to_string(limits.max_statevector_qubits) +
                               " qubits (got " + std::to_string(circuit.num_qubits) + ")");
  detail::check_circuit(circuit);
  QuantumState state = QuantumState::zero_statevector(circuit.num_qubits);
  auto data = kernels::view(state);
  for (const auto& g : circuit.gates) kernels::apply_gate(data, circuit.num_qubits, g, false);
  return state;
}

/// rho -> sum_m E_m rho E_m^dagger with E_m acting on `qubit`.
inline QuantumState apply_channel(QuantumState state, const NoiseChannel& channel, std::size_t qubit) {
  if (!state.is_density())
    fail(ErrorKind::InvalidArgument, "apply_channel needs a density matrix; promote with to_density() first");
  if (qubit >= state.num_qubits())
    fail(ErrorKind::InvalidArgument, "qubit " + std::to_string(qubit) + " out of range");
  const Eigen::Matrix4cd s = kernels::superoperator(kraus_operators(channel));
  kernels::apply_2q(kernels::view(state), qubit, qubit + state.num_qubits(), s);
  return state;
}

inline void check_density_guard(std::size_t qubits, const SimulatorLimits& limits) {
  const std::size_t cap = limits.allow_large_density ? limits.max_large_density_qubits : limits.max_density_qubits;
  if (qubits > cap) {
    std::string msg = "density-matrix simulation limited to " + std::to_string(cap) + " qubits (got " +
                      std::to_string(qubits) + ")";
    if (!limits.allow_large_density && qubits <= limits.max_large_density_qubits)
      msg += "; enable the high-memory flag or use the trajectory backend";
    fail(ErrorKind::Guard, msg);
  }
}

/// Full density-matrix evolution with `channel` inserted per `placement`.
inline QuantumState run_density(const ConcreteCircuit& circuit, const NoiseChannel& channel,
                                NoisePlacement placement = NoisePlacement::AfterEachLayer,
                                const SimulatorLimits& limits = {}) {
  check_density_guard(circuit.num_qubits, limits);
  detail::check_circuit(circuit);
  const std::size_t m = circuit.num_qubits;
  QuantumState state = QuantumState::zero_density(m);
  auto data = kernels::view(state);
  const bool noisy = !channel.is_trivial();
  const Eigen::Matrix4cd s = kernels::superoperator(kraus_operators(channel));
  detail::walk(
      circuit, placement, noisy, [&](const BoundGate& g) { kernels::apply_gate(data, m, g, true); },
      [&](std::size_t q) { kernels::apply_2q(data, q, q + m, s); });
  return state;
}

struct TrajectoryEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

namespace detail {

/// Picks Kraus branch k with probability ||E_k psi||^2 and renormalizes.
inline void sample_kraus(std::span<cplx> psi, std::size_t q, const KrausSet& kraus, Rng& rng) {
  const std::size_t stride = std::size_t{1} << q;
  std::vector<double> weight(kraus.size(), 0.0);
  for (std::size_t k = 0; k < kraus.size(); ++k) {
    const Eigen::Matrix2cd& e = kraus[k];
    double w = 0.0;
    for (std::size_t base = 0; base < psi.size(); base += 2 * stride)
      for (std::size_t i0 = base; i0 < base + stride; ++i0) {
        const cplx a = psi[i0], b = psi[i0 + stride];
        w += std::norm(e(0, 0) * a + e(0, 1) * b) + std::norm(e(1, 0) * a + e(1, 1) * b);
      }
    weight[k] = w;
  }
  double total = 0.0;
  for (double w : weight) total += w;
  const double r = uniform01(rng) * total;
  std::size_t chosen = kraus.size() - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < kraus.size(); ++k) {
    acc += weight[k];
    if (weight[k] > 0.0 && r < acc) {
      chosen = k;
      break;
    }
  }
  while (weight[chosen] <= 0.0 && chosen > 0) --chosen;
  kernels::apply_1q(psi, q, kraus[chosen] / std::sqrt(weight[chosen]));
}

}  // namespace detail

/// Monte-Carlo unraveling: each trajectory evolves a pure state and, at
/// every channel application, follows one Kraus branch sampled with its
/// Born probability. Trajectory t draws from its own stream derived from
/// (seed, t), so the result does not depend on `jobs`.
inline TrajectoryEstimate run_trajectories(const ConcreteCircuit& circuit, const NoiseChannel& channel,
                                           NoisePlacement placement, const std::vector<double>& diagonal,
                                           std::size_t n_traj, std::uint64_t seed, std::size_t jobs = 1,
                                           const SimulatorLimits& limits = {}) {
  if (n_traj < 1) fail(ErrorKind::InvalidArgument, "need at least one trajectory");
  if (channel.is_trivial()) return {expectation(diagonal, run_statevector(circuit, limits)), 0.0};
  if (circuit.num_qubits > limits.max_statevector_qubits)
    fail(ErrorKind::Guard, "trajectory simulation limited to " + std::to_string(limits.max_statevector_qubits) +
                               " qubits (got " + std::to_string(circuit.num_qubits) + ")");
  detail::check_circuit(circuit);
  const KrausSet kraus = kraus_operators(channel);
  const std::size_t m = circuit.num_qubits;

  std::vector<double> energies(n_traj);
  parallel_for(n_traj, jobs, [&](std::size_t t) {
    Rng rng(derive_seed(seed, {t}));
    QuantumState state = QuantumState::zero_statevector(m);
    auto psi = kernels::view(state);
    detail::walk(
        circuit, placement, true, [&](const BoundGate& g) { kernels::apply_gate(psi, m, g, false); },
        [&](std::size_t q) { detail::sample_kraus(psi, q, kraus, rng); });
    state.amplitudes().normalize();
    energies[t] = expectation(diagonal, state);
  });

  double mean = 0.0;
  for (double e : energies) mean += e;
  mean /= static_cast<double>(n_traj);
  if (n_traj == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double e : energies) ss += (e - mean) * (e - mean);
  const double variance = ss / static_cast<double>(n_traj - 1);
  return {mean, std::sqrt(variance / static_cast<double>(n_traj))};
}

inline TrajectoryEstimate run_trajectories(const ConcreteCircuit& circuit, const NoiseChannel& channel,
                                           NoisePlacement placement, const PauliZPolynomial& h, std::size_t n_traj,
                                           std::uint64_t seed, std::size_t jobs = 1,
                                           const SimulatorLimits& limits = {}) {
  if (h.num_qubits != circuit.num_qubits)
    fail(ErrorKind::InvalidArgument, "Hamiltonian and circuit qubit counts differ");
  return run_trajectories(circuit, channel, placement, h.diagonal(), n_traj, seed, jobs, limits);
}

/// Finite-shot estimate of a diagonal observable: `shots` basis states drawn
/// from the state's distribution by inverse-CDF sampling.
inline double sample_expectation(const std::vector<double>& diagonal, const QuantumState& state, std::size_t shots,
                                 std::uint64_t seed) {
  require(shots >= 1, "need at least one shot");
  const auto p = basis_probabilities(state);
  require(p.size() == diagonal.size(), "observable and state dimensions differ");
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) cdf[i] = (acc += p[i]);
  Rng rng(seed);
  double total = 0.0;
  for (std::size_t s = 0; s < shots; ++s) {
    const double r = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), p.size() - 1);
    total += diagonal[idx];
  }
  return total / static_cast<double>(shots);
}

}  // namespace vrpvqe
