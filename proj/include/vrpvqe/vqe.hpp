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

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "vrpvqe/circuit.hpp"
#include "vrpvqe/error.hpp"
#include "vrpvqe/hamiltonian.hpp"
#include "vrpvqe/noise.hpp"
#include "vrpvqe/optimize.hpp"
#include "vrpvqe/parallel.hpp"
#include "vrpvqe/problem.hpp"
#include "vrpvqe/random.hpp"
#include "vrpvqe/simulator.hpp"

namespace vrpvqe {

struct StatevectorBackend {};
struct DensityBackend {};
struct TrajectoryBackend {
  std::size_t n_traj = 1000;
  std::size_t jobs = 1;  // threads per evaluation; does not change results
};

using Backend = std::variant<StatevectorBackend, DensityBackend, TrajectoryBackend>;

inline std::string_view backend_name(const Backend& backend) {
  switch (backend.index()) {
    case 0: return "statevector";
    case 1: return "density";
    default: return "trajectories";
  }
}

/// Energy of the ansatz state as a function of its 2p parameters. The
/// trajectory backend reuses one seed for every evaluation, so the
/// objective is a deterministic function of the parameters.
class EnergyFunction {
 public:
  EnergyFunction(const IsingForm& ising, std::size_t layers, NoiseChannel channel, NoisePlacement placement,
                 Backend backend, std::uint64_t trajectory_seed = 0, SimulatorLimits limits = {})
      : circuit_(build_ansatz(ising, layers)),
        channel_(channel),
        placement_(placement),
        backend_(backend),
        trajectory_seed_(trajectory_seed),
        limits_(limits) {
    check_channel(channel_);
    if (std::holds_alternative<StatevectorBackend>(backend_) && !channel_.is_trivial())
      fail(ErrorKind::Incompatible, "statevector backend cannot simulate the " +
                                        std::string(channel_name(channel_.kind)) +
                                        " channel; use the density or trajectories backend");
    if (const auto* t = std::get_if<TrajectoryBackend>(&backend_); t && t->n_traj < 1)
      fail(ErrorKind::InvalidArgument, "n_traj must be at least 1");
    // Fail on guards before the first evaluation rather than inside it.
    const std::size_t m = circuit_.num_qubits;
    if (std::holds_alternative<DensityBackend>(backend_)) {
      check_density_guard(m, limits_);
    } else if (m > limits_.max_statevector_qubits) {
      fail(ErrorKind::Guard, "statevector simulation limited to " + std::to_string(limits_.max_statevector_qubits) +
                                 " qubits (got " + std::to_string(m) + ")");
    }
    diagonal_ = from_ising(ising).diagonal();
  }

  std::size_t dimension() const noexcept { return circuit_.parameter_count(); }
  const ParameterizedCircuit& circuit() const noexcept { return circuit_; }
  const std::vector<double>& diagonal() const noexcept { return diagonal_; }

  double operator()(std::span<const double> params) const {
    const ConcreteCircuit bound = bind_parameters(circuit_, params);
    return std::visit(
        [&](const auto& b) -> double {
          using B = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<B, StatevectorBackend>) {
            return expectation(diagonal_, run_statevector(bound, limits_));
          } else if constexpr (std::is_same_v<B, DensityBackend>) {
            return expectation(diagonal_, run_density(bound, channel_, placement_, limits_));
          } else {
            return run_trajectories(bound, channel_, placement_, diagonal_, b.n_traj, trajectory_seed_, b.jobs,
                                    limits_)
                .mean;
          }
        },
        backend_);
  }

 private:
  ParameterizedCircuit circuit_;
  NoiseChannel channel_;
  NoisePlacement placement_;
  Backend backend_;
  std::uint64_t trajectory_seed_;
  SimulatorLimits limits_;
  std::vector<double> diagonal_;
};

/// 2p angles drawn uniformly from [0, 2 pi).
inline std::vector<double> initial_parameters(std::size_t count, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x696e6974ULL}));
  std::vector<double> params(count);
  for (double& p : params) p = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return params;
}

/// One optimizer run from seeded random initial parameters.
inline VqeResult vqe_run(const IsingForm& ising, std::size_t layers, const NoiseChannel& channel,
                         NoisePlacement placement, const Backend& backend, const OptimizerConfig& optimizer,
                         std::uint64_t seed, const SimulatorLimits& limits = {}) {
  const EnergyFunction energy(ising, layers, channel, placement, backend, derive_seed(seed, {0x7472616aULL}), limits);
  const auto initial = initial_parameters(energy.dimension(), seed);
  OptimizerConfig config = optimizer;
  config.seed = derive_seed(optimizer.seed, {seed});
  return minimize([&](std::span<const double> p) { return energy(p); }, energy.dimension(), config, initial);
}

struct MultiStartResult {
  std::vector<std::uint64_t> seeds;
  std::vector<VqeResult> starts;
  std::size_t best_start = 0;

  const VqeResult& best() const { return starts.at(best_start); }
};

/// Independent starts with seeds derived from (seed, start index). Starts
/// run on up to `jobs` threads; the result does not depend on `jobs`.
/// The lowest index wins ties.
inline MultiStartResult vqe_multistart(const IsingForm& ising, std::size_t layers, const NoiseChannel& channel,
                                       NoisePlacement placement, const Backend& backend,
                                       const OptimizerConfig& optimizer, std::uint64_t seed, std::size_t starts,
                                       std::size_t jobs = 1, const SimulatorLimits& limits = {}) {
  if (starts < 1) fail(ErrorKind::InvalidArgument, "need at least one start");
  MultiStartResult out;
  out.starts.resize(starts);
  for (std::size_t s = 0; s < starts; ++s) out.seeds.push_back(derive_seed(seed, {s}));
  parallel_for(starts, jobs, [&](std::size_t s) {
    out.starts[s] = vqe_run(ising, layers, channel, placement, backend, optimizer, out.seeds[s], limits);
  });
  for (std::size_t s = 1; s < starts; ++s)
    if (out.starts[s].best_energy < out.starts[out.best_start].best_energy) out.best_start = s;
  return out;
}

}  // namespace vrpvqe
