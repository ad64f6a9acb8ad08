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

// Self-check suite behind `vrpvqe validate`.

#include <cmath>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "vrpvqe/circuit.hpp"
#include "vrpvqe/experiment.hpp"
#include "vrpvqe/hamiltonian.hpp"
#include "vrpvqe/noise.hpp"
#include "vrpvqe/problem.hpp"
#include "vrpvqe/random.hpp"
#include "vrpvqe/simulator.hpp"

namespace vrpvqe {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidateOptions {
  /// Conversion under test; swapped out by mutation tests.
  std::function<IsingForm(const QuboForm&)> to_ising = qubo_to_ising;
  std::size_t trajectories = 4000;
  std::uint64_t seed = 12345;
};

namespace detail {

inline std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << v;
  return os.str();
}

inline CheckResult check_completeness() {
  double worst = 0.0;
  for (ChannelKind kind : kNoisyChannels)
    for (int i = 0; i <= 20; ++i) {
      const auto kraus = kraus_operators({kind, i / 20.0});
      worst = std::max(worst, completeness_residual(std::vector<Eigen::MatrixXcd>(kraus.begin(), kraus.end())));
    }
  return {"channel completeness", worst <= kCompletenessTolerance, "max residual " + sci(worst)};
}

inline CheckResult check_equivalence(const ValidateOptions& options, std::size_t n) {
  const VrpInstance instance = reference_instance(n);
  const QuboForm qubo = build_qubo(instance);
  const IsingForm ising = options.to_ising(qubo);
  double worst = 0.0;
  const std::uint64_t count = std::uint64_t{1} << qubo.dim;
  for (std::uint64_t v = 0; v < count; ++v) {
    const Assignment x = Assignment::from_integer(v, qubo.dim);
    const double a = evaluate_qubo(qubo, x);
    const double b = evaluate_ising(ising, x);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  return {"qubo/ising equivalence n=" + std::to_string(n), worst <= 1e-9, "max relative error " + sci(worst)};
}

inline CheckResult check_unitarity(const ValidateOptions& options) {
  const IsingForm ising = options.to_ising(build_qubo(build_instance(3, 1, std::uint64_t{3})));
  const auto circuit = build_ansatz(ising, 2);
  Rng rng(options.seed);
  std::vector<double> params(circuit.parameter_count());
  for (double& p : params) p = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const Eigen::MatrixXcd u = circuit_unitary(bind_parameters(circuit, params));
  const double err = (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  return {"ansatz unitarity", err <= 1e-10, "max |U^dag U - I| " + sci(err)};
}

inline CheckResult check_trajectories(const ValidateOptions& options) {
  const IsingForm ising = options.to_ising(build_qubo(build_instance(2, 1, std::uint64_t{5})));
  const auto circuit = build_ansatz(ising, 2);
  const std::vector<double> params{0.3, 1.1, 0.7, 2.0};
  const ConcreteCircuit bound = bind_parameters(circuit, params);
  const auto diag = from_ising(ising).diagonal();
  double worst_z = 0.0;
  for (ChannelKind kind : kNoisyChannels) {
    const NoiseChannel channel{kind, 0.3};
    const double exact = expectation(diag, run_density(bound, channel));
    const auto est = run_trajectories(bound, channel, NoisePlacement::AfterEachLayer, diag, options.trajectories,
                                      options.seed);
    const double z = est.std_error > 0 ? std::abs(est.mean - exact) / est.std_error : std::abs(est.mean - exact) * 1e12;
    worst_z = std::max(worst_z, z);
  }
  return {"trajectory/density agreement", worst_z <= 4.0, "max |z| " + sci(worst_z)};
}

inline CheckResult check_noiseless_density() {
  const IsingForm ising = qubo_to_ising(build_qubo(build_instance(2, 1, std::uint64_t{5})));
  const ConcreteCircuit bound = bind_parameters(build_ansatz(ising, 1), std::vector<double>{0.4, 0.9});
  const auto psi = run_statevector(bound).amplitudes();
  const Eigen::MatrixXcd rho = run_density(bound, NoiseChannel::none()).rho();
  const double err = (rho - psi * psi.adjoint()).cwiseAbs().maxCoeff();
  return {"noiseless density matches statevector", err <= 1e-10, "max deviation " + sci(err)};
}

}  // namespace detail

inline std::vector<CheckResult> run_validation(const ValidateOptions& options = {}) {
  std::vector<CheckResult> results;
  auto guarded = [&](const std::string& name, auto&& check) {
    try {
      results.push_back(check());
    } catch (const std::exception& e) {
      results.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded("channel completeness", [] { return detail::check_completeness(); });
  guarded("qubo/ising equivalence n=3", [&] { return detail::check_equivalence(options, 3); });
  guarded("qubo/ising equivalence n=4", [&] { return detail::check_equivalence(options, 4); });
  guarded("ansatz unitarity", [&] { return detail::check_unitarity(options); });
  guarded("noiseless density matches statevector", [] { return detail::check_noiseless_density(); });
  guarded("trajectory/density agreement", [&] { return detail::check_trajectories(options); });
  return results;
}

}  // namespace vrpvqe
