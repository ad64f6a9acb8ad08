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

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vrpvqe/error.hpp"

namespace vrpvqe {

enum class ChannelKind { None, AmplitudeDamping, BitFlip, PhaseFlip, BitPhaseFlip, Depolarizing };

inline constexpr std::array<ChannelKind, 5> kNoisyChannels{ChannelKind::AmplitudeDamping, ChannelKind::BitFlip,
                                                          ChannelKind::PhaseFlip, ChannelKind::BitPhaseFlip,
                                                          ChannelKind::Depolarizing};

inline std::string_view channel_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::None: return "none";
    case ChannelKind::AmplitudeDamping: return "amplitude_damping";
    case ChannelKind::BitFlip: return "bit_flip";
    case ChannelKind::PhaseFlip: return "phase_flip";
    case ChannelKind::BitPhaseFlip: return "bit_phase_flip";
    case ChannelKind::Depolarizing: return "depolarizing";
  }
  return "?";
}

inline std::optional<ChannelKind> parse_channel(std::string_view name) {
  for (auto kind : {ChannelKind::None, ChannelKind::AmplitudeDamping, ChannelKind::BitFlip, ChannelKind::PhaseFlip,
                    ChannelKind::BitPhaseFlip, ChannelKind::Depolarizing})
    if (channel_name(kind) == name) return kind;
  return std::nullopt;
}

/// Single-qubit channel applied independently to each qubit it touches.
/// Depolarizing uses weights (1-kappa, kappa/3, kappa/3, kappa/3), so it is
/// fully mixing at kappa = 3/4.
struct NoiseChannel {
  ChannelKind kind = ChannelKind::None;
  double kappa = 0.0;

  static NoiseChannel none() { return {}; }

  bool is_trivial() const noexcept { return kind == ChannelKind::None || kappa == 0.0; }
  /// Every Kraus operator is a scaled Pauli; the channel maps I/2 to I/2.
  bool is_unital() const noexcept { return kind != ChannelKind::AmplitudeDamping; }
};

inline void check_channel(const NoiseChannel& channel) {
  if (!(channel.kappa >= 0.0 && channel.kappa <= 1.0))
    fail(ErrorKind::InvalidArgument, std::string(channel_name(channel.kind)) + ": kappa " +
                                         std::to_string(channel.kappa) + " outside [0, 1]");
}

namespace pauli {

inline Eigen::Matrix2cd x() {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Eigen::Matrix2cd y() {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  m << 0.0, -1i, 1i, 0.0;
  return m;
}

inline Eigen::Matrix2cd z() {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace pauli

using KrausSet = std::vector<Eigen::Matrix2cd>;

inline KrausSet kraus_operators(const NoiseChannel& channel) {
  check_channel(channel);
  const double kappa = channel.kappa;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  switch (channel.kind) {
    case ChannelKind::None: return {id};
    case ChannelKind::AmplitudeDamping: {
      Eigen::Matrix2cd e0 = id;
      e0(1, 1) = std::sqrt(1.0 - kappa);
      Eigen::Matrix2cd e1 = Eigen::Matrix2cd::Zero();
      e1(0, 1) = std::sqrt(kappa);
      return {e0, e1};
    }
    case ChannelKind::BitFlip: return {std::sqrt(1.0 - kappa) * id, std::sqrt(kappa) * pauli::x()};
    case ChannelKind::PhaseFlip: return {std::sqrt(1.0 - kappa) * id, std::sqrt(kappa) * pauli::z()};
    case ChannelKind::BitPhaseFlip: return {std::sqrt(1.0 - kappa) * id, std::sqrt(kappa) * pauli::y()};
    case ChannelKind::Depolarizing: {
      const double w = std::sqrt(kappa / 3.0);
      return {std::sqrt(1.0 - kappa) * id, w * pauli::x(), w * pauli::y(), w * pauli::z()};
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown channel kind");
}

/// max_{ab} |(sum_m E_m^dagger E_m - I)_{ab}|.
inline double completeness_residual(const std::vector<Eigen::MatrixXcd>& kraus) {
  require(!kraus.empty(), "Kraus set is empty");
  const Eigen::Index dim = kraus.front().rows();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& e : kraus) {
    require(e.rows() == dim && e.cols() == dim, "Kraus operators must be square and of equal dimension");
    sum += e.adjoint() * e;
  }
  return (sum - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

inline constexpr double kCompletenessTolerance = 1e-12;

/// Throws unless the set is trace preserving to kCompletenessTolerance.
inline void validate_channel(const std::vector<Eigen::MatrixXcd>& kraus) {
  const double residual = completeness_residual(kraus);
  if (residual > kCompletenessTolerance)
    fail(ErrorKind::Numerical, "Kraus completeness violated: max residual " + std::to_string(residual));
}

inline void validate_channel(const KrausSet& kraus) {
  validate_channel(std::vector<Eigen::MatrixXcd>(kraus.begin(), kraus.end()));
}

/// rho -> sum E rho E^dagger on a single-qubit density matrix.
inline Eigen::Matrix2cd apply_kraus(const KrausSet& kraus, const Eigen::Matrix2cd& rho) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (const auto& e : kraus) out += e * rho * e.adjoint();
  return out;
}

}  // namespace vrpvqe
