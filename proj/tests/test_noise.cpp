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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "vrpvqe/noise.hpp"
#include "vrpvqe/random.hpp"

namespace vrpvqe {
namespace {

using namespace std::complex_literals;

Eigen::Matrix2cd random_rho(Rng& rng) {
  Eigen::Matrix2cd a;
  for (int i = 0; i < 4; ++i) a(i / 2, i % 2) = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
  Eigen::Matrix2cd rho = a * a.adjoint();
  return rho / rho.trace();
}

double max_abs(const Eigen::Matrix2cd& m) { return m.cwiseAbs().maxCoeff(); }

TEST(Kraus, CompletenessAcrossKappaGrid) {
  for (ChannelKind kind : kNoisyChannels)
    for (int i = 0; i <= 20; ++i) {
      const auto kraus = kraus_operators({kind, 0.05 * i});
      EXPECT_LE(completeness_residual(std::vector<Eigen::MatrixXcd>(kraus.begin(), kraus.end())), 1e-12);
      EXPECT_NO_THROW(validate_channel(kraus));
    }
}

TEST(Kraus, ExplicitMatrices) {
  const double k = 0.3;
  const auto ad = kraus_operators({ChannelKind::AmplitudeDamping, k});
  ASSERT_EQ(ad.size(), 2u);
  Eigen::Matrix2cd e0, e1;
  e0 << 1, 0, 0, std::sqrt(1 - k);
  e1 << 0, std::sqrt(k), 0, 0;
  EXPECT_EQ(ad[0], e0);
  EXPECT_EQ(ad[1], e1);

  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, -1i, 1i, 0;
  z << 1, 0, 0, -1;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const auto bf = kraus_operators({ChannelKind::BitFlip, k});
  EXPECT_LE(max_abs(bf[0] - std::sqrt(1 - k) * id), 1e-15);
  EXPECT_LE(max_abs(bf[1] - std::sqrt(k) * x), 1e-15);
  const auto pf = kraus_operators({ChannelKind::PhaseFlip, k});
  EXPECT_LE(max_abs(pf[1] - std::sqrt(k) * z), 1e-15);
  const auto bpf = kraus_operators({ChannelKind::BitPhaseFlip, k});
  EXPECT_LE(max_abs(bpf[1] - std::sqrt(k) * y), 1e-15);
  const auto dp = kraus_operators({ChannelKind::Depolarizing, k});
  ASSERT_EQ(dp.size(), 4u);
  EXPECT_LE(max_abs(dp[0] - std::sqrt(1 - k) * id), 1e-15);
  EXPECT_LE(max_abs(dp[1] - std::sqrt(k / 3) * x), 1e-15);
  EXPECT_LE(max_abs(dp[2] - std::sqrt(k / 3) * y), 1e-15);
  EXPECT_LE(max_abs(dp[3] - std::sqrt(k / 3) * z), 1e-15);
  EXPECT_EQ(kraus_operators(NoiseChannel::none()).size(), 1u);
}

TEST(Kraus, KappaOutOfRange) {
  EXPECT_THROW(kraus_operators({ChannelKind::BitFlip, -0.1}), Error);
  EXPECT_THROW(kraus_operators({ChannelKind::Depolarizing, 1.5}), Error);
  EXPECT_THROW(kraus_operators({ChannelKind::PhaseFlip, std::nan("")}), Error);
  EXPECT_NO_THROW(kraus_operators({ChannelKind::Depolarizing, 1.0}));
}

TEST(ValidateChannel, DetectsViolations) {
  const std::vector<Eigen::MatrixXcd> doubled{Eigen::Matrix2cd::Identity(), Eigen::Matrix2cd::Identity()};
  EXPECT_DOUBLE_EQ(completeness_residual(doubled), 1.0);
  try {
    validate_channel(doubled);
    FAIL() << "expected failure";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
  const std::vector<Eigen::MatrixXcd> half{std::sqrt(0.5) * Eigen::Matrix2cd::Identity(),
                                           Eigen::MatrixXcd(std::sqrt(0.5) * pauli::x())};
  EXPECT_NO_THROW(validate_channel(half));
  EXPECT_THROW(validate_channel(std::vector<Eigen::MatrixXcd>{}), Error);
  EXPECT_THROW(completeness_residual({Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(4, 4)}), Error);
}

TEST(Channels, ZeroKappaIsIdentity) {
  Rng rng(1);
  for (ChannelKind kind : kNoisyChannels)
    for (int t = 0; t < 5; ++t) {
      const auto rho = random_rho(rng);
      EXPECT_LE(max_abs(apply_kraus(kraus_operators({kind, 0.0}), rho) - rho), 1e-15);
    }
}

TEST(Channels, AmplitudeDampingFullDecay) {
  Eigen::Matrix2cd one = Eigen::Matrix2cd::Zero();
  one(1, 1) = 1.0;
  Eigen::Matrix2cd zero = Eigen::Matrix2cd::Zero();
  zero(0, 0) = 1.0;
  EXPECT_LE(max_abs(apply_kraus(kraus_operators({ChannelKind::AmplitudeDamping, 1.0}), one) - zero), 1e-10);
}

TEST(Channels, AmplitudeDampingFixesGroundState) {
  Eigen::Matrix2cd zero = Eigen::Matrix2cd::Zero();
  zero(0, 0) = 1.0;
  for (int i = 0; i <= 10; ++i)
    EXPECT_LE(max_abs(apply_kraus(kraus_operators({ChannelKind::AmplitudeDamping, 0.1 * i}), zero) - zero), 1e-15);
}

TEST(Channels, DepolarizingFullyMixesAtThreeQuarters) {
  Rng rng(2);
  const auto dp = kraus_operators({ChannelKind::Depolarizing, 0.75});
  Eigen::Matrix2cd zero = Eigen::Matrix2cd::Zero();
  zero(0, 0) = 1.0;
  const Eigen::Matrix2cd half = Eigen::Matrix2cd::Identity() / 2.0;
  EXPECT_LE(max_abs(apply_kraus(dp, zero) - half), 1e-10);
  for (int t = 0; t < 10; ++t) EXPECT_LE(max_abs(apply_kraus(dp, random_rho(rng)) - half), 1e-10);
}

TEST(Channels, PhaseFlipKeepsDiagonalStates) {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    const double p = uniform01(rng);
    rho(0, 0) = p;
    rho(1, 1) = 1 - p;
    EXPECT_LE(max_abs(apply_kraus(kraus_operators({ChannelKind::PhaseFlip, uniform01(rng)}), rho) - rho), 1e-10);
  }
}

TEST(Channels, PauliChannelsAreUnital) {
  const Eigen::Matrix2cd half = Eigen::Matrix2cd::Identity() / 2.0;
  for (ChannelKind kind : kNoisyChannels) {
    const NoiseChannel ch{kind, 0.37};
    const double err = max_abs(apply_kraus(kraus_operators(ch), half) - half);
    if (ch.is_unital()) {
      EXPECT_LE(err, 1e-15) << channel_name(kind);
    } else {
      EXPECT_GT(err, 0.1);
    }
  }
}

TEST(Channels, PreserveTraceAndPositivity) {
  Rng rng(4);
  for (ChannelKind kind : kNoisyChannels)
    for (int t = 0; t < 20; ++t) {
      const auto out = apply_kraus(kraus_operators({kind, uniform01(rng)}), random_rho(rng));
      EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
      EXPECT_LE(max_abs(out - out.adjoint()), 1e-14);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(out);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(ChannelNames, RoundTrip) {
  for (auto kind : {ChannelKind::None, ChannelKind::AmplitudeDamping, ChannelKind::BitFlip, ChannelKind::PhaseFlip,
                    ChannelKind::BitPhaseFlip, ChannelKind::Depolarizing})
    EXPECT_EQ(parse_channel(channel_name(kind)), kind);
  EXPECT_EQ(parse_channel("amplitude_damping"), ChannelKind::AmplitudeDamping);
  EXPECT_FALSE(parse_channel("thermal").has_value());
}

}  // namespace
}  // namespace vrpvqe
