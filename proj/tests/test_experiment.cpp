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
#include <set>
#include <sstream>

#include "vrpvqe/experiment.hpp"

namespace vrpvqe {
namespace {

SweepConfig cheap_config() {
  SweepConfig c;
  c.instance = reference_instance(3);
  c.optimizer.max_evaluations = 5;
  c.repetitions = 2;
  c.base_seed = 99;
  return c;
}

SweepRecord record(double energy, double kappa = 0.1, bool failed = false) {
  SweepRecord r;
  r.qubits = 6;
  r.layers = 1;
  r.channel = ChannelKind::BitFlip;
  r.kappa = kappa;
  r.energy = energy;
  r.classical_min = 0.5;
  r.deviation = energy - 0.5;
  r.failed = failed;
  return r;
}

TEST(ReferenceInstance, Shape) {
  const auto inst = reference_instance(3);
  EXPECT_EQ(inst.n, 3u);
  EXPECT_EQ(inst.k, kReferenceVehicles);
  EXPECT_EQ(inst.num_variables(), 6u);
  EXPECT_EQ(reference_instance(4).num_variables(), 12u);
  EXPECT_THROW(reference_instance(5), Error);
}

TEST(SweepCells, OrderAndNoiselessCollapse) {
  SweepConfig c = cheap_config();
  c.layers = {1, 3};
  c.channels = {ChannelKind::None, ChannelKind::PhaseFlip};
  c.kappa_grid = {0.1, 0.2, 0.3};
  const auto cells = sweep_cells(c);
  ASSERT_EQ(cells.size(), 2u + 6u);
  EXPECT_EQ(cells[0].channel, ChannelKind::None);
  EXPECT_EQ(cells[0].kappa, 0.0);
  EXPECT_EQ(cells[1].layers, 3u);
  EXPECT_EQ(cells[2].channel, ChannelKind::PhaseFlip);
  EXPECT_EQ(cells[2].layers, 1u);
  EXPECT_EQ(cells[4].kappa, 0.3);
  EXPECT_EQ(cells[5].layers, 3u);
}

TEST(SweepCells, DefaultGridHasTenPoints) {
  const auto grid = default_kappa_grid();
  ASSERT_EQ(grid.size(), 10u);
  EXPECT_NEAR(grid.front(), 0.05, 1e-15);
  EXPECT_NEAR(grid.back(), 0.5, 1e-15);
}

TEST(RunSweep, NoiselessRecordsRespectClassicalBound) {
  SweepConfig c = cheap_config();
  c.channels = {ChannelKind::None};
  c.layers = {2};
  c.repetitions = 3;
  c.optimizer.max_evaluations = 40;
  const auto records = run_sweep(c);
  ASSERT_EQ(records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(records[i].repetition, i);
    EXPECT_FALSE(records[i].failed);
    EXPECT_GE(records[i].energy, records[i].classical_min - 1e-9);
    EXPECT_NEAR(records[i].deviation, records[i].energy - records[i].classical_min, 1e-12);
  }
  EXPECT_NEAR(records[0].classical_min, 21.6614, 1e-3);
}

TEST(RunSweep, FullGridRecordCount) {
  SweepConfig c = cheap_config();
  c.channels = {ChannelKind::Depolarizing};
  c.repetitions = 10;
  c.optimizer.max_evaluations = 2;
  const auto records = run_sweep(c);
  EXPECT_EQ(records.size(), 10u * 10u * 4u);
  std::set<std::tuple<std::size_t, double, std::size_t>> keys;
  for (const auto& r : records) keys.insert({r.layers, r.kappa, r.repetition});
  EXPECT_EQ(keys.size(), records.size());
  EXPECT_EQ(aggregate(records).size(), 40u);
}

TEST(RunSweep, ByteIdenticalAcrossRunsAndJobCounts) {
  SweepConfig c = cheap_config();
  c.channels = {ChannelKind::AmplitudeDamping, ChannelKind::None};
  c.layers = {1, 2};
  c.kappa_grid = {0.1, 0.4};
  const auto a = to_csv(run_sweep(c, 1));
  EXPECT_EQ(a, to_csv(run_sweep(c, 1)));
  EXPECT_EQ(a, to_csv(run_sweep(c, 3)));
  c.backend = BackendPolicy::Trajectories;
  c.n_traj = 20;
  const auto t = to_csv(run_sweep(c, 1));
  EXPECT_EQ(t, to_csv(run_sweep(c, 4)));
  c.base_seed = 100;
  EXPECT_NE(t, to_csv(run_sweep(c, 1)));
}

TEST(RunSweep, GuardFailuresBecomeFailedRecords) {
  SweepConfig c = cheap_config();
  c.channels = {ChannelKind::BitFlip, ChannelKind::None};
  c.layers = {1};
  c.kappa_grid = {0.2};
  c.backend = BackendPolicy::Density;
  c.limits.max_density_qubits = 4;
  const auto records = run_sweep(c);
  ASSERT_EQ(records.size(), 4u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_TRUE(records[i].failed);
    EXPECT_TRUE(std::isnan(records[i].energy));
    EXPECT_NE(records[i].error.find("density"), std::string::npos);
  }
  for (std::size_t i = 2; i < 4; ++i) EXPECT_FALSE(records[i].failed);
  const auto rows = aggregate(records);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].count, 0u);
  EXPECT_TRUE(std::isnan(rows[0].mean_energy));
  EXPECT_EQ(rows[1].count, 2u);
  EXPECT_NE(to_csv(records).find(",nan,"), std::string::npos);
}

TEST(RunSweep, DegradingChannelsSaturateAndDampingStaysBelow) {
  SweepConfig c = cheap_config();
  c.channels = {ChannelKind::AmplitudeDamping, ChannelKind::Depolarizing, ChannelKind::PhaseFlip};
  c.layers = {2};
  c.kappa_grid = {0.3};
  c.repetitions = 2;
  c.optimizer.max_evaluations = 150;
  c.backend = BackendPolicy::Density;
  c.placement = NoisePlacement::AfterEachGate;
  const auto rows = aggregate(run_sweep(c));
  ASSERT_EQ(rows.size(), 3u);
  const auto ising = qubo_to_ising(build_qubo(c.instance));
  const double span = ising.d - brute_force_minimum(ising).energy;
  const double ad = rows[0].mean_deviation / span, dp = rows[1].mean_deviation / span, pf = rows[2].mean_deviation / span;
  EXPECT_LT(ad, dp);
  EXPECT_LT(ad, pf);
  EXPECT_GE(dp, 0.9);
  EXPECT_GE(pf, 0.9);
}

TEST(SelectBackend, Policy) {
  SweepConfig c = cheap_config();
  EXPECT_TRUE(std::holds_alternative<StatevectorBackend>(select_backend(c, NoiseChannel::none(), 12)));
  EXPECT_TRUE(std::holds_alternative<DensityBackend>(select_backend(c, {ChannelKind::BitFlip, 0.1}, 6)));
  EXPECT_TRUE(std::holds_alternative<TrajectoryBackend>(select_backend(c, {ChannelKind::BitFlip, 0.1}, 12)));
  c.limits.allow_large_density = true;
  EXPECT_TRUE(std::holds_alternative<DensityBackend>(select_backend(c, {ChannelKind::BitFlip, 0.1}, 12)));
  c.backend = BackendPolicy::Trajectories;
  EXPECT_TRUE(std::holds_alternative<TrajectoryBackend>(select_backend(c, {ChannelKind::BitFlip, 0.1}, 6)));
}

TEST(CheckConfig, RejectsBadSweeps) {
  auto expect_config_error = [](const SweepConfig& c) {
    try {
      check_config(c);
      FAIL() << "expected config error";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Config);
    }
  };
  SweepConfig c = cheap_config();
  expect_config_error(c);
  c.channels = {ChannelKind::BitFlip};
  EXPECT_NO_THROW(check_config(c));
  auto bad = c;
  bad.kappa_grid = {0.1, 1.2};
  expect_config_error(bad);
  bad = c;
  bad.layers = {0};
  expect_config_error(bad);
  bad = c;
  bad.repetitions = 0;
  expect_config_error(bad);
  bad = c;
  bad.kappa_grid.clear();
  expect_config_error(bad);
}

TEST(Aggregate, SingleRecord) {
  const auto rows = aggregate({record(3.5)});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].mean_energy, 3.5);
  EXPECT_EQ(rows[0].min_energy, 3.5);
  EXPECT_EQ(rows[0].mean_deviation, 3.0);
  EXPECT_EQ(rows[0].count, 1u);
}

TEST(Aggregate, MeanMinAndGrouping) {
  const auto rows = aggregate({record(1.0), record(5.0, 0.2), record(3.0), record(100.0, 0.1, true)});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].kappa, 0.1);
  EXPECT_EQ(rows[0].mean_energy, 2.0);
  EXPECT_EQ(rows[0].min_energy, 1.0);
  EXPECT_EQ(rows[0].mean_deviation, 1.5);
  EXPECT_EQ(rows[0].count, 2u);
  EXPECT_EQ(rows[1].kappa, 0.2);
  EXPECT_EQ(rows[1].mean_energy, 5.0);
}

TEST(Aggregate, EmptyThrows) { EXPECT_THROW(aggregate({}), Error); }

TEST(Csv, HeaderOnlyForNoRecords) {
  EXPECT_EQ(to_csv(std::vector<SweepRecord>{}), std::string(kRawHeader) + "\n");
  EXPECT_EQ(to_csv(std::vector<AggregateRow>{}), std::string(kAggregateHeader) + "\n");
}

TEST(Csv, SingleRecordLayout) {
  auto r = record(21.66141234);
  r.repetition = 4;
  EXPECT_EQ(to_csv(std::vector<SweepRecord>{r}),
            std::string(kRawHeader) + "\n6,1,bit_flip,0.1,4,21.6614,0.5,21.1614\n");
}

TEST(Csv, RawRoundTrip) {
  std::vector<SweepRecord> records{record(1.25), record(-3.5, 0.45), record(0.0, 0.3, true)};
  records[2].energy = records[2].deviation = std::nan("");
  std::istringstream in(to_csv(records));
  const auto back = read_raw_csv(in);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].energy, records[i].energy);
    EXPECT_EQ(back[i].kappa, records[i].kappa);
    EXPECT_EQ(back[i].channel, records[i].channel);
    EXPECT_FALSE(back[i].failed);
  }
  EXPECT_TRUE(back[2].failed);
  EXPECT_EQ(to_csv(back), to_csv(records));
}

TEST(Csv, MalformedInput) {
  std::istringstream bad_header("a,b\n");
  EXPECT_THROW(read_raw_csv(bad_header), Error);
  std::istringstream short_row(std::string(kRawHeader) + "\n6,1,bit_flip\n");
  EXPECT_THROW(read_raw_csv(short_row), Error);
  std::istringstream bad_number(std::string(kRawHeader) + "\n6,1,bit_flip,0.1,0,x,0.5,1\n");
  EXPECT_THROW(read_raw_csv(bad_number), Error);
}

TEST(FormatNumber, Cases) {
  EXPECT_EQ(format_number(0.05), "0.05");
  EXPECT_EQ(format_number(186.0924), "186.092");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(1e-7), "1e-07");
  EXPECT_EQ(parse_number("1e-07"), 1e-7);
}

}  // namespace
}  // namespace vrpvqe
