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

// Noise sweeps: channel x layers x kappa x repetition, each cell a VQE run
// whose energy is compared with the exact classical minimum.

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <vector>

#include "vrpvqe/error.hpp"
#include "vrpvqe/noise.hpp"
#include "vrpvqe/optimize.hpp"
#include "vrpvqe/parallel.hpp"
#include "vrpvqe/problem.hpp"
#include "vrpvqe/random.hpp"
#include "vrpvqe/simulator.hpp"
#include "vrpvqe/vqe.hpp"

namespace vrpvqe {

inline constexpr std::uint64_t kReferenceSeed = 7;
inline constexpr std::size_t kReferenceVehicles = 2;

/// The in-repo reference instances: n = 3 (6 qubits) or n = 4 (12 qubits),
/// two vehicles, weights drawn from kReferenceSeed, default penalty.
inline VrpInstance reference_instance(std::size_t n) {
  if (n != 3 && n != 4) fail(ErrorKind::InvalidArgument, "reference instances exist for n = 3 and n = 4 only");
  return build_instance(n, kReferenceVehicles, kReferenceSeed);
}

enum class BackendPolicy { Density, Trajectories, Auto };

inline std::string_view policy_name(BackendPolicy p) {
  switch (p) {
    case BackendPolicy::Density: return "density";
    case BackendPolicy::Trajectories: return "trajectories";
    case BackendPolicy::Auto: return "auto";
  }
  return "?";
}

inline std::vector<double> default_kappa_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(0.05 * i);
  return grid;
}

struct SweepConfig {
  VrpInstance instance;
  std::vector<std::size_t> layers{1, 2, 3, 4};
  std::vector<ChannelKind> channels;
  std::vector<double> kappa_grid = default_kappa_grid();
  std::size_t repetitions = 10;
  OptimizerConfig optimizer{};
  BackendPolicy backend = BackendPolicy::Auto;  // Auto: density up to the density guard, else trajectories
  std::size_t n_traj = 1000;
  NoisePlacement placement = NoisePlacement::AfterEachLayer;
  std::uint64_t base_seed = 0;
  SimulatorLimits limits{};
};

inline void check_config(const SweepConfig& config) {
  auto bad = [](const std::string& what) { fail(ErrorKind::Config, what); };
  if (config.layers.empty()) bad("layers must not be empty");
  if (config.channels.empty()) bad("channels must not be empty");
  if (config.kappa_grid.empty()) bad("kappa_grid must not be empty");
  if (config.repetitions < 1) bad("repetitions must be at least 1");
  if (config.n_traj < 1) bad("n_traj must be at least 1");
  for (std::size_t l : config.layers)
    if (l < 1) bad("layers entries must be at least 1");
  for (double kappa : config.kappa_grid)
    if (!(kappa >= 0.0 && kappa <= 1.0)) bad("kappa_grid entry " + std::to_string(kappa) + " outside [0, 1]");
  if (config.optimizer.max_evaluations < 1) bad("optimizer.max_evaluations must be at least 1");
  if (!(config.optimizer.tolerance > 0.0)) bad("optimizer.tolerance must be positive");
}

struct SweepRecord {
  std::size_t qubits = 0;
  std::size_t layers = 0;
  ChannelKind channel = ChannelKind::None;
  double kappa = 0.0;
  std::size_t repetition = 0;
  double energy = 0.0;
  double classical_min = 0.0;
  double deviation = 0.0;
  bool failed = false;
  std::string error;  // set when failed
};

struct SweepCell {
  std::size_t layers = 0;
  ChannelKind channel = ChannelKind::None;
  double kappa = 0.0;
};

/// Cells in output order: channel, then layers, then kappa. The noiseless
/// channel has a single kappa = 0 cell per layer count.
inline std::vector<SweepCell> sweep_cells(const SweepConfig& config) {
  std::vector<SweepCell> cells;
  for (ChannelKind channel : config.channels)
    for (std::size_t layers : config.layers) {
      if (channel == ChannelKind::None) {
        cells.push_back({layers, channel, 0.0});
        continue;
      }
      for (double kappa : config.kappa_grid) cells.push_back({layers, channel, kappa});
    }
  return cells;
}

inline std::uint64_t repetition_seed(std::uint64_t base_seed, const SweepCell& cell, std::size_t repetition) {
  return derive_seed(base_seed, {cell.layers, static_cast<std::uint64_t>(cell.channel),
                                 std::bit_cast<std::uint64_t>(cell.kappa), repetition});
}

inline Backend select_backend(const SweepConfig& config, const NoiseChannel& channel, std::size_t qubits) {
  if (channel.is_trivial()) return StatevectorBackend{};
  switch (config.backend) {
    case BackendPolicy::Density: return DensityBackend{};
    case BackendPolicy::Trajectories: return TrajectoryBackend{config.n_traj, 1};
    case BackendPolicy::Auto: {
      const std::size_t cap =
          config.limits.allow_large_density ? config.limits.max_large_density_qubits : config.limits.max_density_qubits;
      if (qubits <= cap) return DensityBackend{};
      return TrajectoryBackend{config.n_traj, 1};
    }
  }
  return DensityBackend{};
}

/// Runs every (cell, repetition) on up to `jobs` threads. Records come
/// back cell-major, repetition-minor; a library error in one run marks
/// that record failed instead of aborting the sweep.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& config, std::size_t jobs = 1) {
  check_config(config);
  const QuboForm qubo = build_qubo(config.instance);
  const IsingForm ising = qubo_to_ising(qubo);
  const double classical_min = brute_force_minimum(ising).energy;
  const std::size_t qubits = ising.dim;

  const auto cells = sweep_cells(config);
  const std::size_t reps = config.repetitions;
  std::vector<SweepRecord> records(cells.size() * reps);
  parallel_for(records.size(), jobs, [&](std::size_t idx) {
    const SweepCell& cell = cells[idx / reps];
    const std::size_t rep = idx % reps;
    SweepRecord& rec = records[idx];
    rec.qubits = qubits;
    rec.layers = cell.layers;
    rec.channel = cell.channel;
    rec.kappa = cell.kappa;
    rec.repetition = rep;
    rec.classical_min = classical_min;
    try {
      const NoiseChannel channel{cell.channel, cell.kappa};
      const Backend backend = select_backend(config, channel, qubits);
      const VqeResult result = vqe_run(ising, cell.layers, channel, config.placement, backend, config.optimizer,
                                       repetition_seed(config.base_seed, cell, rep), config.limits);
      rec.energy = result.best_energy;
      rec.deviation = rec.energy - classical_min;
    } catch (const Error& e) {
      rec.failed = true;
      rec.error = e.what();
      rec.energy = rec.deviation = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return records;
}

struct AggregateRow {
  std::size_t qubits = 0;
  std::size_t layers = 0;
  ChannelKind channel = ChannelKind::None;
  double kappa = 0.0;
  double mean_energy = 0.0;
  double min_energy = 0.0;
  double mean_deviation = 0.0;
  std::size_t count = 0;  // successful repetitions
};

/// Mean and minimum over repetitions per (qubits, layers, channel, kappa),
/// rows in order of first appearance. Failed records are skipped; a key
/// with no successful record aggregates to NaN.
inline std::vector<AggregateRow> aggregate(const std::vector<SweepRecord>& records) {
  if (records.empty()) fail(ErrorKind::InvalidArgument, "cannot aggregate an empty record list");
  using Key = std::tuple<std::size_t, std::size_t, int, std::uint64_t>;
  std::map<Key, std::size_t> index;
  std::vector<AggregateRow> rows;
  std::vector<double> energy_sum, deviation_sum;
  for (const auto& r : records) {
    const Key key{r.qubits, r.layers, static_cast<int>(r.channel), std::bit_cast<std::uint64_t>(r.kappa)};
    auto [it, inserted] = index.try_emplace(key, rows.size());
    if (inserted) {
      rows.push_back({r.qubits, r.layers, r.channel, r.kappa, 0.0, std::numeric_limits<double>::infinity(), 0.0, 0});
      energy_sum.push_back(0.0);
      deviation_sum.push_back(0.0);
    }
    if (r.failed) continue;
    const std::size_t i = it->second;
    AggregateRow& row = rows[i];
    ++row.count;
    energy_sum[i] += r.energy;
    deviation_sum[i] += r.deviation;
    row.min_energy = std::min(row.min_energy, r.energy);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    AggregateRow& row = rows[i];
    if (row.count == 0) {
      row.mean_energy = row.min_energy = row.mean_deviation = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    row.mean_energy = energy_sum[i] / static_cast<double>(row.count);
    row.mean_deviation = deviation_sum[i] / static_cast<double>(row.count);
  }
  return rows;
}

// ---- CSV ------------------------------------------------------------------

inline constexpr std::string_view kRawHeader = "qubits,layers,channel,kappa,repetition,energy,classical_min,deviation";
inline constexpr std::string_view kAggregateHeader =
    "qubits,layers,channel,kappa,mean_energy,min_energy,mean_deviation";

/// Six significant digits, shortest form, locale independent.
inline std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    fail(ErrorKind::Io, "malformed number '" + std::string(text) + "'");
  return value;
}

inline void write_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << kRawHeader << '\n';
  for (const auto& r : records)
    os << r.qubits << ',' << r.layers << ',' << channel_name(r.channel) << ',' << format_number(r.kappa) << ','
       << r.repetition << ',' << format_number(r.energy) << ',' << format_number(r.classical_min) << ','
       << format_number(r.deviation) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << kAggregateHeader << '\n';
  for (const auto& r : rows)
    os << r.qubits << ',' << r.layers << ',' << channel_name(r.channel) << ',' << format_number(r.kappa) << ','
       << format_number(r.mean_energy) << ',' << format_number(r.min_energy) << ','
       << format_number(r.mean_deviation) << '\n';
}

template <typename Rows>
std::string to_csv(const Rows& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

template <typename Rows>
void write_csv(const Rows& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open " + path + " for writing");
  write_csv(out, rows);
  out.flush();
  if (!out) fail(ErrorKind::Io, "write to " + path + " failed");
}

/// Parses a raw CSV produced by write_csv. Rows with a NaN energy come
/// back marked failed.
inline std::vector<SweepRecord> read_raw_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRawHeader) fail(ErrorKind::Io, "raw CSV header mismatch");
  std::vector<SweepRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
      fields.push_back(rest.substr(0, pos));
    fields.push_back(rest);
    if (fields.size() != 8) fail(ErrorKind::Io, "line " + std::to_string(line_no) + ": expected 8 fields");
    auto to_count = [&](std::string_view f) {
      std::size_t v = 0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
        fail(ErrorKind::Io, "line " + std::to_string(line_no) + ": malformed integer '" + std::string(f) + "'");
      return v;
    };
    SweepRecord r;
    r.qubits = to_count(fields[0]);
    r.layers = to_count(fields[1]);
    const auto channel = parse_channel(fields[2]);
    if (!channel) fail(ErrorKind::Io, "line " + std::to_string(line_no) + ": unknown channel");
    r.channel = *channel;
    r.kappa = parse_number(fields[3]);
    r.repetition = to_count(fields[4]);
    r.energy = parse_number(fields[5]);
    r.classical_min = parse_number(fields[6]);
    r.deviation = parse_number(fields[7]);
    r.failed = std::isnan(r.energy);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace vrpvqe
