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

// JSON configs and results. Every schema problem surfaces as
// ErrorKind::Config with the dotted path of the offending field.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "vrpvqe/error.hpp"
#include "vrpvqe/experiment.hpp"
#include "vrpvqe/noise.hpp"
#include "vrpvqe/optimize.hpp"
#include "vrpvqe/problem.hpp"
#include "vrpvqe/simulator.hpp"
#include "vrpvqe/vqe.hpp"

namespace vrpvqe::io {

using nlohmann::json;

[[noreturn]] inline void bad_field(const std::string& path, const std::string& what) {
  fail(ErrorKind::Config, "field '" + path + "': " + what);
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Config, origin + ": malformed JSON: " + e.what());
  }
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Config, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.string());
}

namespace detail {

inline const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline const json& need(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) bad_field(path.empty() ? "<root>" : path, "expected an object");
  const json* v = find(obj, key);
  if (!v) bad_field(path.empty() ? key : path + "." + key, "missing");
  return *v;
}

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline std::uint64_t get_count(const json& v, const std::string& path, std::uint64_t min = 0) {
  if (!v.is_number_integer()) bad_field(path, "expected an integer");
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u < min) bad_field(path, "must be at least " + std::to_string(min));
    return u;
  }
  const auto i = v.get<std::int64_t>();
  if (i < 0 || static_cast<std::uint64_t>(i) < min) bad_field(path, "must be at least " + std::to_string(min));
  return static_cast<std::uint64_t>(i);
}

inline double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) bad_field(path, "expected a number");
  return v.get<double>();
}

inline std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) bad_field(path, "expected a string");
  return v.get<std::string>();
}

inline double get_kappa(const json& v, const std::string& path) {
  const double kappa = get_number(v, path);
  if (!(kappa >= 0.0 && kappa <= 1.0)) bad_field(path, "kappa " + std::to_string(kappa) + " outside [0, 1]");
  return kappa;
}

inline ChannelKind get_channel_kind(const json& v, const std::string& path) {
  const auto name = get_string(v, path);
  const auto kind = parse_channel(name);
  if (!kind) bad_field(path, "unknown channel '" + name + "'");
  return *kind;
}

inline NoisePlacement get_placement(const json& v, const std::string& path) {
  const auto name = get_string(v, path);
  const auto p = parse_placement(name);
  if (!p) bad_field(path, "unknown placement '" + name + "'");
  return *p;
}

}  // namespace detail

/// {"n", "k", "weights": [[...]]} or {"n", "k", "seed"}; optional
/// "penalty_a". {"path": "file.json"} loads the object from a file
/// relative to `base_dir`.
inline VrpInstance parse_instance(const json& j, const std::filesystem::path& base_dir = {},
                                  const std::string& path = "") {
  using namespace detail;
  if (!j.is_object()) bad_field(path.empty() ? "<root>" : path, "expected an instance object");
  if (const json* file = find(j, "path")) {
    const auto target = base_dir / get_string(*file, join(path, "path"));
    return parse_instance(read_json_file(target), target.parent_path(), "");
  }
  const auto n = static_cast<std::size_t>(get_count(need(j, "n", path), join(path, "n"), 2));
  const auto k = static_cast<std::size_t>(get_count(need(j, "k", path), join(path, "k"), 1));
  if (k > n - 1) bad_field(join(path, "k"), "must lie in [1, n-1]");
  std::optional<double> penalty;
  if (const json* a = find(j, "penalty_a")) {
    penalty = get_number(*a, join(path, "penalty_a"));
    if (!(*penalty > 0.0)) bad_field(join(path, "penalty_a"), "must be positive");
  }
  const json* weights = find(j, "weights");
  const json* seed = find(j, "seed");
  if ((weights != nullptr) == (seed != nullptr)) bad_field(path.empty() ? "<root>" : path, "give exactly one of 'weights' or 'seed'");
  if (seed) return build_instance(n, k, get_count(*seed, join(path, "seed")), penalty);

  const auto wpath = join(path, "weights");
  if (!weights->is_array() || weights->size() != n) bad_field(wpath, "expected " + std::to_string(n) + " rows");
  Eigen::MatrixXd w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = (*weights)[i];
    const auto rpath = wpath + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != n) bad_field(rpath, "expected " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) {
      const auto epath = rpath + "[" + std::to_string(c) + "]";
      const double value = get_number(row[c], epath);
      if (i != c && !(value >= 0.0)) bad_field(epath, "weights must be non-negative");
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = value;
    }
  }
  return build_instance(n, k, w, penalty);
}

inline OptimizerConfig parse_optimizer(const json& j, const std::string& path) {
  using namespace detail;
  if (!j.is_object()) bad_field(path, "expected an object");
  OptimizerConfig config;
  if (const json* v = find(j, "kind")) {
    const auto name = get_string(*v, join(path, "kind"));
    const auto kind = vrpvqe::parse_optimizer(name);
    if (!kind) bad_field(join(path, "kind"), "unknown optimizer '" + name + "'");
    config.kind = *kind;
  }
  if (const json* v = find(j, "max_evaluations")) config.max_evaluations = get_count(*v, join(path, "max_evaluations"), 1);
  if (const json* v = find(j, "tolerance")) {
    config.tolerance = get_number(*v, join(path, "tolerance"));
    if (!(config.tolerance > 0.0)) bad_field(join(path, "tolerance"), "must be positive");
  }
  if (const json* v = find(j, "initial_step")) {
    config.initial_step = get_number(*v, join(path, "initial_step"));
    if (!(config.initial_step > 0.0)) bad_field(join(path, "initial_step"), "must be positive");
  }
  if (const json* v = find(j, "seed")) config.seed = get_count(*v, join(path, "seed"));
  if (const json* s = find(j, "spsa")) {
    const auto spath = join(path, "spsa");
    if (!s->is_object()) bad_field(spath, "expected an object");
    if (const json* v = find(*s, "a")) config.spsa.a = get_number(*v, join(spath, "a"));
    if (const json* v = find(*s, "c")) config.spsa.c = get_number(*v, join(spath, "c"));
    if (const json* v = find(*s, "A")) config.spsa.stability = get_number(*v, join(spath, "A"));
  }
  return config;
}

inline json to_json(const OptimizerConfig& c) {
  return {{"kind", optimizer_name(c.kind)},
          {"max_evaluations", c.max_evaluations},
          {"tolerance", c.tolerance},
          {"initial_step", c.initial_step},
          {"seed", c.seed}};
}

/// "channel": "name" with a sibling "kappa", or {"kind", "kappa"}.
inline NoiseChannel parse_channel_spec(const json& parent, const std::string& path) {
  using namespace detail;
  const json* c = find(parent, "channel");
  if (!c) return NoiseChannel::none();
  if (c->is_object()) {
    NoiseChannel ch{get_channel_kind(need(*c, "kind", join(path, "channel")), join(path, "channel.kind")), 0.0};
    if (const json* k = find(*c, "kappa")) ch.kappa = get_kappa(*k, join(path, "channel.kappa"));
    return ch;
  }
  NoiseChannel ch{get_channel_kind(*c, join(path, "channel")), 0.0};
  if (const json* k = find(parent, "kappa")) ch.kappa = get_kappa(*k, join(path, "kappa"));
  return ch;
}

enum class BackendChoice { Statevector, Density, Trajectories };

inline std::optional<BackendChoice> parse_backend_choice(const std::string& name) {
  if (name == "statevector") return BackendChoice::Statevector;
  if (name == "density") return BackendChoice::Density;
  if (name == "trajectories") return BackendChoice::Trajectories;
  return std::nullopt;
}

struct VqeRunConfig {
  VrpInstance instance;
  std::size_t layers = 2;
  NoiseChannel channel{};
  NoisePlacement placement = NoisePlacement::AfterEachLayer;
  BackendChoice backend = BackendChoice::Statevector;
  std::size_t n_traj = 1000;
  OptimizerConfig optimizer{};
  std::uint64_t seed = 0;
  std::size_t starts = 1;
};

inline VqeRunConfig parse_vqe_config(const json& j, const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  if (!j.is_object()) bad_field("<root>", "expected an object");
  VqeRunConfig c;
  c.instance = parse_instance(need(j, "instance", ""), base_dir, "instance");
  if (const json* v = find(j, "layers")) c.layers = get_count(*v, "layers", 1);
  c.channel = parse_channel_spec(j, "");
  if (const json* v = find(j, "placement")) c.placement = get_placement(*v, "placement");
  if (const json* v = find(j, "backend")) {
    const auto name = get_string(*v, "backend");
    const auto b = parse_backend_choice(name);
    if (!b) bad_field("backend", "unknown backend '" + name + "'");
    c.backend = *b;
  }
  if (const json* v = find(j, "n_traj")) c.n_traj = get_count(*v, "n_traj", 1);
  if (const json* v = find(j, "optimizer")) c.optimizer = parse_optimizer(*v, "optimizer");
  if (const json* v = find(j, "seed")) c.seed = get_count(*v, "seed");
  if (const json* v = find(j, "starts")) c.starts = get_count(*v, "starts", 1);
  return c;
}

inline Backend make_backend(BackendChoice choice, std::size_t n_traj, std::size_t jobs = 1) {
  switch (choice) {
    case BackendChoice::Statevector: return StatevectorBackend{};
    case BackendChoice::Density: return DensityBackend{};
    case BackendChoice::Trajectories: return TrajectoryBackend{n_traj, jobs};
  }
  return StatevectorBackend{};
}

inline SweepConfig parse_sweep_config(const json& j, const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  if (!j.is_object()) bad_field("<root>", "expected an object");
  SweepConfig c;
  c.instance = parse_instance(need(j, "instance", ""), base_dir, "instance");
  if (const json* v = find(j, "layers")) {
    if (!v->is_array()) bad_field("layers", "expected an array");
    c.layers.clear();
    for (std::size_t i = 0; i < v->size(); ++i)
      c.layers.push_back(get_count((*v)[i], "layers[" + std::to_string(i) + "]", 1));
  }
  const json& channels = need(j, "channels", "");
  if (!channels.is_array()) bad_field("channels", "expected an array");
  for (std::size_t i = 0; i < channels.size(); ++i)
    c.channels.push_back(get_channel_kind(channels[i], "channels[" + std::to_string(i) + "]"));
  if (const json* v = find(j, "kappa_grid")) {
    if (!v->is_array()) bad_field("kappa_grid", "expected an array");
    c.kappa_grid.clear();
    for (std::size_t i = 0; i < v->size(); ++i)
      c.kappa_grid.push_back(get_kappa((*v)[i], "kappa_grid[" + std::to_string(i) + "]"));
  }
  if (const json* v = find(j, "repetitions")) c.repetitions = get_count(*v, "repetitions", 1);
  if (const json* v = find(j, "optimizer")) c.optimizer = parse_optimizer(*v, "optimizer");
  if (const json* v = find(j, "backend")) {
    const auto name = get_string(*v, "backend");
    if (name == "density") c.backend = BackendPolicy::Density;
    else if (name == "trajectories") c.backend = BackendPolicy::Trajectories;
    else if (name == "auto") c.backend = BackendPolicy::Auto;
    else bad_field("backend", "unknown sweep backend '" + name + "' (density, trajectories or auto)");
  }
  if (const json* v = find(j, "n_traj")) c.n_traj = get_count(*v, "n_traj", 1);
  if (const json* v = find(j, "placement")) c.placement = get_placement(*v, "placement");
  if (const json* v = find(j, "base_seed")) c.base_seed = get_count(*v, "base_seed");
  if (c.channels.empty()) bad_field("channels", "must not be empty");
  if (c.layers.empty()) bad_field("layers", "must not be empty");
  if (c.kappa_grid.empty()) bad_field("kappa_grid", "must not be empty");
  return c;
}

inline json routes_to_json(const DecodeResult& decoded) {
  if (const auto* r = std::get_if<RouteSet>(&decoded)) return r->routes;
  return "infeasible";
}

inline json solve_result(const VrpInstance& instance) {
  const IsingForm ising = qubo_to_ising(build_qubo(instance));
  const GroundState ground = brute_force_minimum(ising);
  const DecodeResult decoded = decode_routes(instance, ground.assignment);
  json out{{"classical_min", ground.energy},
           {"assignment", ground.assignment.to_string()},
           {"routes", routes_to_json(decoded)},
           {"d", ising.d}};
  if (const auto* r = std::get_if<RouteSet>(&decoded)) out["vrp_cost"] = r->total_cost;
  else {
    out["vrp_cost"] = nullptr;
    out["reason"] = std::get<Infeasible>(decoded).reason;
  }
  return out;
}

inline json to_json(const VqeResult& r) {
  json history = json::array();
  for (const auto& e : r.history) history.push_back({e.index, e.energy});
  return {{"best_energy", r.best_energy},
          {"best_params", r.best_params},
          {"evaluations_used", r.evaluations_used},
          {"history", std::move(history)}};
}

inline json to_json(const MultiStartResult& m) {
  json out = to_json(m.best());
  out["best_start"] = m.best_start;
  json starts = json::array();
  for (std::size_t s = 0; s < m.starts.size(); ++s)
    starts.push_back({{"seed", m.seeds[s]},
                      {"best_energy", m.starts[s].best_energy},
                      {"evaluations_used", m.starts[s].evaluations_used}});
  out["starts"] = std::move(starts);
  return out;
}

inline json to_json(const ParameterizedCircuit& circuit) {
  json gates = json::array();
  for (const Gate& g : circuit.gates) {
    json gate{{"gate", gate_name(g.kind)}};
    if (g.kind == GateKind::Cnot) gate["qubits"] = {g.qubits[0], g.qubits[1]};
    else gate["qubits"] = {g.qubits[0]};
    const std::size_t n_angles = g.kind == GateKind::Phase ? 1 : g.kind == GateKind::U ? 3 : 0;
    json angles = json::array();
    for (std::size_t a = 0; a < n_angles; ++a) {
      const Angle& ang = g.angles[a];
      if (ang.slot) angles.push_back({{"offset", ang.offset}, {"slot", *ang.slot}, {"scale", ang.scale}});
      else angles.push_back(ang.offset);
    }
    if (n_angles) gate["angles"] = std::move(angles);
    gates.push_back(std::move(gate));
  }
  return {{"num_qubits", circuit.num_qubits},
          {"layers", circuit.layers},
          {"layer_ends", circuit.layer_ends},
          {"gates", std::move(gates)}};
}

}  // namespace vrpvqe::io
