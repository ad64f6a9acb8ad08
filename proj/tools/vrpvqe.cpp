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

// vrpvqe: exact solve, single VQE run, noise sweep and self-validation.
//
// Exit codes: 0 ok, 1 validation failure, 2 config error, 3 size guard,
// 4 backend/channel incompatibility.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <system_error>

#include "CLI11.hpp"
#include "vrpvqe/experiment.hpp"
#include "vrpvqe/io.hpp"
#include "vrpvqe/validate.hpp"
#include "vrpvqe/vqe.hpp"

namespace fs = std::filesystem;
using vrpvqe::ErrorKind;
using vrpvqe::io::json;

namespace {

enum Exit : int { kOk = 0, kValidation = 1, kConfig = 2, kGuard = 3, kIncompatible = 4 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Guard: return kGuard;
    case ErrorKind::Incompatible: return kIncompatible;
    case ErrorKind::Numerical: return kValidation;
    default: return kConfig;
  }
}

struct Common {
  std::string config;
  std::string out;
  std::size_t jobs = 1;
  std::string backend;
  bool allow_large_density = false;
};

std::optional<std::uint64_t> seed_override() {
  const char* env = std::getenv("VRPVQE_SEED");
  if (!env || !*env) return std::nullopt;
  const std::string text(env);
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    vrpvqe::fail(ErrorKind::Config, "VRPVQE_SEED must be a non-negative integer (got '" + text + "')");
  return value;
}

json load(const std::string& path) {
  if (path.empty()) vrpvqe::fail(ErrorKind::Config, "--config is required");
  return vrpvqe::io::read_json_file(path);
}

fs::path base_dir(const std::string& path) { return fs::path(path).parent_path(); }

void emit(const json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) vrpvqe::fail(ErrorKind::Io, "cannot open " + out + " for writing");
  file << text;
  if (!file.flush()) vrpvqe::fail(ErrorKind::Io, "write to " + out + " failed");
}

vrpvqe::SimulatorLimits limits_for(const Common& c) {
  vrpvqe::SimulatorLimits limits;
  limits.allow_large_density = c.allow_large_density;
  return limits;
}

int cmd_solve(const Common& c) {
  const json doc = load(c.config);
  const json& inst = doc.contains("instance") ? doc.at("instance") : doc;
  emit(vrpvqe::io::solve_result(vrpvqe::io::parse_instance(inst, base_dir(c.config))), c.out);
  return kOk;
}

int cmd_vqe(const Common& c) {
  auto config = vrpvqe::io::parse_vqe_config(load(c.config), base_dir(c.config));
  if (auto s = seed_override()) config.seed = *s;
  if (!c.backend.empty()) {
    const auto choice = vrpvqe::io::parse_backend_choice(c.backend);
    if (!choice) vrpvqe::fail(ErrorKind::Config, "unknown --backend '" + c.backend + "'");
    config.backend = *choice;
  }
  const auto ising = vrpvqe::qubo_to_ising(vrpvqe::build_qubo(config.instance));
  // Starts run in parallel when there are several, otherwise the trajectory
  // loop gets the threads.
  const std::size_t start_jobs = config.starts > 1 ? c.jobs : 1;
  const auto backend =
      vrpvqe::io::make_backend(config.backend, config.n_traj, config.starts > 1 ? std::size_t{1} : c.jobs);
  const auto result = vrpvqe::vqe_multistart(ising, config.layers, config.channel, config.placement, backend,
                                             config.optimizer, config.seed, config.starts, start_jobs, limits_for(c));
  json out = vrpvqe::io::to_json(result);
  out["qubits"] = ising.dim;
  out["layers"] = config.layers;
  out["channel"] = vrpvqe::channel_name(config.channel.kind);
  out["kappa"] = config.channel.kappa;
  out["backend"] = vrpvqe::backend_name(backend);
  out["seed"] = config.seed;
  out["optimizer"] = vrpvqe::io::to_json(config.optimizer);
  emit(out, c.out);
  return kOk;
}

int cmd_sweep(const Common& c) {
  auto config = vrpvqe::io::parse_sweep_config(load(c.config), base_dir(c.config));
  if (auto s = seed_override()) config.base_seed = *s;
  if (!c.backend.empty()) {
    if (c.backend == "density") config.backend = vrpvqe::BackendPolicy::Density;
    else if (c.backend == "trajectories") config.backend = vrpvqe::BackendPolicy::Trajectories;
    else vrpvqe::fail(ErrorKind::Config, "sweep --backend must be density or trajectories");
  }
  config.limits = limits_for(c);
  if (c.out.empty()) vrpvqe::fail(ErrorKind::Config, "--out DIR is required for sweep");

  const auto records = vrpvqe::run_sweep(config, c.jobs);
  const fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) vrpvqe::fail(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  vrpvqe::write_csv(records, (dir / "raw.csv").string());
  vrpvqe::write_csv(vrpvqe::aggregate(records), (dir / "aggregate.csv").string());

  std::size_t failed = 0;
  std::ostringstream log;
  for (const auto& r : records)
    if (r.failed) {
      ++failed;
      log << "layers=" << r.layers << " channel=" << vrpvqe::channel_name(r.channel)
          << " kappa=" << vrpvqe::format_number(r.kappa) << " repetition=" << r.repetition << ": " << r.error << '\n';
    }
  if (failed) {
    std::ofstream side(dir / "failed_cells.log", std::ios::binary);
    side << log.str();
    std::cerr << "vrpvqe: " << failed << " of " << records.size() << " runs failed; see "
              << (dir / "failed_cells.log").string() << '\n';
  }
  return kOk;
}

int cmd_validate(const Common& c, const std::string& fault) {
  if (!c.config.empty()) {
    // Config check only: schema and ranges, no simulation.
    const json doc = load(c.config);
    if (doc.is_object() && doc.contains("channels")) vrpvqe::io::parse_sweep_config(doc, base_dir(c.config));
    else if (doc.is_object() && doc.contains("layers")) vrpvqe::io::parse_vqe_config(doc, base_dir(c.config));
    else vrpvqe::io::parse_instance(doc.is_object() && doc.contains("instance") ? doc.at("instance") : doc,
                                    base_dir(c.config));
  }
  vrpvqe::ValidateOptions options;
  if (fault == "ising-field-sign") {
    options.to_ising = [](const vrpvqe::QuboForm& q) {
      auto ising = vrpvqe::qubo_to_ising(q);
      ising.h = -ising.h;
      return ising;
    };
  } else if (!fault.empty()) {
    vrpvqe::fail(ErrorKind::Config, "unknown fault '" + fault + "'");
  }
  bool ok = true;
  for (const auto& r : vrpvqe::run_validation(options)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    ok = ok && r.passed;
  }
  return ok ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VRP to Ising encoding, noisy VQE simulation and noise sweeps"};
  app.require_subcommand(1, 1);
  Common common;
  std::string fault;

  auto add_common = [&](CLI::App* sub, bool sim) {
    sub->add_option("--config", common.config, "JSON config path");
    sub->add_option("--out", common.out, "output path (file, or directory for sweep)");
    if (!sim) return;
    sub->add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--backend", common.backend, "statevector, density or trajectories");
    sub->add_flag("--allow-large-density", common.allow_large_density, "permit 11-12 qubit density matrices");
  };
  auto* solve = app.add_subcommand("solve", "exact classical minimum by enumeration");
  add_common(solve, false);
  auto* vqe = app.add_subcommand("vqe", "single (multi-start) VQE run");
  add_common(vqe, true);
  auto* sweep = app.add_subcommand("sweep", "channel x kappa x layers x repetition sweep");
  add_common(sweep, true);
  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  add_common(validate, false);
  validate->add_option("--inject-fault", fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*solve) return cmd_solve(common);
    if (*vqe) return cmd_vqe(common);
    if (*sweep) return cmd_sweep(common);
    return cmd_validate(common, fault);
  } catch (const vrpvqe::Error& e) {
    std::cerr << "vrpvqe: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "vrpvqe: " << e.what() << '\n';
    return kConfig;
  }
}
