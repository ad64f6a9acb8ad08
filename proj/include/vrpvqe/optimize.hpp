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

// Gradient-free minimizers: Nelder-Mead, SPSA and a COBYLA-style linear
// trust-region method (unconstrained).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vrpvqe/error.hpp"
#include "vrpvqe/random.hpp"

namespace vrpvqe {

enum class OptimizerKind { NelderMead, Spsa, Cobyla };

inline std::string_view optimizer_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::NelderMead: return "nelder_mead";
    case OptimizerKind::Spsa: return "spsa";
    case OptimizerKind::Cobyla: return "cobyla";
  }
  return "?";
}

inline std::optional<OptimizerKind> parse_optimizer(std::string_view name) {
  for (auto k : {OptimizerKind::NelderMead, OptimizerKind::Spsa, OptimizerKind::Cobyla})
    if (optimizer_name(k) == name) return k;
  return std::nullopt;
}

struct SpsaGains {
  double a = 0.2;
  double c = 0.1;
  double stability = 10.0;  // A in a_k = a / (k + 1 + A)^alpha
  double alpha = 0.602;
  double gamma = 0.101;
};

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Cobyla;
  std::size_t max_evaluations = 500;
  double tolerance = 1e-6;     // final simplex size / trust radius / step length
  double initial_step = 0.5;   // Nelder-Mead edge length, COBYLA starting radius
  std::uint64_t seed = 0;      // SPSA perturbations
  SpsaGains spsa{};
};

inline void check_config(const OptimizerConfig& config) {
  if (config.max_evaluations < 1) fail(ErrorKind::InvalidArgument, "max_evaluations must be at least 1");
  if (!(config.tolerance > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (!(config.initial_step > 0.0)) fail(ErrorKind::InvalidArgument, "initial_step must be positive");
}

struct Evaluation {
  std::size_t index = 0;
  double energy = 0.0;
};

struct VqeResult {
  std::vector<double> best_params;
  double best_energy = std::numeric_limits<double>::infinity();
  std::vector<Evaluation> history;
  std::size_t evaluations_used = 0;
};

using Objective = std::function<double(std::span<const double>)>;

namespace detail {

struct BudgetExhausted {};

/// Wraps the objective: records history, tracks the incumbent and enforces
/// the evaluation budget.
class Tracker {
 public:
  Tracker(const Objective& f, std::size_t budget) : f_(f), budget_(budget) {}

  double operator()(const Eigen::VectorXd& x) {
    if (result_.evaluations_used >= budget_) throw BudgetExhausted{};
    const double value = f_(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    if (!std::isfinite(value)) {
      std::ostringstream os;
      os << "objective returned " << value << " at parameters [";
      for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
      os << "]";
      fail(ErrorKind::Numerical, os.str());
    }
    result_.history.push_back({result_.evaluations_used, value});
    ++result_.evaluations_used;
    if (value < result_.best_energy) {
      result_.best_energy = value;
      result_.best_params.assign(x.data(), x.data() + x.size());
    }
    return value;
  }

  bool exhausted() const noexcept { return result_.evaluations_used >= budget_; }
  std::size_t remaining() const noexcept { return budget_ - result_.evaluations_used; }
  VqeResult take() { return std::move(result_); }

 private:
  const Objective& f_;
  std::size_t budget_;
  VqeResult result_;
};

inline void nelder_mead(Tracker& eval, Eigen::VectorXd x0, const OptimizerConfig& config) {
  const Eigen::Index n = x0.size();
  constexpr double reflect = 1.0, expand = 2.0, contract = 0.5, shrink = 0.5;

  std::vector<Eigen::VectorXd> simplex{x0};
  std::vector<double> values{eval(x0)};
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd v = x0;
    v[i] += config.initial_step;
    simplex.push_back(v);
    values.push_back(eval(v));
  }

  std::vector<std::size_t> order(simplex.size());
  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

    double size = 0.0;
    for (const auto& v : simplex) size = std::max(size, (v - simplex[best]).cwiseAbs().maxCoeff());
    if (size <= config.tolerance && values[worst] - values[best] <= config.tolerance) return;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < simplex.size(); ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + reflect * (centroid - simplex[worst]);
    const double fr = eval(xr);
    if (fr < values[best]) {
      const Eigen::VectorXd xe = centroid + expand * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Eigen::VectorXd xc =
        outside ? Eigen::VectorXd(centroid + contract * (xr - centroid))
                : Eigen::VectorXd(centroid + contract * (simplex[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = xc;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + shrink * (simplex[i] - simplex[best]);
      values[i] = eval(simplex[i]);
    }
  }
}

/// Simultaneous-perturbation stochastic approximation with the standard
/// gain sequences a_k = a / (k + 1 + A)^0.602 and c_k = c / (k + 1)^0.101.
inline void spsa(Tracker& eval, Eigen::VectorXd x, const OptimizerConfig& config) {
  const auto& gains = config.spsa;
  Rng rng(config.seed);
  eval(x);
  Eigen::VectorXd delta(x.size());
  for (std::size_t k = 0;; ++k) {
    // The perturbed points never coincide with the iterate, so keep one
    // evaluation back for it.
    if (eval.remaining() < 3) {
      eval(x);
      return;
    }
    const double ak = gains.a / std::pow(static_cast<double>(k) + 1.0 + gains.stability, gains.alpha);
    const double ck = gains.c / std::pow(static_cast<double>(k) + 1.0, gains.gamma);
    for (Eigen::Index i = 0; i < x.size(); ++i) delta[i] = rademacher(rng);
    const double plus = eval(x + ck * delta);
    const double minus = eval(x - ck * delta);
    // delta_i = +-1, so 1/delta_i = delta_i.
    const Eigen::VectorXd gradient = ((plus - minus) / (2.0 * ck)) * delta;
    const Eigen::VectorXd step = ak * gradient;
    x -= step;
    if (step.cwiseAbs().maxCoeff() <= config.tolerance) {
      eval(x);
      return;
    }
  }
}

/// Powell-style linear-approximation trust region without constraints.
///
/// Keeps n+1 interpolation points with the incumbent as the base vertex,
/// fits the linear model through them and steps a distance rho along the
/// model's steepest descent. The trust radius rho halves whenever a step
/// fails to achieve a tenth of the predicted decrease on a well-shaped
/// simplex, and the method stops once rho falls below the tolerance.
inline void cobyla(Tracker& eval, Eigen::VectorXd x0, const OptimizerConfig& config) {
  const Eigen::Index n = x0.size();
  const double rho_end = config.tolerance;
  double rho = std::max(config.initial_step, rho_end);
  constexpr double far_factor = 2.1;   // vertices beyond far_factor * rho are pulled in
  constexpr double flat_factor = 0.25;  // minimum acceptable vertex height relative to rho

  std::vector<Eigen::VectorXd> points{x0};
  std::vector<double> values{eval(x0)};
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd v = x0;
    v[i] += rho;
    points.push_back(v);
    values.push_back(eval(v));
  }

  auto move_best_to_front = [&] {
    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    std::swap(points[0], points[best]);
    std::swap(values[0], values[best]);
  };

  for (;;) {
    move_best_to_front();
    Eigen::MatrixXd offsets(n, n);  // row i: points[i+1] - points[0]
    Eigen::VectorXd diffs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      offsets.row(i) = (points[static_cast<std::size_t>(i) + 1] - points[0]).transpose();
      diffs[i] = values[static_cast<std::size_t>(i) + 1] - values[0];
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(offsets);
    const bool degenerate = !lu.isInvertible();

    // Geometry check: each vertex close enough, and far enough from the
    // hyperplane through the others (height = 1 / ||row of inverse||).
    Eigen::Index worst_vertex = -1;
    Eigen::MatrixXd inverse;
    if (!degenerate) {
      inverse = lu.inverse();  // columns are the dual basis
      double worst_score = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double distance = offsets.row(i).norm();
        const double height = 1.0 / inverse.col(i).norm();
        double score = 0.0;
        if (distance > far_factor * rho) score = distance / rho;
        else if (height < flat_factor * rho) score = rho / height;
        if (score > worst_score) {
          worst_score = score;
          worst_vertex = i;
        }
      }
    }

    if (degenerate || worst_vertex >= 0) {
      // Replace the offending vertex (or the farthest one if the simplex
      // collapsed) by a point at distance rho along its dual direction.
      Eigen::Index target = worst_vertex;
      Eigen::VectorXd direction;
      if (degenerate) {
        offsets.rowwise().norm().maxCoeff(&target);
        Eigen::FullPivLU<Eigen::MatrixXd> others(offsets);
        const Eigen::MatrixXd kernel = others.kernel();
        direction = kernel.col(0);
      } else {
        direction = inverse.col(target);
      }
      if (direction.norm() == 0.0) {
        direction = Eigen::VectorXd::Zero(n);
        direction[target] = 1.0;
      }
      direction *= rho / direction.norm();
      const Eigen::VectorXd candidate = points[0] + direction;
      const double fc = eval(candidate);
      points[static_cast<std::size_t>(target) + 1] = candidate;
      values[static_cast<std::size_t>(target) + 1] = fc;
      continue;
    }

    const Eigen::VectorXd gradient = lu.solve(diffs);
    const double gnorm = gradient.norm();
    bool reduce = gnorm == 0.0;
    if (!reduce) {
      const Eigen::VectorXd step = -(rho / gnorm) * gradient;
      const Eigen::VectorXd trial = points[0] + step;
      const double ft = eval(trial);
      const double predicted = rho * gnorm;
      const double actual = values[0] - ft;

      // Swap the trial in for the vertex it best replaces: largest
      // coefficient of step in the vertex basis keeps the simplex fat.
      const Eigen::VectorXd coeffs = inverse.transpose() * step;
      Eigen::Index replace = 0;
      coeffs.cwiseAbs().maxCoeff(&replace);
      points[static_cast<std::size_t>(replace) + 1] = trial;
      values[static_cast<std::size_t>(replace) + 1] = ft;
      reduce = actual < 0.1 * predicted;
    }
    if (reduce) {
      if (rho <= rho_end) return;
      rho = std::max(0.5 * rho, rho_end);
    }
  }
}

}  // namespace detail

/// Minimizes `objective` from `initial`. Stops when the method's step-size
/// tolerance is met or the evaluation budget runs out; either way the
/// incumbent is returned. The first evaluation is always `initial`.
inline VqeResult minimize(const Objective& objective, std::size_t dim, const OptimizerConfig& config,
                          std::span<const double> initial) {
  check_config(config);
  if (initial.size() != dim)
    fail(ErrorKind::InvalidArgument, "initial point has " + std::to_string(initial.size()) + " entries, expected " +
                                         std::to_string(dim));
  detail::Tracker tracker(objective, config.max_evaluations);
  Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(initial.data(), static_cast<Eigen::Index>(dim));
  try {
    switch (config.kind) {
      case OptimizerKind::NelderMead: detail::nelder_mead(tracker, x0, config); break;
      case OptimizerKind::Spsa: detail::spsa(tracker, x0, config); break;
      case OptimizerKind::Cobyla: detail::cobyla(tracker, x0, config); break;
    }
  } catch (const detail::BudgetExhausted&) {
  }
  return tracker.take();
}

}  // namespace vrpvqe
