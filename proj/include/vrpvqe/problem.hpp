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

// Vehicle routing instances and their penalty encodings.
//
// A routing instance over n nodes (node 0 is the depot) uses one binary
// variable x(i,j) per ordered pair i != j, flattened row-major with the
// diagonal skipped:
//
//   x(0,1), x(0,2), ..., x(0,n-1), x(1,0), x(1,2), ..., x(n-1,n-2)
//
// The penalty Hamiltonian is
//
//   H = sum w_ij x_ij
//     + A sum_{i>0} (1 - out_i)^2 + A sum_{i>0} (1 - in_i)^2
//     + A (k - out_0)^2 + A (k - in_0)^2
//
// where out_i / in_i count the chosen edges leaving / entering node i.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "vrpvqe/error.hpp"
#include "vrpvqe/random.hpp"

namespace vrpvqe {

/// Number of decision variables for an n-node instance.
constexpr std::size_t variable_count(std::size_t n) noexcept { return n * (n - 1); }

/// Position of x(i,j) in the flattened variable vector.
constexpr std::size_t variable_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
  return i * (n - 1) + (j < i ? j : j - 1);
}

/// Inverse of variable_index: the directed edge (i, j) stored at `index`.
constexpr std::pair<std::size_t, std::size_t> variable_edge(std::size_t n, std::size_t index) noexcept {
  const std::size_t i = index / (n - 1);
  const std::size_t r = index % (n - 1);
  return {i, r < i ? r : r + 1};
}

struct VrpInstance {
  std::size_t n = 0;  // nodes including the depot
  std::size_t k = 0;  // vehicles
  Eigen::MatrixXd weights;  // n x n, diagonal unused
  double penalty_a = 0.0;

  std::size_t num_variables() const noexcept { return variable_count(n); }

  /// Edge weights in variable order.
  Eigen::VectorXd weight_vector() const {
    Eigen::VectorXd w(num_variables());
    for (std::size_t a = 0; a < num_variables(); ++a) {
      const auto [i, j] = variable_edge(n, a);
      w[static_cast<Eigen::Index>(a)] = weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return w;
  }
};

/// Smallest integer penalty strictly above the total edge weight, so that
/// any constraint violation costs more than every feasible tour set.
inline double default_penalty(const Eigen::MatrixXd& weights) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < weights.rows(); ++i)
    for (Eigen::Index j = 0; j < weights.cols(); ++j)
      if (i != j) total += weights(i, j);
  return std::ceil(total) + 1.0;
}

namespace detail {

inline void check_shape(std::size_t n, std::size_t k) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "n must be at least 2 (got " + std::to_string(n) + ")");
  if (k < 1 || k > n - 1)
    fail(ErrorKind::InvalidArgument,
         "k must lie in [1, n-1] = [1, " + std::to_string(n - 1) + "] (got " + std::to_string(k) + ")");
}

}  // namespace detail

/// Builds an instance from an explicit weight matrix. A penalty of
/// std::nullopt selects default_penalty().
inline VrpInstance build_instance(std::size_t n, std::size_t k, const Eigen::MatrixXd& weights,
                                  std::optional<double> penalty_a = std::nullopt) {
  detail::check_shape(n, k);
  const auto size = static_cast<Eigen::Index>(n);
  if (weights.rows() != size || weights.cols() != size)
    fail(ErrorKind::InvalidArgument, "weights must be " + std::to_string(n) + "x" + std::to_string(n));
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = 0; j < size; ++j) {
      if (i == j) continue;
      if (!std::isfinite(weights(i, j)) || weights(i, j) < 0.0)
        fail(ErrorKind::InvalidArgument,
             "weight w(" + std::to_string(i) + "," + std::to_string(j) + ") must be finite and non-negative");
    }
  const double a = penalty_a.value_or(default_penalty(weights));
  if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorKind::InvalidArgument, "penalty_a must be positive");

  VrpInstance instance{n, k, weights, a};
  instance.weights.diagonal().setZero();
  return instance;
}

/// Seeded instance: every off-diagonal weight drawn independently and
/// uniformly from [1, 10), row-major, from std::mt19937_64(seed).
inline VrpInstance build_instance(std::size_t n, std::size_t k, std::uint64_t seed,
                                  std::optional<double> penalty_a = std::nullopt) {
  detail::check_shape(n, k);
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(size, size);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = 0; j < size; ++j)
      if (i != j) weights(i, j) = uniform(rng, 1.0, 10.0);
  return build_instance(n, k, weights, penalty_a);
}

/// A 0/1 vector in variable order.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) require(b <= 1, "assignment bits must be 0 or 1");
  }

  /// Assignment whose bitstring, read with x(0,1) as the most significant
  /// bit, equals `value`.
  static Assignment from_integer(std::uint64_t value, std::size_t dim) {
    std::vector<std::uint8_t> bits(dim);
    for (std::size_t i = 0; i < dim; ++i) bits[i] = static_cast<std::uint8_t>((value >> (dim - 1 - i)) & 1U);
    return Assignment(std::move(bits));
  }

  static Assignment parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char ch : text) {
      if (ch != '0' && ch != '1') fail(ErrorKind::InvalidArgument, "assignment strings contain only '0' and '1'");
      bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return Assignment(std::move(bits));
  }

  std::uint64_t to_integer() const noexcept {
    std::uint64_t value = 0;
    for (auto b : bits_) value = (value << 1U) | b;
    return value;
  }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// x^T Q x + g^T x + c.
struct QuboForm {
  std::size_t dim = 0;
  Eigen::MatrixXd q;
  Eigen::VectorXd g;
  double c = 0.0;
};

/// -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i + d, with s = 2x - 1.
/// Only the strict upper triangle of j is populated.
struct IsingForm {
  std::size_t dim = 0;
  Eigen::MatrixXd j;
  Eigen::VectorXd h;
  double d = 0.0;
};

/// Source and target indicator vectors: row i of `source` marks the
/// variables x(i, *), row i of `target` marks x(*, i).
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> degree_indicators(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(variable_count(n));
  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd source = Eigen::MatrixXd::Zero(rows, m);
  Eigen::MatrixXd target = Eigen::MatrixXd::Zero(rows, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto [i, j] = variable_edge(n, static_cast<std::size_t>(a));
    source(static_cast<Eigen::Index>(i), a) = 1.0;
    target(static_cast<Eigen::Index>(j), a) = 1.0;
  }
  return {source, target};
}

/// Expands the penalty Hamiltonian into QUBO coefficients:
///   Q = A (S^T S + T^T T)
///   g = w - 2A sum_{i>0} (s_i + t_i) - 2Ak (s_0 + t_0)
///   c = 2A(n-1) + 2Ak^2
/// where s_i / t_i are the rows of the source / target indicators. The
/// source part S^T S is the block-diagonal I_n (x) J_{n-1}.
inline QuboForm build_qubo(const VrpInstance& instance) {
  const auto [source, target] = degree_indicators(instance.n);
  const double a = instance.penalty_a;
  const auto k = static_cast<double>(instance.k);
  const auto n = static_cast<double>(instance.n);

  QuboForm qubo;
  qubo.dim = instance.num_variables();
  qubo.q = a * (source.transpose() * source + target.transpose() * target);

  const auto customers = static_cast<Eigen::Index>(instance.n - 1);
  const Eigen::VectorXd customer_degrees =
      (source.bottomRows(customers).colwise().sum() + target.bottomRows(customers).colwise().sum()).transpose();
  const Eigen::VectorXd depot_degrees = (source.row(0) + target.row(0)).transpose();
  qubo.g = instance.weight_vector() - 2.0 * a * customer_degrees - 2.0 * a * k * depot_degrees;
  qubo.c = 2.0 * a * (n - 1.0) + 2.0 * a * k * k;
  return qubo;
}

/// Substitutes x = (s + 1) / 2. Both triangles of Q feed each coupling, and
/// the diagonal of Q contributes to the offset since s_i^2 = 1.
inline IsingForm qubo_to_ising(const QuboForm& qubo) {
  const auto m = static_cast<Eigen::Index>(qubo.dim);
  IsingForm ising;
  ising.dim = qubo.dim;
  ising.j = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) ising.j(i, j) = -(qubo.q(i, j) + qubo.q(j, i)) / 4.0;
  ising.h = -(qubo.g / 2.0 + (qubo.q.rowwise().sum() + qubo.q.colwise().sum().transpose()) / 4.0);
  ising.d = qubo.c + qubo.g.sum() / 2.0 + qubo.q.sum() / 4.0 + qubo.q.trace() / 4.0;
  return ising;
}

inline double evaluate_qubo(const QuboForm& qubo, const Assignment& x) {
  if (x.size() != qubo.dim)
    fail(ErrorKind::InvalidArgument, "assignment length " + std::to_string(x.size()) + " does not match QUBO dim " +
                                         std::to_string(qubo.dim));
  const auto m = static_cast<Eigen::Index>(qubo.dim);
  Eigen::VectorXd v(m);
  for (Eigen::Index i = 0; i < m; ++i) v[i] = x[static_cast<std::size_t>(i)];
  return v.dot(qubo.q * v) + qubo.g.dot(v) + qubo.c;
}

inline double evaluate_ising(const IsingForm& ising, const Assignment& x) {
  if (x.size() != ising.dim)
    fail(ErrorKind::InvalidArgument, "assignment length " + std::to_string(x.size()) +
                                         " does not match Ising dim " + std::to_string(ising.dim));
  const auto m = static_cast<Eigen::Index>(ising.dim);
  Eigen::VectorXd s(m);
  for (Eigen::Index i = 0; i < m; ++i) s[i] = 2.0 * x[static_cast<std::size_t>(i)] - 1.0;
  double energy = ising.d - ising.h.dot(s);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) energy -= ising.j(i, j) * s[i] * s[j];
  return energy;
}

struct GroundState {
  Assignment assignment;
  double energy = 0.0;
};

inline constexpr std::size_t kMaxBruteForceDim = 24;

/// Exact minimum over all 2^dim assignments. Ties (within 1e-12 relative)
/// resolve to the smallest bitstring integer, x(0,1) most significant.
inline GroundState brute_force_minimum(const IsingForm& ising) {
  const std::size_t m = ising.dim;
  if (m > kMaxBruteForceDim)
    fail(ErrorKind::Guard, "brute-force enumeration limited to " + std::to_string(kMaxBruteForceDim) +
                               " variables (got " + std::to_string(m) + ")");

  struct Coupling {
    unsigned a, b;
    double value;
  };
  std::vector<Coupling> couplings;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = ising.j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0) couplings.push_back({static_cast<unsigned>(i), static_cast<unsigned>(j), v});
    }

  // Variable i lives at bit (m-1-i) of the enumeration counter.
  std::vector<double> spin(m);
  std::uint64_t best_value = 0;
  double best_energy = std::numeric_limits<double>::infinity();
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t value = 0; value < count; ++value) {
    for (std::size_t i = 0; i < m; ++i) spin[i] = ((value >> (m - 1 - i)) & 1U) ? 1.0 : -1.0;
    double energy = ising.d;
    for (std::size_t i = 0; i < m; ++i) energy -= ising.h[static_cast<Eigen::Index>(i)] * spin[i];
    for (const auto& c : couplings) energy -= c.value * spin[c.a] * spin[c.b];
    const double tie = 1e-12 * std::max(1.0, std::abs(best_energy));
    if (energy < best_energy - tie || !std::isfinite(best_energy)) {
      best_energy = energy;
      best_value = value;
    }
  }
  return {Assignment::from_integer(best_value, m), best_energy};
}

struct RouteSet {
  std::vector<std::vector<std::size_t>> routes;  // each starts and ends at 0
  double total_cost = 0.0;
};

struct Infeasible {
  std::string reason;
};

using DecodeResult = std::variant<RouteSet, Infeasible>;

inline double vrp_cost(const VrpInstance& instance, const RouteSet& routes) {
  if (routes.routes.empty()) fail(ErrorKind::InvalidArgument, "route set has no routes");
  double cost = 0.0;
  for (const auto& route : routes.routes) {
    if (route.size() < 2) fail(ErrorKind::InvalidArgument, "route has no edges");
    for (std::size_t node : route)
      if (node >= instance.n) fail(ErrorKind::InvalidArgument, "route references node " + std::to_string(node));
    for (std::size_t s = 0; s + 1 < route.size(); ++s)
      cost += instance.weights(static_cast<Eigen::Index>(route[s]), static_cast<Eigen::Index>(route[s + 1]));
  }
  return cost;
}

/// Checks every degree constraint, then follows edges out of the depot.
/// Reports the first violated constraint, customers in ascending order
/// first, out-degree before in-degree.
inline DecodeResult decode_routes(const VrpInstance& instance, const Assignment& x) {
  const std::size_t n = instance.n;
  if (x.size() != instance.num_variables())
    fail(ErrorKind::InvalidArgument, "assignment length does not match instance");

  std::vector<std::size_t> out_degree(n, 0), in_degree(n, 0);
  std::vector<std::size_t> successor(n, n);
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (!x[a]) continue;
    const auto [i, j] = variable_edge(n, a);
    ++out_degree[i];
    ++in_degree[j];
    if (i != 0) successor[i] = j;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (out_degree[i] != 1) return Infeasible{"node " + std::to_string(i) + " out-degree " + std::to_string(out_degree[i])};
    if (in_degree[i] != 1) return Infeasible{"node " + std::to_string(i) + " in-degree " + std::to_string(in_degree[i])};
  }
  if (out_degree[0] != instance.k)
    return Infeasible{"depot out-degree " + std::to_string(out_degree[0]) + " (expected " + std::to_string(instance.k) + ")"};
  if (in_degree[0] != instance.k)
    return Infeasible{"depot in-degree " + std::to_string(in_degree[0]) + " (expected " + std::to_string(instance.k) + ")"};

  RouteSet result;
  std::vector<bool> visited(n, false);
  for (std::size_t j = 1; j < n; ++j) {
    if (!x[variable_index(n, 0, j)]) continue;
    std::vector<std::size_t> route{0};
    std::size_t node = j;
    // Unit in/out degrees guarantee the walk returns to the depot.
    while (node != 0) {
      route.push_back(node);
      visited[node] = true;
      node = successor[node];
    }
    route.push_back(0);
    result.routes.push_back(std::move(route));
  }
  for (std::size_t i = 1; i < n; ++i)
    if (!visited[i]) return Infeasible{"node " + std::to_string(i) + " on a subtour detached from the depot"};
  result.total_cost = vrp_cost(instance, result);
  return result;
}

}  // namespace vrpvqe
