// Copyright 2026 The DEAL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deal/problems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <utility>

#include "deal/errors.hpp"
#include "deal/random.hpp"

namespace deal {

namespace {

double tolerance_for(double energy) { return 1e-9 * std::max(1.0, std::abs(energy)); }

// Symmetric view with the diagonal kept once.
Eigen::MatrixXd symmetric_offdiagonal(const Eigen::MatrixXd& q) {
  Eigen::MatrixXd s = q + q.transpose();
  s.diagonal().setZero();
  return s;
}

}  // namespace

std::string to_bitstring(std::uint64_t index, int n) {
  std::string bits(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q) {
    if (bit_of(index, q)) bits[static_cast<std::size_t>(n - 1 - q)] = '1';
  }
  return bits;
}

std::uint64_t from_bitstring(std::string_view bits) {
  if (bits.size() > 63) throw InvalidArgument("bitstring longer than 63 characters");
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InvalidArgument("bitstring may only contain '0' and '1'");
    index = (index << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return index;
}

void Graph::validate() const {
  if (node_count < 0) throw InvalidArgument("graph node count must be non-negative");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.i == e.j) throw InvalidArgument("graph has a self-loop on node " + std::to_string(e.i));
    if (e.i > e.j) throw InvalidArgument("graph edges must be stored with i < j");
    if (e.i < 0 || e.j >= node_count) throw InvalidArgument("graph edge endpoint out of range");
    if (!seen.emplace(e.i, e.j).second) {
      throw InvalidArgument("duplicate edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ")");
    }
  }
}

Graph erdos_renyi(int n, double edge_prob, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("erdos_renyi requires n >= 2");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw InvalidArgument("edge probability must lie in [0, 1]");
  Rng rng(seed);
  Graph g{n, {}};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // One draw per pair keeps the stream aligned regardless of outcome.
      if (rng.uniform() < edge_prob) g.edges.push_back({i, j, 1.0});
    }
  }
  return g;
}

Graph complete_graph(int n, double weight) {
  Graph g{n, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j, weight});
  return g;
}

QuboInstance::QuboInstance(const Eigen::MatrixXd& q, std::string label, double offset)
    : label_(std::move(label)), offset_(offset) {
  if (q.rows() != q.cols()) throw InvalidArgument("QUBO matrix must be square");
  if (q.rows() < 1) throw InvalidArgument("QUBO needs at least one variable");
  if (!q.allFinite() || !std::isfinite(offset)) throw InvalidArgument("QUBO coefficients must be finite");
  const Eigen::MatrixXd lower_t = q.transpose();
  q_ = q.triangularView<Eigen::Upper>();
  q_ += lower_t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix();
}

void QuboInstance::set_known_optimum(KnownOptimum optimum) {
  if (static_cast<int>(optimum.bits.size()) != size()) {
    throw InvalidArgument("known optimum bitstring has the wrong length");
  }
  const double actual = objective(from_bitstring(optimum.bits));
  if (std::abs(actual - optimum.energy) > 1e-9) {
    throw InvalidArgument("known optimum energy does not match its bitstring");
  }
  optimum_ = std::move(optimum);
}

double QuboInstance::objective(std::uint64_t index) const {
  const int n = size();
  double total = offset_;
  for (int i = 0; i < n; ++i) {
    if (!bit_of(index, i)) continue;
    total += q_(i, i);
    for (int j = i + 1; j < n; ++j) {
      if (bit_of(index, j)) total += q_(i, j);
    }
  }
  return total;
}

double IsingHamiltonian::energy(std::uint64_t index) const {
  const int n = size();
  double total = offset;
  for (int i = 0; i < n; ++i) {
    const double zi = bit_of(index, i) ? -1.0 : 1.0;
    total += linear(i) * zi;
    for (int j = i + 1; j < n; ++j) {
      const double zj = bit_of(index, j) ? -1.0 : 1.0;
      total += quadratic(i, j) * zi * zj;
    }
  }
  return total;
}

Eigen::VectorXd diagonal_energies(const IsingHamiltonian& h) {
  const int n = h.size();
  if (n > 30) throw ResourceLimit("diagonal of more than 30 qubits requested");
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::VectorXd e = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), h.offset);
  // Accumulate term by term; each pass is a cheap sign pattern over the index.
  for (int i = 0; i < n; ++i) {
    const double hi = h.linear(i);
    if (hi != 0.0) {
      for (std::uint64_t k = 0; k < dim; ++k) e(static_cast<Eigen::Index>(k)) += bit_of(k, i) ? -hi : hi;
    }
    for (int j = i + 1; j < n; ++j) {
      const double jij = h.quadratic(i, j);
      if (jij == 0.0) continue;
      for (std::uint64_t k = 0; k < dim; ++k) {
        e(static_cast<Eigen::Index>(k)) += (bit_of(k, i) ^ bit_of(k, j)) ? -jij : jij;
      }
    }
  }
  return e;
}

IsingHamiltonian qubo_to_ising(const QuboInstance& q) {
  const int n = q.size();
  const Eigen::MatrixXd& m = q.matrix();
  IsingHamiltonian h(n);
  h.offset = q.offset();
  for (int i = 0; i < n; ++i) {
    h.offset += m(i, i) / 2.0;
    h.linear(i) -= m(i, i) / 2.0;
    for (int j = i + 1; j < n; ++j) {
      const double qij = m(i, j);
      if (qij == 0.0) continue;
      h.offset += qij / 4.0;
      h.linear(i) -= qij / 4.0;
      h.linear(j) -= qij / 4.0;
      h.quadratic(i, j) = qij / 4.0;
    }
  }
  return h;
}

BruteForceResult brute_force_optimum(const QuboInstance& q) {
  const int n = q.size();
  if (n > kMaxBruteForceQubits) {
    throw ResourceLimit("brute force limited to " + std::to_string(kMaxBruteForceQubits) + " qubits, got " +
                        std::to_string(n));
  }
  const Eigen::MatrixXd sym = symmetric_offdiagonal(q.matrix());
  const Eigen::VectorXd diag = q.matrix().diagonal();
  const std::uint64_t dim = std::uint64_t{1} << n;

  // local(k) = Q_kk + sum_{j != k} Qsym_kj x_j, the cost of switching bit k on.
  Eigen::VectorXd local = diag;
  std::uint64_t state = 0;
  double energy = q.offset();

  BruteForceResult best{0, {}, energy, 1};
  for (std::uint64_t step = 1; step < dim; ++step) {
    const int k = std::countr_zero(step);
    const bool turning_on = !bit_of(state, k);
    energy += turning_on ? local(k) : -local(k);
    state ^= std::uint64_t{1} << k;
    const double sign = turning_on ? 1.0 : -1.0;
    local += sign * sym.col(k);  // sym(k, k) == 0 leaves local(k) alone
    if ((step & 0xFFF) == 0) {
      // Resynchronise to bound accumulated rounding drift.
      energy = q.objective(state);
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x(i) = bit_of(state, i);
      local = diag + sym * x;
    }

    const double tol = tolerance_for(best.energy);
    if (energy < best.energy - tol) {
      best = {state, {}, energy, 1};
    } else if (std::abs(energy - best.energy) <= tol) {
      ++best.degeneracy;
      best.index = std::min(best.index, state);
    }
  }
  best.energy = q.objective(best.index);
  best.bits = to_bitstring(best.index, n);
  return best;
}

std::vector<std::uint64_t> optimal_indices(const QuboInstance& q, double energy) {
  if (q.size() > kMaxBruteForceQubits) throw ResourceLimit("too many qubits to enumerate optima");
  std::vector<std::uint64_t> out;
  const std::uint64_t dim = std::uint64_t{1} << q.size();
  const double tol = tolerance_for(energy);
  for (std::uint64_t k = 0; k < dim; ++k) {
    if (std::abs(q.objective(k) - energy) <= tol) out.push_back(k);
  }
  return out;
}

void attach_optimum(QuboInstance& q, int max_qubits) {
  if (q.size() > max_qubits) return;
  const auto best = brute_force_optimum(q);
  q.set_known_optimum({best.bits, best.energy});
}

QuboInstance maxcut_qubo(const Graph& g) {
  g.validate();
  if (g.node_count < 1) throw InvalidArgument("MaxCut needs at least one node");
  // -w x_i - w x_j + 2w x_i x_j  equals  -(1/2) w (1 - z_i z_j)
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(g.node_count, g.node_count);
  for (const auto& e : g.edges) {
    q(e.i, e.i) -= e.weight;
    q(e.j, e.j) -= e.weight;
    q(e.i, e.j) += 2.0 * e.weight;
  }
  QuboInstance inst(q, "maxcut");
  attach_optimum(inst);
  return inst;
}

QuboInstance tsp_qubo(const Eigen::MatrixXd& distances, double penalty) {
  const auto n = static_cast<int>(distances.rows());
  if (distances.cols() != n || n < 2) throw InvalidArgument("TSP distances must be a square matrix with n >= 2");
  if (!distances.allFinite()) throw InvalidArgument("TSP distances must be finite");
  if ((distances - distances.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidArgument("TSP distances must be symmetric");
  }
  if ((distances.array() < 0.0).any()) throw InvalidArgument("TSP distances must be non-negative");
  if (distances.diagonal().cwiseAbs().maxCoeff() > 0.0) throw InvalidArgument("TSP distances need a zero diagonal");
  if (!(penalty > 0.0)) throw InvalidArgument("TSP penalty must be positive");

  const int vars = n * n;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(vars, vars);
  auto add = [&q](int a, int b, double v) {
    if (a == b) {
      q(a, a) += v;
    } else {
      q(std::min(a, b), std::max(a, b)) += v;
    }
  };

  // Tour cost: consecutive positions (cyclic) hold cities c and c'.
  for (int t = 0; t < n; ++t) {
    const int next = (t + 1) % n;
    for (int c = 0; c < n; ++c) {
      for (int c2 = 0; c2 < n; ++c2) {
        if (c == c2 || distances(c, c2) == 0.0) continue;
        add(tsp_variable(c, t, n), tsp_variable(c2, next, n), distances(c, c2));
      }
    }
  }

  // penalty * (1 - sum x)^2 = penalty * (1 - sum x + 2 sum_{a<b} x_a x_b) for binary x,
  // once per city (row) and once per position (column).
  double offset = 0.0;
  auto one_hot = [&](auto var_of) {
    offset += penalty;
    for (int a = 0; a < n; ++a) {
      add(var_of(a), var_of(a), -penalty);
      for (int b = a + 1; b < n; ++b) add(var_of(a), var_of(b), 2.0 * penalty);
    }
  };
  for (int c = 0; c < n; ++c) one_hot([&](int t) { return tsp_variable(c, t, n); });
  for (int t = 0; t < n; ++t) one_hot([&](int c) { return tsp_variable(c, t, n); });

  QuboInstance inst(q, "tsp", offset);
  attach_optimum(inst);
  return inst;
}

std::optional<std::vector<int>> decode_tour(std::uint64_t index, int cities) {
  std::vector<int> tour(static_cast<std::size_t>(cities), -1);
  for (int c = 0; c < cities; ++c) {
    int visits = 0;
    for (int t = 0; t < cities; ++t) {
      if (!bit_of(index, tsp_variable(c, t, cities))) continue;
      ++visits;
      if (tour[static_cast<std::size_t>(t)] != -1) return std::nullopt;
      tour[static_cast<std::size_t>(t)] = c;
    }
    if (visits != 1) return std::nullopt;
  }
  return tour;
}

double tour_length(const Eigen::MatrixXd& distances, const std::vector<int>& tour) {
  double total = 0.0;
  for (std::size_t t = 0; t < tour.size(); ++t) {
    total += distances(tour[t], tour[(t + 1) % tour.size()]);
  }
  return total;
}

KnapsackLayout knapsack_layout(int items, int capacity) {
  if (capacity < 0) throw InvalidArgument("knapsack capacity must be non-negative");
  int bits = 0;
  while ((std::int64_t{1} << bits) < static_cast<std::int64_t>(capacity) + 1) ++bits;
  return {items, bits};
}

QuboInstance knapsack_qubo(const std::vector<double>& values, const std::vector<int>& weights, int capacity,
                           double penalty) {
  if (capacity < 0) throw InvalidArgument("knapsack capacity must be non-negative");
  if (values.size() != weights.size()) throw InvalidArgument("knapsack values and weights differ in length");
  if (values.empty()) throw InvalidArgument("knapsack needs at least one item");
  double value_sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] <= 0) throw InvalidArgument("knapsack weights must be positive");
    if (!std::isfinite(values[i])) throw InvalidArgument("knapsack values must be finite");
    value_sum += std::abs(values[i]);
  }
  if (!(penalty > value_sum)) throw InvalidArgument("knapsack penalty must exceed the sum of item values");

  const auto layout = knapsack_layout(static_cast<int>(values.size()), capacity);
  const int vars = layout.items + layout.slack_bits;

  // Linear form  C - sum w_i x_i - sum 2^k s_k  squared, times penalty, minus total value.
  Eigen::VectorXd coeff(vars);
  for (int i = 0; i < layout.items; ++i) coeff(i) = weights[static_cast<std::size_t>(i)];
  for (int k = 0; k < layout.slack_bits; ++k) coeff(layout.items + k) = static_cast<double>(std::int64_t{1} << k);

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(vars, vars);
  const double cap = capacity;
  for (int a = 0; a < vars; ++a) {
    q(a, a) += penalty * (coeff(a) * coeff(a) - 2.0 * cap * coeff(a));
    for (int b = a + 1; b < vars; ++b) q(a, b) += 2.0 * penalty * coeff(a) * coeff(b);
  }
  for (int i = 0; i < layout.items; ++i) q(i, i) -= values[static_cast<std::size_t>(i)];

  QuboInstance inst(q, "knapsack", penalty * cap * cap);
  attach_optimum(inst);
  return inst;
}

int maxcut_qubits(int nodes) { return nodes; }
int tsp_qubits(int cities) { return cities * cities; }
int knapsack_qubits(int items, int capacity) {
  const auto layout = knapsack_layout(items, capacity);
  return layout.items + layout.slack_bits;
}

}  // namespace deal
