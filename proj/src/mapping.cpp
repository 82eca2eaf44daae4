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

#include "deal/mapping.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <queue>
#include <set>

#include "deal/errors.hpp"
#include "deal/random.hpp"

namespace deal {

namespace {

std::vector<std::vector<std::pair<int, double>>> adjacency(const CouplingMap& cm) {
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(cm.physical_count));
  for (const auto& e : cm.edges) {
    adj[static_cast<std::size_t>(e.a)].emplace_back(e.b, e.error);
    adj[static_cast<std::size_t>(e.b)].emplace_back(e.a, e.error);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

// BFS parents from `source`; neighbours visited in ascending index order.
std::vector<int> bfs_parents(const std::vector<std::vector<std::pair<int, double>>>& adj, int source,
                             std::vector<int>& depth) {
  const auto n = adj.size();
  std::vector<int> parent(n, -1);
  depth.assign(n, -1);
  std::queue<int> frontier;
  depth[static_cast<std::size_t>(source)] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (const auto& [v, err] : adj[static_cast<std::size_t>(u)]) {
      auto& dv = depth[static_cast<std::size_t>(v)];
      if (dv != -1) continue;
      dv = depth[static_cast<std::size_t>(u)] + 1;
      parent[static_cast<std::size_t>(v)] = u;
      frontier.push(v);
    }
  }
  return parent;
}

CouplingMap heavy_hex_like(std::array<int, 4> bridge_columns, std::uint64_t seed) {
  // Two 8-qubit rows (0..7 and 12..19) joined by four bridge qubits (8..11).
  CouplingMap cm;
  cm.physical_count = 20;
  Rng rng(seed);
  auto err = [&rng] { return rng.uniform(0.004, 0.03); };
  for (int i = 0; i < 7; ++i) cm.edges.push_back({i, i + 1, err()});
  for (int i = 12; i < 19; ++i) cm.edges.push_back({i, i + 1, err()});
  for (int b = 0; b < 4; ++b) {
    const int col = bridge_columns[static_cast<std::size_t>(b)];
    cm.edges.push_back({col, 8 + b, err()});
    cm.edges.push_back({8 + b, 12 + col, err()});
  }
  for (int q = 0; q < cm.physical_count; ++q) cm.readout_error.push_back(rng.uniform(0.01, 0.05));
  return cm;
}

}  // namespace

void CouplingMap::validate() const {
  if (physical_count < 1) throw InvalidArgument("device needs at least one qubit");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.a < 0 || e.b < 0 || e.a >= physical_count || e.b >= physical_count) {
      throw InvalidArgument("coupler endpoint out of range");
    }
    if (e.a == e.b) throw InvalidArgument("coupler connects a qubit to itself");
    if (!seen.emplace(std::min(e.a, e.b), std::max(e.a, e.b)).second) {
      throw InvalidArgument("duplicate coupler");
    }
    if (!(e.error >= 0.0 && e.error < 1.0)) throw InvalidArgument("coupler error must lie in [0, 1)");
  }
  if (!readout_error.empty() && static_cast<int>(readout_error.size()) != physical_count) {
    throw InvalidArgument("readout error list must have one entry per qubit");
  }
  std::vector<int> depth;
  bfs_parents(adjacency(*this), 0, depth);
  if (std::any_of(depth.begin(), depth.end(), [](int d) { return d < 0; })) {
    throw InvalidArgument("device coupling map is disconnected");
  }
}

CouplingMap device_preset(std::string_view name) {
  if (name == "heavyhex20a") return heavy_hex_like({0, 2, 5, 7}, 0xA11CE);
  if (name == "heavyhex20b") return heavy_hex_like({1, 3, 4, 6}, 0xB0B);
  throw InvalidArgument("unknown device preset '" + std::string(name) + "'");
}

CouplingMap line_device(int n, double error) {
  CouplingMap cm{n, {}, {}};
  for (int i = 0; i + 1 < n; ++i) cm.edges.push_back({i, i + 1, error});
  return cm;
}

CouplingMap ring_device(int n, double error) {
  CouplingMap cm = line_device(n, error);
  if (n > 2) cm.edges.push_back({0, n - 1, error});
  return cm;
}

CouplingMap complete_device(int n, double error) {
  CouplingMap cm{n, {}, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) cm.edges.push_back({i, j, error});
  return cm;
}

Eigen::MatrixXi distance_matrix(const CouplingMap& cm) {
  cm.validate();
  const auto adj = adjacency(cm);
  Eigen::MatrixXi d(cm.physical_count, cm.physical_count);
  std::vector<int> depth;
  for (int s = 0; s < cm.physical_count; ++s) {
    bfs_parents(adj, s, depth);
    for (int t = 0; t < cm.physical_count; ++t) d(s, t) = depth[static_cast<std::size_t>(t)];
  }
  return d;
}

Eigen::MatrixXd path_error_matrix(const CouplingMap& cm) {
  cm.validate();
  const auto adj = adjacency(cm);
  auto edge_error = [&adj](int u, int v) {
    for (const auto& [w, err] : adj[static_cast<std::size_t>(u)]) {
      if (w == v) return err;
    }
    return 0.0;
  };
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(cm.physical_count, cm.physical_count);
  std::vector<int> depth;
  for (int s = 0; s < cm.physical_count; ++s) {
    const auto parent = bfs_parents(adj, s, depth);
    for (int t = 0; t < cm.physical_count; ++t) {
      if (t == s) continue;
      double total = 0.0;
      int hops = 0;
      for (int v = t; v != s; v = parent[static_cast<std::size_t>(v)]) {
        total += edge_error(v, parent[static_cast<std::size_t>(v)]);
        ++hops;
      }
      e(s, t) = total / hops;
    }
  }
  // BFS trees from either end may pick different shortest paths; keep the
  // matrix symmetric by using the path found from the lower index.
  const Eigen::MatrixXd upper_t = e.transpose();
  e.triangularView<Eigen::StrictlyLower>() = upper_t.triangularView<Eigen::StrictlyLower>();
  return e;
}

bool QubitMapping::injective(int physical_count) const {
  std::set<int> used;
  for (int p : pi) {
    if (p < 0 || p >= physical_count || !used.insert(p).second) return false;
  }
  return true;
}

double placement_cost(const std::vector<int>& pi, const QuboInstance& q, const Eigen::MatrixXi& distances,
                      const Eigen::MatrixXd& path_errors) {
  const Eigen::MatrixXd& m = q.matrix();
  double cost = 0.0;
  const auto n = static_cast<int>(pi.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = std::abs(m(i, j));
      if (w == 0.0) continue;
      const int a = pi[static_cast<std::size_t>(i)], b = pi[static_cast<std::size_t>(j)];
      cost += w * distances(a, b) * path_errors(a, b);
    }
  }
  return cost;
}

QubitMapping map_qubits(const ImportanceWeights& w, const QuboInstance& q, const CouplingMap& cm) {
  const int n = q.size();
  if (w.normalized.size() != n) throw InvalidArgument("weights and QUBO sizes differ");
  const Eigen::MatrixXi d = distance_matrix(cm);
  const Eigen::MatrixXd e = path_error_matrix(cm);
  const int m = cm.physical_count;
  if (n > m) {
    throw CapacityError("problem needs " + std::to_string(n) + " qubits but the device has " + std::to_string(m));
  }

  const Eigen::MatrixXd pair_cost = d.cast<double>().cwiseProduct(e);
  const Eigen::VectorXd centrality = pair_cost.rowwise().sum();
  Eigen::MatrixXd coupling = q.matrix().cwiseAbs();
  coupling.diagonal().setZero();
  coupling += coupling.transpose().eval();

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&w](int a, int b) { return w.normalized(a) > w.normalized(b); });

  // Greedy placement in descending weight order. `anchor` pins the first
  // qubit; -1 lets it fall on the least central free site.
  auto greedy = [&](int anchor) {
    std::vector<int> pi(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    std::vector<int> placed;
    for (int logical : order) {
      int best = -1;
      double best_inc = 0.0;
      for (int a = 0; a < m; ++a) {
        if (used[static_cast<std::size_t>(a)]) continue;
        if (placed.empty() && anchor >= 0 && a != anchor) continue;
        double inc = 0.0;
        for (int other : placed) inc += coupling(logical, other) * pair_cost(a, pi[static_cast<std::size_t>(other)]);
        bool better = best < 0 || inc < best_inc - 1e-12;
        if (!better && std::abs(inc - best_inc) <= 1e-12) {
          if (centrality(a) < centrality(best) - 1e-12) {
            better = true;
          } else if (std::abs(centrality(a) - centrality(best)) <= 1e-12) {
            better = a == logical && best != logical;
          }
        }
        if (better) {
          best = a;
          best_inc = inc;
        }
      }
      pi[static_cast<std::size_t>(logical)] = best;
      used[static_cast<std::size_t>(best)] = true;
      placed.push_back(logical);
    }
    return pi;
  };

  // Best-improvement local search over swaps of two logical qubits and
  // relocations onto unused physical qubits.
  auto cost_of = [&](const std::vector<int>& p) { return placement_cost(p, q, d, e); };
  auto climb = [&](std::vector<int> pi) {
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    for (int p : pi) used[static_cast<std::size_t>(p)] = true;
    double current = cost_of(pi);
    const int max_rounds = std::max(1, n * n) * std::max(1, m);
    for (int round = 0; round < max_rounds; ++round) {
      std::vector<int> best_pi;
      double best_cost = current - 1e-12 * std::max(1.0, std::abs(current));
      std::vector<int> trial = pi;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          std::swap(trial[static_cast<std::size_t>(i)], trial[static_cast<std::size_t>(j)]);
          const double c = cost_of(trial);
          if (c < best_cost) {
            best_cost = c;
            best_pi = trial;
          }
          std::swap(trial[static_cast<std::size_t>(i)], trial[static_cast<std::size_t>(j)]);
        }
        for (int a = 0; a < m; ++a) {
          if (used[static_cast<std::size_t>(a)]) continue;
          const int old = trial[static_cast<std::size_t>(i)];
          trial[static_cast<std::size_t>(i)] = a;
          const double c = cost_of(trial);
          if (c < best_cost) {
            best_cost = c;
            best_pi = trial;
          }
          trial[static_cast<std::size_t>(i)] = old;
        }
      }
      if (best_pi.empty()) break;
      pi = std::move(best_pi);
      current = best_cost;
      std::fill(used.begin(), used.end(), false);
      for (int p : pi) used[static_cast<std::size_t>(p)] = true;
    }
    return std::make_pair(pi, current);
  };

  // One restart per anchor site for the heaviest qubit; ties keep the earliest.
  auto [pi, best_cost] = climb(greedy(-1));
  for (int anchor = 0; anchor < m && n > 1; ++anchor) {
    auto [candidate, c] = climb(greedy(anchor));
    if (c < best_cost - 1e-12 * std::max(1.0, std::abs(best_cost))) {
      pi = std::move(candidate);
      best_cost = c;
    }
  }
  return {pi};
}

ConnectivityReport connectivity_report(const QubitMapping& mapping, const Eigen::VectorXd& weights,
                                       const Circuit& c, const CouplingMap& cm) {
  const int n = c.n;
  if (static_cast<int>(mapping.pi.size()) < n || weights.size() < n) {
    throw InvalidArgument("mapping or weights do not cover the circuit's qubits");
  }
  if (!mapping.injective(cm.physical_count)) throw InvalidArgument("mapping is not injective on the device");
  const Eigen::MatrixXi d = distance_matrix(cm);

  ConnectivityReport report;
  report.pair_gate_counts = Eigen::MatrixXi::Zero(n, n);
  report.pair_distances = Eigen::MatrixXi::Zero(n, n);
  for (const auto& g : c.gates) {
    if (!is_two_qubit(g.kind)) continue;
    const int a = std::min(g.targets[0], g.targets[1]), b = std::max(g.targets[0], g.targets[1]);
    ++report.pair_gate_counts(a, b);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      report.pair_distances(i, j) = d(mapping.pi[static_cast<std::size_t>(i)], mapping.pi[static_cast<std::size_t>(j)]);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      report.cost += weights(i) * weights(j) * report.pair_distances(i, j) * report.pair_gate_counts(i, j);
    }
  }
  return report;
}

}  // namespace deal
