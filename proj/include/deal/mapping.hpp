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

#ifndef DEAL_MAPPING_HPP
#define DEAL_MAPPING_HPP

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "deal/problems.hpp"
#include "deal/qpn.hpp"
#include "deal/simulator.hpp"

namespace deal {

struct CouplingEdge {
  int a = 0;
  int b = 0;
  double error = 0.0;
};

/// Device connectivity with two-qubit error rates per coupler.
struct CouplingMap {
  int physical_count = 0;
  std::vector<CouplingEdge> edges;
  std::vector<double> readout_error;  ///< optional, empty or one per qubit

  /// Connected, in range, no self-loops or duplicate couplers, errors in [0, 1).
  void validate() const;
};

/// Two bundled 20-qubit heavy-hex-like devices: "heavyhex20a", "heavyhex20b".
CouplingMap device_preset(std::string_view name);

CouplingMap line_device(int n, double error = 0.01);
CouplingMap ring_device(int n, double error = 0.01);
CouplingMap complete_device(int n, double error = 0.01);

/// All-pairs hop counts.
Eigen::MatrixXi distance_matrix(const CouplingMap& cm);

/// Mean coupler error along one BFS shortest path between every pair
/// (the direct coupler error for adjacent qubits, zero on the diagonal).
Eigen::MatrixXd path_error_matrix(const CouplingMap& cm);

/// Logical -> physical placement.
struct QubitMapping {
  std::vector<int> pi;

  bool injective(int physical_count) const;
};

/// sum_{i<j} |Q_ij| d(pi(i), pi(j)) Ebar(pi(i), pi(j)).
double placement_cost(const std::vector<int>& pi, const QuboInstance& q, const Eigen::MatrixXi& distances,
                      const Eigen::MatrixXd& path_errors);

/// Greedy placement in descending importance followed by swap/relocate hill
/// climbing. Deterministic; ties resolve toward lower physical indices.
QubitMapping map_qubits(const ImportanceWeights& w, const QuboInstance& q, const CouplingMap& cm);

struct ConnectivityReport {
  double cost = 0.0;
  Eigen::MatrixXi pair_distances;    ///< d(pi(i), pi(j)) over logical pairs
  Eigen::MatrixXi pair_gate_counts;  ///< two-qubit gates per logical pair, upper triangle
};

/// C_conn = sum_{i<j} w_i w_j d_ij n_ij for the circuit's two-qubit gates.
ConnectivityReport connectivity_report(const QubitMapping& mapping, const Eigen::VectorXd& weights,
                                       const Circuit& c, const CouplingMap& cm);

}  // namespace deal

#endif  // DEAL_MAPPING_HPP
