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

#ifndef DEAL_PROBLEMS_HPP
#define DEAL_PROBLEMS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace deal {

// Bit order used throughout: qubit i is bit i of a basis index (qubit 0 is
// the least-significant bit). Bitstrings are written most-significant first,
// so qubit 0 is the rightmost character and lexicographic order on strings
// equals numeric order on indices.

std::string to_bitstring(std::uint64_t index, int n);
std::uint64_t from_bitstring(std::string_view bits);

inline int bit_of(std::uint64_t index, int qubit) {
  return static_cast<int>((index >> qubit) & 1U);
}

struct Edge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};

/// Undirected weighted graph with edges stored as i < j.
struct Graph {
  int node_count = 0;
  std::vector<Edge> edges;

  /// Throws InvalidArgument on self-loops, duplicates, unordered or
  /// out-of-range endpoints.
  void validate() const;
};

/// G(n, p): every unordered pair is an edge independently with probability
/// `edge_prob`, unit weight.
Graph erdos_renyi(int n, double edge_prob, std::uint64_t seed);

Graph complete_graph(int n, double weight = 1.0);

struct KnownOptimum {
  std::string bits;
  double energy = 0.0;
};

/// Minimization problem  offset + sum_{i<=j} Q_ij x_i x_j  over x in {0,1}^n
/// with Q upper-triangular.
class QuboInstance {
 public:
  /// Entries below the diagonal are folded into the upper triangle
  /// (Q_ij += Q_ji) so symmetric inputs are accepted.
  explicit QuboInstance(const Eigen::MatrixXd& q, std::string label = {}, double offset = 0.0);

  int size() const { return static_cast<int>(q_.rows()); }
  const Eigen::MatrixXd& matrix() const { return q_; }
  double offset() const { return offset_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  const std::optional<KnownOptimum>& known_optimum() const { return optimum_; }
  /// Rejects an optimum whose energy does not match its bitstring.
  void set_known_optimum(KnownOptimum optimum);

  double objective(std::uint64_t index) const;

  template <typename Derived>
  double objective(const Eigen::MatrixBase<Derived>& x) const {
    return offset_ + (x.transpose().template cast<double>() * q_ * x.template cast<double>()).value();
  }

 private:
  Eigen::MatrixXd q_;
  std::string label_;
  double offset_ = 0.0;
  std::optional<KnownOptimum> optimum_;
};

/// offset + sum_i h_i z_i + sum_{i<j} J_ij z_i z_j with z_i = 1 - 2 x_i.
struct IsingHamiltonian {
  double offset = 0.0;
  Eigen::VectorXd linear;     ///< h, one per qubit
  Eigen::MatrixXd quadratic;  ///< J, strictly upper-triangular

  IsingHamiltonian() = default;
  explicit IsingHamiltonian(int n)
      : linear(Eigen::VectorXd::Zero(n)), quadratic(Eigen::MatrixXd::Zero(n, n)) {}

  int size() const { return static_cast<int>(linear.size()); }
  double energy(std::uint64_t index) const;
};

/// Energies of all 2^n computational basis states (the diagonal of H_C).
Eigen::VectorXd diagonal_energies(const IsingHamiltonian& h);

IsingHamiltonian qubo_to_ising(const QuboInstance& q);

struct BruteForceResult {
  std::uint64_t index = 0;
  std::string bits;
  double energy = 0.0;
  std::uint64_t degeneracy = 0;
};

inline constexpr int kMaxBruteForceQubits = 24;

/// Exhaustive Gray-code scan. Returns the smallest optimal index and the
/// number of states within tolerance of the optimum.
BruteForceResult brute_force_optimum(const QuboInstance& q);

/// Every basis index whose objective is within tolerance of the optimum.
std::vector<std::uint64_t> optimal_indices(const QuboInstance& q, double energy);

/// Populates known_optimum when n <= max_qubits.
void attach_optimum(QuboInstance& q, int max_qubits = 20);

QuboInstance maxcut_qubo(const Graph& g);

/// One-hot (city, position) encoding: variable index city * n + position.
QuboInstance tsp_qubo(const Eigen::MatrixXd& distances, double penalty);

inline int tsp_variable(int city, int position, int cities) { return city * cities + position; }

/// City visited at each position, or nullopt when the assignment is not a
/// permutation matrix.
std::optional<std::vector<int>> decode_tour(std::uint64_t index, int cities);

double tour_length(const Eigen::MatrixXd& distances, const std::vector<int>& tour);

struct KnapsackLayout {
  int items = 0;
  int slack_bits = 0;
};

KnapsackLayout knapsack_layout(int items, int capacity);

/// Item bits first, then binary slack bits for the capacity constraint.
QuboInstance knapsack_qubo(const std::vector<double>& values, const std::vector<int>& weights,
                           int capacity, double penalty);

/// Qubits required by each encoding.
int maxcut_qubits(int nodes);
int tsp_qubits(int cities);
int knapsack_qubits(int items, int capacity);

}  // namespace deal

#endif  // DEAL_PROBLEMS_HPP
