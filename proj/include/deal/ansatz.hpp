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

#ifndef DEAL_ANSATZ_HPP
#define DEAL_ANSATZ_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "deal/problems.hpp"
#include "deal/qpn.hpp"
#include "deal/simulator.hpp"

namespace deal {

enum class AnsatzStyle { Deal, Vanilla };

std::string_view style_name(AnsatzStyle style);
AnsatzStyle style_from_name(std::string_view name);

/// Normalised XY-mixer coupling per mixer edge, K_e = |w_e| / sum |w|.
struct MixerCouplings {
  std::vector<Edge> edges;
  Eigen::VectorXd k;
};

MixerCouplings mixer_couplings(const Graph& g);

/// Mixer connectivity implied by the nonzero J_ij of an Ising form, weighted by J.
Graph mixer_graph_from_ising(const IsingHamiltonian& h);

using PairMultiplicity = std::map<std::pair<int, int>, int>;

struct AnsatzSpec {
  IsingHamiltonian hamiltonian;
  Graph mixer_graph;
  int depth = 1;
  AnsatzStyle style = AnsatzStyle::Deal;
  /// Replaces the Hadamard layer with X gates preparing this basis state.
  std::optional<std::uint64_t> initial_basis;
  /// Repeated ZZ terms per pair; each copy carries J / m.
  PairMultiplicity multiplicities;

  int qubits() const { return hamiltonian.size(); }
  void validate() const;
};

struct ZZTerm {
  int i = 0;
  int j = 0;
  double coeff = 0.0;

  friend bool operator==(const ZZTerm&, const ZZTerm&) = default;
};

/// Nonzero J_ij in row-major order.
std::vector<ZZTerm> zz_terms(const IsingHamiltonian& h);

/// RZ(2 gamma h_i) per nonzero h_i, then RZZ(2 gamma J_ij) per nonzero J_ij.
/// The offset contributes only a global phase and emits nothing.
std::vector<Gate> cost_gate_terms(const IsingHamiltonian& h, double gamma);

/// A pair with multiplicity m is emitted m times at J/m each.
std::vector<ZZTerm> compensate_duplicates(const std::vector<ZZTerm>& terms, const PairMultiplicity& multiplicity);

/// Drops linear and quadratic coefficients with |c| < threshold; keeps the offset.
IsingHamiltonian truncate_small_terms(const IsingHamiltonian& h, double threshold = 1e-4);

Circuit build_circuit(const AnsatzSpec& spec, const QaoaParams& theta);

/// n + p (#h + #J + #mixer terms) without duplicate compensation.
std::size_t expected_gate_count(const AnsatzSpec& spec);

}  // namespace deal

#endif  // DEAL_ANSATZ_HPP
