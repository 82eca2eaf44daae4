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

#include "deal/ansatz.hpp"

#include <bit>
#include <cmath>

#include "deal/errors.hpp"

namespace deal {

std::string_view style_name(AnsatzStyle style) { return style == AnsatzStyle::Deal ? "DEAL" : "VANILLA"; }

AnsatzStyle style_from_name(std::string_view name) {
  if (name == "DEAL" || name == "deal") return AnsatzStyle::Deal;
  if (name == "VANILLA" || name == "vanilla" || name == "QAOA" || name == "qaoa") return AnsatzStyle::Vanilla;
  throw InvalidArgument("unknown ansatz style '" + std::string(name) + "'");
}

MixerCouplings mixer_couplings(const Graph& g) {
  g.validate();
  if (g.edges.empty()) throw InvalidArgument("XY mixer needs at least one mixer edge");
  MixerCouplings out{g.edges, Eigen::VectorXd(static_cast<Eigen::Index>(g.edges.size()))};
  for (std::size_t e = 0; e < g.edges.size(); ++e) out.k(static_cast<Eigen::Index>(e)) = std::abs(g.edges[e].weight);
  const double total = out.k.sum();
  if (total > 0.0) {
    out.k /= total;
  } else {
    out.k.setConstant(1.0 / static_cast<double>(g.edges.size()));
  }
  return out;
}

Graph mixer_graph_from_ising(const IsingHamiltonian& h) {
  Graph g{h.size(), {}};
  for (const auto& t : zz_terms(h)) g.edges.push_back({t.i, t.j, t.coeff});
  return g;
}

void AnsatzSpec::validate() const {
  const int n = qubits();
  if (n < 1) throw InvalidArgument("ansatz needs at least one qubit");
  if (depth < 0) throw InvalidArgument("ansatz depth must be non-negative");
  if (hamiltonian.quadratic.rows() != n || hamiltonian.quadratic.cols() != n) {
    throw InvalidArgument("Hamiltonian coupling matrix has the wrong shape");
  }
  if (style == AnsatzStyle::Deal && mixer_graph.node_count != n) {
    throw InvalidArgument("mixer graph and Hamiltonian differ in qubit count");
  }
  if (initial_basis && *initial_basis >= (std::uint64_t{1} << n)) {
    throw InvalidArgument("initial basis state out of range");
  }
  for (const auto& [pair, m] : multiplicities) {
    if (m < 1) throw InvalidArgument("term multiplicities must be at least 1");
  }
}

std::vector<ZZTerm> zz_terms(const IsingHamiltonian& h) {
  std::vector<ZZTerm> terms;
  const int n = h.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (h.quadratic(i, j) != 0.0) terms.push_back({i, j, h.quadratic(i, j)});
  return terms;
}

std::vector<Gate> cost_gate_terms(const IsingHamiltonian& h, double gamma) {
  std::vector<Gate> gates;
  for (int i = 0; i < h.size(); ++i) {
    if (h.linear(i) != 0.0) gates.push_back(Gate::single(GateKind::RZ, i, 2.0 * gamma * h.linear(i)));
  }
  for (const auto& t : zz_terms(h)) gates.push_back(Gate::pair(GateKind::RZZ, t.i, t.j, 2.0 * gamma * t.coeff));
  return gates;
}

std::vector<ZZTerm> compensate_duplicates(const std::vector<ZZTerm>& terms, const PairMultiplicity& multiplicity) {
  std::vector<ZZTerm> out;
  for (const auto& t : terms) {
    int m = 1;
    if (auto it = multiplicity.find({std::min(t.i, t.j), std::max(t.i, t.j)}); it != multiplicity.end()) {
      m = it->second;
    }
    if (m < 1) throw InvalidArgument("term multiplicities must be at least 1");
    for (int copy = 0; copy < m; ++copy) out.push_back({t.i, t.j, t.coeff / m});
  }
  return out;
}

IsingHamiltonian truncate_small_terms(const IsingHamiltonian& h, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("truncation threshold must be non-negative");
  IsingHamiltonian out = h;
  out.linear = (h.linear.array().abs() < threshold).select(0.0, h.linear);
  out.quadratic = (h.quadratic.array().abs() < threshold).select(0.0, h.quadratic);
  return out;
}

Circuit build_circuit(const AnsatzSpec& spec, const QaoaParams& theta) {
  spec.validate();
  if (theta.gammas.size() != spec.depth || theta.betas.size() != spec.depth) {
    throw InvalidArgument("parameter vector length does not match the ansatz depth");
  }
  const int n = spec.qubits();
  Circuit c{n, {}};

  if (spec.initial_basis) {
    for (int q = 0; q < n; ++q) {
      if (bit_of(*spec.initial_basis, q)) c.gates.push_back(Gate::single(GateKind::X, q));
    }
  } else {
    for (int q = 0; q < n; ++q) c.gates.push_back(Gate::single(GateKind::H, q));
  }
  if (spec.depth == 0) return c;

  std::optional<MixerCouplings> xy;
  if (spec.style == AnsatzStyle::Deal) xy = mixer_couplings(spec.mixer_graph);
  const auto pairs = compensate_duplicates(zz_terms(spec.hamiltonian), spec.multiplicities);

  for (int layer = 0; layer < spec.depth; ++layer) {
    const double gamma = theta.gammas(layer), beta = theta.betas(layer);
    for (int i = 0; i < n; ++i) {
      const double h = spec.hamiltonian.linear(i);
      if (h != 0.0) c.gates.push_back(Gate::single(GateKind::RZ, i, 2.0 * gamma * h));
    }
    for (const auto& t : pairs) c.gates.push_back(Gate::pair(GateKind::RZZ, t.i, t.j, 2.0 * gamma * t.coeff));

    if (xy) {
      for (std::size_t e = 0; e < xy->edges.size(); ++e) {
        const auto& edge = xy->edges[e];
        c.gates.push_back(
            Gate::pair(GateKind::RXXplusYY, edge.i, edge.j, 2.0 * beta * xy->k(static_cast<Eigen::Index>(e))));
      }
    } else {
      for (int q = 0; q < n; ++q) c.gates.push_back(Gate::single(GateKind::RX, q, 2.0 * beta));
    }
  }
  return c;
}

std::size_t expected_gate_count(const AnsatzSpec& spec) {
  const auto n = static_cast<std::size_t>(spec.qubits());
  const auto h_terms = static_cast<std::size_t>((spec.hamiltonian.linear.array() != 0.0).count());
  const auto j_terms = zz_terms(spec.hamiltonian).size();
  const std::size_t mixer = spec.style == AnsatzStyle::Deal ? spec.mixer_graph.edges.size() : n;
  std::size_t prep = n;
  if (spec.initial_basis) prep = static_cast<std::size_t>(std::popcount(*spec.initial_basis));
  return prep + static_cast<std::size_t>(spec.depth) * (h_terms + j_terms + mixer);
}

}  // namespace deal
