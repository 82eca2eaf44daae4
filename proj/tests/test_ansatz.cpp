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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <numbers>
#include <random>

#include "deal/ansatz.hpp"
#include "deal/errors.hpp"
#include "deal/io.hpp"
#include "oracles.hpp"

using namespace deal;
using std::numbers::pi;

namespace {

IsingHamiltonian edge_hamiltonian() { return qubo_to_ising(maxcut_qubo(Graph{2, {{0, 1, 1.0}}})); }

AnsatzSpec spec_for(const IsingHamiltonian& h, int p, AnsatzStyle style) {
  return AnsatzSpec{h, mixer_graph_from_ising(h), p, style, std::nullopt, {}};
}

QaoaParams params(std::initializer_list<double> g, std::initializer_list<double> b) {
  QaoaParams t{Eigen::VectorXd(static_cast<Eigen::Index>(g.size())), Eigen::VectorXd(static_cast<Eigen::Index>(b.size()))};
  Eigen::Index k = 0;
  for (double v : g) t.gammas(k++) = v;
  k = 0;
  for (double v : b) t.betas(k++) = v;
  return t;
}

// exp(-i beta sum X) exp(-i gamma H_C) |+>^n built from dense matrices.
double vanilla_oracle(const IsingHamiltonian& h, double gamma, double beta) {
  const int n = h.size();
  const auto dim = std::int64_t{1} << n;
  oracle::Mat cost = oracle::Mat::Zero(dim, dim);
  for (std::int64_t k = 0; k < dim; ++k) cost(k, k) = oracle::ising_value(h, static_cast<std::uint64_t>(k));
  oracle::Mat mixer = oracle::Mat::Zero(dim, dim);
  for (int q = 0; q < n; ++q) {
    oracle::Mat term = oracle::Mat::Identity(1, 1);
    for (int b = n - 1; b >= 0; --b) term = oracle::kron(term, oracle::pauli(b == q ? 'X' : 'I'));
    mixer += term;
  }
  const Eigen::VectorXcd plus = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(double(dim)));
  const Eigen::VectorXcd psi = oracle::rotation(mixer, 2 * beta) * (oracle::rotation(cost, 2 * gamma) * plus);
  return (psi.adjoint() * cost * psi)(0, 0).real();
}

double library_energy(const AnsatzSpec& spec, const QaoaParams& t) {
  return expectation_ising(apply_circuit(Statevector(spec.qubits()), build_circuit(spec, t)), spec.hamiltonian);
}

}  // namespace

TEST_CASE("style names") {
  CHECK(style_from_name(style_name(AnsatzStyle::Deal)) == AnsatzStyle::Deal);
  CHECK(style_from_name(style_name(AnsatzStyle::Vanilla)) == AnsatzStyle::Vanilla);
  CHECK_THROWS_AS(style_from_name("adapt"), InvalidArgument);
}

TEST_CASE("depth zero prepares the plus state") {
  const auto h = qubo_to_ising(maxcut_qubo(complete_graph(3)));
  for (auto style : {AnsatzStyle::Deal, AnsatzStyle::Vanilla}) {
    const auto c = build_circuit(spec_for(h, 0, style), QaoaParams{});
    CHECK(c.gates.size() == 3);
    CHECK(apply_circuit(Statevector(3), c).amplitudes().isApprox(plus_state(3).amplitudes()));
  }
}

TEST_CASE("zero angles leave the plus state") {
  const auto h = qubo_to_ising(maxcut_qubo(complete_graph(4)));
  for (auto style : {AnsatzStyle::Deal, AnsatzStyle::Vanilla}) {
    const auto c = build_circuit(spec_for(h, 3, style), params({0, 0, 0}, {0, 0, 0}));
    CHECK(apply_circuit(Statevector(4), c).amplitudes().isApprox(plus_state(4).amplitudes(), 1e-12));
  }
}

TEST_CASE("gate counts") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 12; ++trial) {
    const auto g = erdos_renyi(3 + trial % 4, 0.6, 100 + trial);
    auto q = maxcut_qubo(g);
    const auto h = qubo_to_ising(q);
    const int p = 1 + trial % 4;
    const std::size_t n = static_cast<std::size_t>(h.size());
    const std::size_t lin = static_cast<std::size_t>((h.linear.array() != 0.0).count());
    const std::size_t quad = zz_terms(h).size();
    const auto mixer_edges = mixer_graph_from_ising(h).edges.size();
    Eigen::VectorXd zeros = Eigen::VectorXd::Zero(p);
    const QaoaParams t{zeros, zeros};
    const auto deal = spec_for(h, p, AnsatzStyle::Deal);
    const auto vanilla = spec_for(h, p, AnsatzStyle::Vanilla);
    CHECK(build_circuit(deal, t).gates.size() == n + p * (lin + quad + mixer_edges));
    CHECK(build_circuit(vanilla, t).gates.size() == n + p * (lin + quad + n));
    CHECK(expected_gate_count(deal) == build_circuit(deal, t).gates.size());
    CHECK(expected_gate_count(vanilla) == build_circuit(vanilla, t).gates.size());
  }
}

TEST_CASE("parameter length must match depth") {
  const auto h = edge_hamiltonian();
  CHECK_THROWS_AS(build_circuit(spec_for(h, 2, AnsatzStyle::Vanilla), params({0.1}, {0.1})), InvalidArgument);
  CHECK_THROWS_AS(build_circuit(spec_for(h, 1, AnsatzStyle::Vanilla), params({0.1}, {0.1, 0.2})), InvalidArgument);
}

TEST_CASE("single edge against the dense oracle") {
  const auto h = edge_hamiltonian();
  const auto spec = spec_for(h, 1, AnsatzStyle::Vanilla);

  const double at_quarter = library_energy(spec, params({pi / 4}, {pi / 8}));
  CHECK(at_quarter == doctest::Approx(vanilla_oracle(h, pi / 4, pi / 8)).epsilon(1e-10));

  double best = 1e9;
  const int grid = 100;
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      const double gamma = 2 * pi * a / grid, beta = pi * b / grid;
      const double lib = library_energy(spec, params({gamma}, {beta}));
      if (a % 9 == 0 && b % 9 == 0) CHECK(lib == doctest::Approx(vanilla_oracle(h, gamma, beta)).epsilon(1e-10));
      best = std::min(best, lib);
    }
  }
  CHECK(best <= -0.99);
  CHECK(best >= -1.0 - 1e-12);
  // With RZZ(2 gamma J) the optimum sits at gamma = pi/2, beta = 3 pi/8.
  CHECK(library_energy(spec, params({pi / 2}, {3 * pi / 8})) == doctest::Approx(-1.0));
  CHECK(at_quarter == doctest::Approx(-(2 - std::sqrt(2.0)) / 4));
}

TEST_CASE("random Hamiltonians against the dense oracle") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1), angle(-pi, pi);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 1 + trial % 4;
    Eigen::MatrixXd m(n, n);
    for (auto& v : m.reshaped()) v = u(rng);
    const auto h = qubo_to_ising(QuboInstance(m));
    const double g = angle(rng), b = angle(rng);
    CHECK(library_energy(spec_for(h, 1, AnsatzStyle::Vanilla), params({g}, {b})) ==
          doctest::Approx(vanilla_oracle(h, g, b)).epsilon(1e-10));
  }
}

TEST_CASE("cost gate terms") {
  IsingHamiltonian h(2);
  h.linear(0) = 0.5;
  auto gates = cost_gate_terms(h, 1.0);
  REQUIRE(gates.size() == 1);
  CHECK(gates[0] == Gate::single(GateKind::RZ, 0, 1.0));

  IsingHamiltonian j(2);
  j.quadratic(0, 1) = 0.25;
  gates = cost_gate_terms(j, 2.0);
  REQUIRE(gates.size() == 1);
  CHECK(gates[0] == Gate::pair(GateKind::RZZ, 0, 1, 1.0));

  IsingHamiltonian zero(3);
  zero.offset = 4.0;
  CHECK(cost_gate_terms(zero, 1.3).empty());
}

TEST_CASE("duplicate compensation") {
  const std::vector<ZZTerm> terms{{0, 1, 0.5}, {1, 2, -0.3}};
  const auto doubled = compensate_duplicates(terms, {{{0, 1}, 2}});
  REQUIRE(doubled.size() == 3);
  CHECK(doubled[0] == ZZTerm{0, 1, 0.25});
  CHECK(doubled[1] == ZZTerm{0, 1, 0.25});
  CHECK(doubled[2] == terms[1]);
  CHECK(compensate_duplicates(terms, {{{0, 1}, 1}}) == terms);
  CHECK_THROWS_AS(compensate_duplicates(terms, {{{0, 1}, 0}}), InvalidArgument);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = u(rng);
    const int mult = 1 + static_cast<int>(rng() % 5);
    const auto out = compensate_duplicates({{0, 1, c}}, {{{0, 1}, mult}});
    double total = 0;
    for (const auto& t : out) total += t.coeff;
    CHECK(out.size() == static_cast<std::size_t>(mult));
    CHECK(total == doctest::Approx(c));
  }

  // Splitting a commuting term leaves the state unchanged.
  const auto h = qubo_to_ising(maxcut_qubo(complete_graph(3)));
  auto spec = spec_for(h, 2, AnsatzStyle::Deal);
  const auto t = params({0.4, 0.7}, {0.3, 0.2});
  const auto plain = apply_circuit(Statevector(3), build_circuit(spec, t));
  spec.multiplicities = {{{0, 1}, 2}, {{1, 2}, 3}};
  const auto split = build_circuit(spec, t);
  CHECK(split.gates.size() == expected_gate_count(spec_for(h, 2, AnsatzStyle::Deal)) + 2 * 3);
  CHECK(apply_circuit(Statevector(3), split).amplitudes().isApprox(plain.amplitudes(), 1e-12));
}

TEST_CASE("small-term truncation") {
  IsingHamiltonian h(2);
  h.quadratic(0, 1) = 1e-6;
  h.linear(1) = 0.3;
  h.offset = 2.0;
  const auto t = truncate_small_terms(h, 1e-4);
  CHECK(t.quadratic(0, 1) == 0.0);
  CHECK(t.linear(1) == 0.3);
  CHECK(t.offset == 2.0);

  const auto same = truncate_small_terms(h, 0.0);
  CHECK(same.quadratic == h.quadratic);
  CHECK(same.linear == h.linear);
  CHECK_THROWS_AS(truncate_small_terms(h, -1.0), InvalidArgument);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> tiny(-3e-4, 3e-4), angle(-pi, pi);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    IsingHamiltonian r(n);
    for (auto& v : r.linear) v = tiny(rng);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) r.quadratic(i, j) = tiny(rng);
    const int terms = n + n * (n - 1) / 2;
    const auto cut = truncate_small_terms(r, 1e-4);
    const auto state = apply_circuit(Statevector(n), oracle::random_circuit(n, 15, rng));
    CHECK(std::abs(expectation_ising(state, r) - expectation_ising(state, cut)) <= 1e-4 * terms);
  }
}

TEST_CASE("mixer couplings") {
  const auto uniform = mixer_couplings(Graph{4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}}});
  CHECK(uniform.k.isApprox(Eigen::Vector4d::Constant(0.25)));
  const auto weighted = mixer_couplings(Graph{4, {{0, 1, 2}, {1, 2, 1}, {2, 3, 1}, {0, 3, 0}}});
  CHECK(weighted.k.isApprox(Eigen::Vector4d(0.5, 0.25, 0.25, 0)));
  CHECK(mixer_couplings(Graph{2, {{0, 1, -3}}}).k(0) == 1.0);
  CHECK(mixer_couplings(Graph{3, {{0, 1, 0}, {1, 2, 0}}}).k.isApprox(Eigen::Vector2d(0.5, 0.5)));
  CHECK_THROWS_AS(mixer_couplings(Graph{3, {}}), InvalidArgument);
}

TEST_CASE("XY mixer conserves Hamming weight") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5;
    const auto g = erdos_renyi(n, 0.7, 200 + trial);
    if (g.edges.empty()) continue;
    const auto h = qubo_to_ising(maxcut_qubo(g));
    const std::uint64_t start = rng() % (std::uint64_t{1} << n);
    const int weight = std::popcount(start);
    AnsatzSpec spec = spec_for(h, 3, AnsatzStyle::Deal);
    spec.initial_basis = start;
    const auto t = params({0, 0, 0}, {angle(rng), angle(rng), angle(rng)});
    const auto probs = apply_circuit(Statevector(n), build_circuit(spec, t)).probabilities();
    double off_sector = 0.0;
    for (Eigen::Index k = 0; k < probs.size(); ++k)
      if (std::popcount(static_cast<std::uint64_t>(k)) != weight) off_sector += probs(k);
    CHECK(off_sector < 1e-12);
  }
}

TEST_CASE("initial basis prepares that state") {
  const auto h = qubo_to_ising(maxcut_qubo(complete_graph(3)));
  auto spec = spec_for(h, 0, AnsatzStyle::Deal);
  spec.initial_basis = 0b101;
  const auto c = build_circuit(spec, QaoaParams{});
  CHECK(c.gates.size() == 2);
  CHECK(apply_circuit(Statevector(3), c).probabilities()(5) == doctest::Approx(1.0));
  spec.initial_basis = 8;
  CHECK_THROWS_AS(build_circuit(spec, QaoaParams{}), InvalidArgument);
}

TEST_CASE("building is deterministic") {
  const auto h = qubo_to_ising(maxcut_qubo(erdos_renyi(5, 0.5, 9)));
  const auto spec = spec_for(h, 3, AnsatzStyle::Deal);
  const auto t = params({0.1, 0.2, 0.3}, {0.4, 0.5, 0.6});
  const auto c = build_circuit(spec, t);
  CHECK(circuit_to_json(c).dump() == circuit_to_json(build_circuit(spec, t)).dump());
  CHECK(circuit_from_json(circuit_to_json(c)).gates == c.gates);
}
