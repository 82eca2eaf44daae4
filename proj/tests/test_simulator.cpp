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

#include <cmath>
#include <numbers>
#include <random>

#include "deal/errors.hpp"
#include "deal/simulator.hpp"
#include "oracles.hpp"

using namespace deal;
using std::numbers::pi;

namespace {

double max_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

Circuit one_gate(int n, Gate g) { return Circuit{n, {std::move(g)}}; }

// Depolarizing-channel density matrix after every gate, exact.
Eigen::VectorXd density_oracle(const Circuit& c, double p1, double p2) {
  using oracle::Mat;
  const auto dim = std::int64_t{1} << c.n;
  Mat rho = Mat::Zero(dim, dim);
  rho(0, 0) = 1.0;
  const char paulis[4] = {'I', 'X', 'Y', 'Z'};
  for (const auto& g : c.gates) {
    const Mat u = oracle::embed(g, c.n);
    rho = u * rho * u.adjoint();
    if (g.kind == GateKind::BARRIER) continue;
    const bool two = is_two_qubit(g.kind);
    const double p = two ? p2 : p1;
    Mat mixed = Mat::Zero(dim, dim);
    const int terms = two ? 16 : 4;
    for (int k = 1; k < terms; ++k) {
      const int a = k % 4, b = k / 4;
      Mat op = Mat::Identity(dim, dim);
      for (int t = 0; t < (two ? 2 : 1); ++t) {
        const int which = t == 0 ? a : b;
        if (!which) continue;
        Mat single = Mat::Identity(1, 1);
        for (int q = c.n - 1; q >= 0; --q) {
          single = oracle::kron(single, q == g.targets[static_cast<std::size_t>(t)] ? oracle::pauli(paulis[which])
                                                                                     : oracle::pauli('I'));
        }
        op = single * op;
      }
      mixed += op * rho * op.adjoint();
    }
    rho = (1.0 - p) * rho + (p / (terms - 1)) * mixed;
  }
  return rho.diagonal().real();
}

}  // namespace

TEST_CASE("gate names round-trip") {
  for (auto k : {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S, GateKind::SDG, GateKind::RX,
                 GateKind::RZ, GateKind::RZZ, GateKind::RXXplusYY, GateKind::CZ, GateKind::BARRIER}) {
    CHECK(gate_kind_from_name(gate_name(k)) == k);
  }
  CHECK_THROWS_AS(gate_kind_from_name("CNOT"), InvalidArgument);
}

TEST_CASE("circuit validation") {
  CHECK_THROWS_AS((Circuit{2, {Gate::single(GateKind::H, 2)}}.validate()), InvalidArgument);
  CHECK_THROWS_AS((Circuit{2, {Gate::pair(GateKind::RZZ, 1, 1, 0.3)}}.validate()), InvalidArgument);
  CHECK_THROWS_AS((Circuit{2, {Gate{GateKind::RZZ, {0}, 0.3}}}.validate()), InvalidArgument);
  CHECK_THROWS_AS((Circuit{2, {Gate{GateKind::H, {0, 1}, 0.0}}}.validate()), InvalidArgument);
  Statevector s(2);
  CHECK_THROWS_AS(apply_circuit(s, Circuit{3, {}}), InvalidArgument);
}

TEST_CASE("gate conventions") {
  SUBCASE("H on |0>") {
    const auto s = apply_circuit(Statevector(1), one_gate(1, Gate::single(GateKind::H, 0)));
    CHECK(std::abs(s.amplitudes()(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(s.amplitudes()(1) - 1.0 / std::sqrt(2.0)) < 1e-12);
  }
  SUBCASE("RZZ on |00> is a global phase") {
    const double t = 0.73;
    const auto s = apply_circuit(Statevector(2), one_gate(2, Gate::pair(GateKind::RZZ, 0, 1, t)));
    CHECK(std::abs(s.amplitudes()(0) - std::polar(1.0, -t / 2)) < 1e-12);
  }
  SUBCASE("RXXplusYY(pi) moves |01> to |10>") {
    const auto s = apply_circuit(Statevector::basis(2, 1), one_gate(2, Gate::pair(GateKind::RXXplusYY, 0, 1, pi)));
    CHECK(std::abs(std::abs(s.amplitudes()(2)) - 1.0) < 1e-12);
  }
  SUBCASE("RZ phases") {
    const double t = 1.1;
    const auto s = apply_circuit(Statevector::basis(1, 1), one_gate(1, Gate::single(GateKind::RZ, 0, t)));
    CHECK(std::abs(s.amplitudes()(1) - std::polar(1.0, t / 2)) < 1e-12);
  }
  SUBCASE("qubit 0 is the low bit") {
    const auto s = apply_circuit(Statevector(3), one_gate(3, Gate::single(GateKind::X, 0)));
    CHECK(std::abs(s.amplitudes()(1)) == doctest::Approx(1.0));
    CHECK(sample_counts(s, 5, 1).at("001") == 5);
  }
}

TEST_CASE("every gate matches the matrix oracle") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    const auto c = oracle::random_circuit(n, 1, rng);
    CHECK(max_diff(apply_circuit(Statevector(n), c).amplitudes(), oracle::run(c)) < 1e-10);
  }
  // Pairs with the high target first exercise target ordering.
  for (auto kind : {GateKind::RZZ, GateKind::RXXplusYY, GateKind::CZ}) {
    Circuit c{3, {Gate::single(GateKind::H, 0), Gate::single(GateKind::RX, 1, 0.4), Gate::single(GateKind::H, 2),
                  Gate::pair(kind, 2, 0, 0.9), Gate::pair(kind, 1, 2, -1.3)}};
    CHECK(max_diff(apply_circuit(Statevector(3), c).amplitudes(), oracle::run(c)) < 1e-10);
  }
}

TEST_CASE("random circuits match the matrix oracle") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 4;
    const auto c = oracle::random_circuit(n, 30, rng);
    CHECK(max_diff(apply_circuit(Statevector(n), c).amplitudes(), oracle::run(c)) < 1e-10);
  }
}

TEST_CASE("norm is preserved over long circuits") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = oracle::random_circuit(6, 200, rng);
    CHECK(std::abs(apply_circuit(plus_state(6), c).norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("inverse circuits undo the original") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 5;
    const auto c = oracle::random_circuit(n, 25, rng);
    Circuit both = c;
    both.append(inverse(c));
    const auto start = apply_circuit(Statevector(n), oracle::random_circuit(n, 5, rng));
    CHECK(max_diff(apply_circuit(start, both).amplitudes(), start.amplitudes()) < 1e-9);
    for (const auto& g : c.gates) {
      const Circuit pair{n, {g, inverse(g)}};
      CHECK(max_diff(apply_circuit(start, pair).amplitudes(), start.amplitudes()) < 1e-9);
    }
  }
}

TEST_CASE("plus_state") {
  CHECK(plus_state(1).amplitudes().isApprox(Eigen::VectorXcd::Constant(2, 1.0 / std::sqrt(2.0))));
  CHECK(plus_state(2).amplitudes().isApprox(Eigen::VectorXcd::Constant(4, 0.5)));
  const auto s = plus_state(3);
  for (int i = 0; i < 3; ++i) {
    IsingHamiltonian z(3);
    z.linear(i) = 1.0;
    CHECK(std::abs(expectation_ising(s, z)) < 1e-12);
  }
}

TEST_CASE("expectation_ising") {
  IsingHamiltonian zz(2);
  zz.quadratic(0, 1) = 1.0;
  CHECK(std::abs(expectation_ising(plus_state(2), zz)) < 1e-12);

  IsingHamiltonian edge(2);  // -(1 - Z0 Z1)/2
  edge.offset = -0.5;
  edge.quadratic(0, 1) = 0.5;
  CHECK(expectation_ising(Statevector::basis(2, 1), edge) == doctest::Approx(-1.0));

  IsingHamiltonian constant(3);
  constant.offset = 2.5;
  std::mt19937_64 rng(5);
  CHECK(expectation_ising(apply_circuit(Statevector(3), oracle::random_circuit(3, 10, rng)), constant) ==
        doctest::Approx(2.5));
}

TEST_CASE("sampling") {
  CHECK(sample_counts(Statevector::basis(2, 2), 1024, 3) == Counts{{"10", 1024}});
  const auto one = sample_counts(plus_state(3), 1, 3);
  CHECK(one.size() == 1);
  CHECK(one.begin()->second == 1);

  const auto big = sample_counts(plus_state(1), 1000000, 9);
  const double sigma = std::sqrt(1e6 * 0.25);
  CHECK(std::abs(big.at("0") - 5e5) < 5 * sigma);
  CHECK(std::abs(big.at("1") - 5e5) < 5 * sigma);

  std::mt19937_64 rng(6);
  const auto state = apply_circuit(Statevector(4), oracle::random_circuit(4, 20, rng));
  const auto a = sample_counts(state, 4096, 77), b = sample_counts(state, 4096, 77);
  CHECK(a == b);
  std::int64_t total = 0;
  for (const auto& [bits, c] : a) total += c;
  CHECK(total == 4096);
}

TEST_CASE("noise model") {
  std::mt19937_64 rng(7);
  const auto c = oracle::random_circuit(3, 15, rng);
  const auto ideal = apply_circuit(Statevector(3), c).probabilities();

  SUBCASE("zero noise is exact") {
    CHECK(run_noisy(c, NoiseModel{}, 5, 1) == ideal);
  }
  SUBCASE("probabilities stay normalised") {
    const auto p = run_noisy(c, NoiseModel{0.05, 0.1, 0.02, 0}, 200, 2);
    CHECK((p.array() >= 0.0).all());
    CHECK(std::abs(p.sum() - 1.0) < 1e-9);
  }
  SUBCASE("same seed, same output") {
    const NoiseModel noise{0.05, 0.1, 0.0, 0};
    CHECK(run_noisy(c, noise, 100, 3) == run_noisy(c, noise, 100, 3));
  }
  SUBCASE("full depolarisation randomises the outcome") {
    const Circuit x = one_gate(1, Gate::single(GateKind::X, 0));
    const auto p = run_noisy(x, NoiseModel{0.75, 0.0, 0.0, 0}, 40000, 4);
    CHECK(std::abs(p(0) - 0.5) < 0.015);
  }
  SUBCASE("readout flips") {
    const Circuit x = one_gate(1, Gate::single(GateKind::X, 0));
    const auto p = run_noisy(x, NoiseModel{0.0, 0.0, 0.1, 0}, 100000, 5);
    CHECK(std::abs(p(1) - 0.9) < 0.01);
  }
  SUBCASE("invalid probabilities") {
    CHECK_THROWS_AS((NoiseModel{1.0, 0.0, 0.0, 0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((NoiseModel{-0.1, 0.0, 0.0, 0}.validate()), InvalidArgument);
    CHECK_THROWS_AS(run_noisy(c, NoiseModel{}, 0, 1), InvalidArgument);
  }
}

TEST_CASE("trajectory average converges to the depolarising channel") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 3; ++trial) {
    const int n = 2 + trial % 2;
    const auto c = oracle::random_circuit(n, 10, rng);
    const double p1 = 0.04, p2 = 0.08;
    const auto exact = density_oracle(c, p1, p2);
    const int t = 20000;
    const auto approx = run_noisy(c, NoiseModel{p1, p2, 0.0, 0}, t, 100 + trial);
    for (Eigen::Index k = 0; k < exact.size(); ++k) {
      // Each trajectory contributes a probability in [0, 1]; 5 sigma of a bounded mean.
      CHECK(std::abs(approx(k) - exact(k)) < 5 * 0.5 / std::sqrt(t));
    }
  }
}

TEST_CASE("observable tracking matches the averaged distribution") {
  std::mt19937_64 rng(9);
  const auto c = oracle::random_circuit(3, 12, rng);
  Eigen::VectorXd obs(8);
  obs << 1, -2, 0.5, 3, -1, 0, 2, -0.5;
  const auto r = run_noisy_detailed(c, NoiseModel{0.05, 0.05, 0.0, 0}, 300, 10, &obs);
  CHECK(r.energy == doctest::Approx(r.probabilities.dot(obs)).epsilon(1e-12));
  CHECK(r.energy_variance > 0.0);
}

TEST_CASE("basis changes") {
  auto measure = [](Statevector s, Basis b) {
    Circuit c{1, {}};
    for (const auto& g : basis_change(b, 0)) c.gates.push_back(g);
    return apply_circuit(std::move(s), c).probabilities();
  };
  CHECK(measure(plus_state(1), Basis::X)(0) == doctest::Approx(1.0));
  Eigen::VectorXcd y(2);
  y << 1.0 / std::sqrt(2.0), std::complex<double>(0, 1.0 / std::sqrt(2.0));
  CHECK(measure(Statevector(1, y), Basis::Y)(0) == doctest::Approx(1.0));
  CHECK(measure(Statevector(1), Basis::X)(0) == doctest::Approx(0.5));
  CHECK(basis_change(Basis::Y, 0).front().kind == GateKind::SDG);
}

TEST_CASE("twenty qubits fit") {
  Circuit c{20, {}};
  for (int q = 0; q < 20; ++q) c.gates.push_back(Gate::single(GateKind::H, q));
  for (int q = 0; q + 1 < 20; ++q) c.gates.push_back(Gate::pair(GateKind::RZZ, q, q + 1, 0.3));
  for (int q = 0; q + 1 < 20; q += 2) c.gates.push_back(Gate::pair(GateKind::RXXplusYY, q, q + 1, 0.7));
  const auto s = apply_circuit(Statevector(20), c);
  CHECK(std::abs(s.norm() - 1.0) < 1e-9);
  CHECK(s.dimension() == (std::uint64_t{1} << 20));
}
