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

#include "deal/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "deal/errors.hpp"

namespace deal {

namespace {

constexpr Complex kI{0.0, 1.0};

using Mat2 = Eigen::Matrix2cd;

Mat2 single_qubit_matrix(const Gate& g) {
  const double r = 1.0 / std::numbers::sqrt2;
  Mat2 m;
  switch (g.kind) {
    case GateKind::H:
      m << r, r, r, -r;
      break;
    case GateKind::X:
      m << 0, 1, 1, 0;
      break;
    case GateKind::Y:
      m << 0, -kI, kI, 0;
      break;
    case GateKind::Z:
      m << 1, 0, 0, -1;
      break;
    case GateKind::S:
      m << 1, 0, 0, kI;
      break;
    case GateKind::SDG:
      m << 1, 0, 0, -kI;
      break;
    case GateKind::RX: {
      const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
      m << c, -kI * s, -kI * s, c;
      break;
    }
    case GateKind::RZ:
      m << std::exp(-kI * (g.angle / 2)), 0, 0, std::exp(kI * (g.angle / 2));
      break;
    default:
      throw InvalidArgument("not a single-qubit gate");
  }
  return m;
}

void apply_single(Eigen::VectorXcd& a, int q, const Mat2& m) {
  const auto dim = static_cast<std::uint64_t>(a.size());
  const std::uint64_t stride = std::uint64_t{1} << q;
  for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
    for (std::uint64_t k = base; k < base + stride; ++k) {
      const auto i0 = static_cast<Eigen::Index>(k);
      const auto i1 = static_cast<Eigen::Index>(k | stride);
      const Complex a0 = a(i0), a1 = a(i1);
      a(i0) = m(0, 0) * a0 + m(0, 1) * a1;
      a(i1) = m(1, 0) * a0 + m(1, 1) * a1;
    }
  }
}

// 1 = X, 2 = Y, 3 = Z.
void apply_pauli(Eigen::VectorXcd& a, int pauli, int q) {
  const auto dim = static_cast<std::uint64_t>(a.size());
  const std::uint64_t bit = std::uint64_t{1} << q;
  for (std::uint64_t k = 0; k < dim; ++k) {
    if (k & bit) continue;
    const auto i0 = static_cast<Eigen::Index>(k);
    const auto i1 = static_cast<Eigen::Index>(k | bit);
    switch (pauli) {
      case 1:
        std::swap(a(i0), a(i1));
        break;
      case 2: {
        const Complex a0 = a(i0);
        a(i0) = -kI * a(i1);
        a(i1) = kI * a0;
        break;
      }
      case 3:
        a(i1) = -a(i1);
        break;
      default:
        break;
    }
  }
}

void apply_rzz(Eigen::VectorXcd& a, int qa, int qb, double angle) {
  const Complex same = std::exp(-kI * (angle / 2)), diff = std::exp(kI * (angle / 2));
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const auto u = static_cast<std::uint64_t>(k);
    a(k) *= (bit_of(u, qa) == bit_of(u, qb)) ? same : diff;
  }
}

void apply_cz(Eigen::VectorXcd& a, int qa, int qb) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const auto u = static_cast<std::uint64_t>(k);
    if (bit_of(u, qa) && bit_of(u, qb)) a(k) = -a(k);
  }
}

// (XX + YY)/2 swaps |01> and |10> and annihilates |00>, |11>.
void apply_xx_plus_yy(Eigen::VectorXcd& a, int qa, int qb, double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  const std::uint64_t ba = std::uint64_t{1} << qa, bb = std::uint64_t{1} << qb;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const auto u = static_cast<std::uint64_t>(k);
    if ((u & ba) == 0 || (u & bb) != 0) continue;
    const auto i = static_cast<Eigen::Index>(u);
    const auto j = static_cast<Eigen::Index>((u & ~ba) | bb);
    const Complex ai = a(i), aj = a(j);
    a(i) = c * ai - kI * s * aj;
    a(j) = -kI * s * ai + c * aj;
  }
}

void check_probabilities(double p, const char* name) {
  if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument(std::string(name) + " must lie in [0, 1)");
}

}  // namespace

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::SDG: return "SDG";
    case GateKind::RX: return "RX";
    case GateKind::RZ: return "RZ";
    case GateKind::RZZ: return "RZZ";
    case GateKind::RXXplusYY: return "RXXplusYY";
    case GateKind::CZ: return "CZ";
    case GateKind::BARRIER: return "BARRIER";
  }
  return "?";
}

GateKind gate_kind_from_name(std::string_view name) {
  static constexpr std::array kinds{GateKind::H,  GateKind::X,   GateKind::Y,         GateKind::Z,
                                    GateKind::S,  GateKind::SDG, GateKind::RX,        GateKind::RZ,
                                    GateKind::RZZ, GateKind::RXXplusYY, GateKind::CZ, GateKind::BARRIER};
  for (auto k : kinds) {
    if (gate_name(k) == name) return k;
  }
  throw InvalidArgument("unknown gate '" + std::string(name) + "'");
}

bool is_two_qubit(GateKind kind) {
  return kind == GateKind::RZZ || kind == GateKind::RXXplusYY || kind == GateKind::CZ;
}

bool has_angle(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RZ || kind == GateKind::RZZ || kind == GateKind::RXXplusYY;
}

Gate inverse(const Gate& g) {
  Gate inv = g;
  switch (g.kind) {
    case GateKind::S: inv.kind = GateKind::SDG; break;
    case GateKind::SDG: inv.kind = GateKind::S; break;
    default:
      if (has_angle(g.kind)) inv.angle = -g.angle;
      break;
  }
  return inv;
}

void Circuit::validate() const {
  if (n < 1) throw InvalidArgument("circuit needs at least one qubit");
  for (const auto& g : gates) {
    const std::size_t want = is_two_qubit(g.kind) ? 2 : 1;
    if (g.kind == GateKind::BARRIER) {
      if (g.targets.size() > 2) throw InvalidArgument("barrier takes at most two targets");
    } else if (g.targets.size() != want) {
      throw InvalidArgument(std::string(gate_name(g.kind)) + " takes exactly " + std::to_string(want) + " target(s)");
    }
    for (int t : g.targets) {
      if (t < 0 || t >= n) throw InvalidArgument("gate target out of range");
    }
    if (g.targets.size() == 2 && g.targets[0] == g.targets[1]) throw InvalidArgument("gate targets must be distinct");
    if (!std::isfinite(g.angle)) throw InvalidArgument("gate angle must be finite");
  }
}

void Circuit::append(const Circuit& other) {
  if (other.n != n) throw InvalidArgument("cannot append circuits of different width");
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

std::size_t Circuit::two_qubit_count() const {
  return static_cast<std::size_t>(
      std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return is_two_qubit(g.kind); }));
}

Circuit inverse(const Circuit& c) {
  Circuit inv{c.n, {}};
  inv.gates.reserve(c.gates.size());
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) inv.gates.push_back(inverse(*it));
  return inv;
}

Statevector::Statevector(int n) : n_(n) {
  if (n < 1 || n > kMaxSimulatedQubits) throw InvalidArgument("statevector width out of range");
  amps_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension()));
  amps_(0) = 1.0;
}

Statevector::Statevector(int n, Eigen::VectorXcd amplitudes) : n_(n), amps_(std::move(amplitudes)) {
  if (n < 1 || n > kMaxSimulatedQubits) throw InvalidArgument("statevector width out of range");
  if (static_cast<std::uint64_t>(amps_.size()) != dimension()) {
    throw InvalidArgument("amplitude vector length must be 2^n");
  }
}

Statevector Statevector::basis(int n, std::uint64_t index) {
  Statevector s(n);
  if (index >= s.dimension()) throw InvalidArgument("basis index out of range");
  s.amps_(0) = 0.0;
  s.amps_(static_cast<Eigen::Index>(index)) = 1.0;
  return s;
}

Statevector plus_state(int n) {
  Statevector s(n);
  s.amplitudes().setConstant(std::pow(2.0, -0.5 * n));
  return s;
}

void apply_gate(Statevector& state, const Gate& g) {
  auto& a = state.amplitudes();
  for (int t : g.targets) {
    if (t < 0 || t >= state.qubits()) throw InvalidArgument("gate target out of range");
  }
  switch (g.kind) {
    case GateKind::BARRIER:
      return;
    case GateKind::X:
      apply_pauli(a, 1, g.targets.at(0));
      return;
    case GateKind::Y:
      apply_pauli(a, 2, g.targets.at(0));
      return;
    case GateKind::Z:
      apply_pauli(a, 3, g.targets.at(0));
      return;
    case GateKind::RZZ:
      apply_rzz(a, g.targets.at(0), g.targets.at(1), g.angle);
      return;
    case GateKind::CZ:
      apply_cz(a, g.targets.at(0), g.targets.at(1));
      return;
    case GateKind::RXXplusYY:
      apply_xx_plus_yy(a, g.targets.at(0), g.targets.at(1), g.angle);
      return;
    default:
      apply_single(a, g.targets.at(0), single_qubit_matrix(g));
      return;
  }
}

void apply_circuit_inplace(Statevector& state, const Circuit& c) {
  if (c.n != state.qubits()) throw InvalidArgument("circuit and state widths differ");
  for (const auto& g : c.gates) apply_gate(state, g);
}

Statevector apply_circuit(Statevector state, const Circuit& c) {
  apply_circuit_inplace(state, c);
  return state;
}

double expectation_diagonal(const Statevector& state, const Eigen::VectorXd& diagonal) {
  if (static_cast<std::uint64_t>(diagonal.size()) != state.dimension()) {
    throw InvalidArgument("observable dimension does not match the state");
  }
  return state.amplitudes().cwiseAbs2().dot(diagonal);
}

double expectation_ising(const Statevector& state, const IsingHamiltonian& h) {
  if (h.size() != state.qubits()) throw InvalidArgument("Hamiltonian and state widths differ");
  return expectation_diagonal(state, diagonal_energies(h));
}

std::vector<std::uint64_t> sample_indices(const Eigen::VectorXd& probabilities, std::int64_t shots, Rng& rng) {
  if (shots < 1) throw InvalidArgument("shots must be at least 1");
  std::vector<double> cdf(static_cast<std::size_t>(probabilities.size()));
  double running = 0.0;
  for (Eigen::Index k = 0; k < probabilities.size(); ++k) {
    running += std::max(0.0, probabilities(k));
    cdf[static_cast<std::size_t>(k)] = running;
  }
  if (!(running > 0.0)) throw InvalidArgument("cannot sample from an all-zero distribution");
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(shots));
  for (std::int64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * running;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    out.push_back(static_cast<std::uint64_t>(it - cdf.begin()));
  }
  return out;
}

Counts to_counts(const std::vector<std::uint64_t>& indices, int n) {
  std::map<std::uint64_t, std::int64_t> by_index;
  for (auto k : indices) ++by_index[k];
  Counts counts;
  for (const auto& [k, c] : by_index) counts.emplace(to_bitstring(k, n), c);
  return counts;
}

Counts sample_counts(const Eigen::VectorXd& probabilities, int n, std::int64_t shots, std::uint64_t seed) {
  Rng rng(seed);
  return to_counts(sample_indices(probabilities, shots, rng), n);
}

Counts sample_counts(const Statevector& state, std::int64_t shots, std::uint64_t seed) {
  return sample_counts(state.probabilities(), state.qubits(), shots, seed);
}

void NoiseModel::validate() const {
  check_probabilities(p1, "p1");
  check_probabilities(p2, "p2");
  check_probabilities(readout_flip, "readout_flip");
}

Eigen::VectorXd apply_readout_flips(Eigen::VectorXd probabilities, int n, double flip) {
  if (flip == 0.0) return probabilities;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (Eigen::Index k = 0; k < probabilities.size(); ++k) {
      const auto u = static_cast<std::uint64_t>(k);
      if (u & bit) continue;
      const auto j = static_cast<Eigen::Index>(u | bit);
      const double p0 = probabilities(k), p1 = probabilities(j);
      probabilities(k) = (1.0 - flip) * p0 + flip * p1;
      probabilities(j) = (1.0 - flip) * p1 + flip * p0;
    }
  }
  return probabilities;
}

NoisyResult run_noisy_detailed(const Circuit& c, const NoiseModel& noise, int trajectories, std::uint64_t seed,
                               const Eigen::VectorXd* observable) {
  if (trajectories < 1) throw InvalidArgument("trajectories must be at least 1");
  noise.validate();
  c.validate();

  Statevector ideal(c.n);
  apply_circuit_inplace(ideal, c);
  const Eigen::VectorXd ideal_probs = ideal.probabilities();
  const double ideal_energy = observable ? ideal_probs.dot(*observable) : 0.0;

  NoisyResult result;
  if (noise.gate_noiseless()) {
    result.probabilities = apply_readout_flips(ideal_probs, c.n, noise.readout_flip);
    result.energy = ideal_energy;
    return result;
  }

  struct Fault {
    std::size_t after_gate;
    int pauli_a;  // 0 = I
    int pauli_b;
  };

  const std::uint64_t stream = derive_seed(seed, noise.seed_stream);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(ideal_probs.size());
  double e_sum = 0.0, e_sq = 0.0;
  std::vector<Fault> faults;
  for (int t = 0; t < trajectories; ++t) {
    Rng rng(derive_seed(stream, static_cast<std::uint64_t>(t)));
    faults.clear();
    for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
      const Gate& g = c.gates[gi];
      if (g.kind == GateKind::BARRIER) continue;
      const bool two = is_two_qubit(g.kind);
      if (!rng.bernoulli(two ? noise.p2 : noise.p1)) continue;
      if (two) {
        const auto which = static_cast<int>(rng.below(15)) + 1;  // skip II
        faults.push_back({gi, which / 4, which % 4});
      } else {
        faults.push_back({gi, static_cast<int>(rng.below(3)) + 1, 0});
      }
    }

    double energy = ideal_energy;
    if (faults.empty()) {
      sum += ideal_probs;
    } else {
      Statevector s(c.n);
      auto next = faults.begin();
      for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
        apply_gate(s, c.gates[gi]);
        for (; next != faults.end() && next->after_gate == gi; ++next) {
          const Gate& g = c.gates[gi];
          if (next->pauli_a) apply_pauli(s.amplitudes(), next->pauli_a, g.targets[0]);
          if (next->pauli_b) apply_pauli(s.amplitudes(), next->pauli_b, g.targets[1]);
        }
      }
      const Eigen::VectorXd probs = s.probabilities();
      sum += probs;
      if (observable) energy = probs.dot(*observable);
    }
    e_sum += energy;
    e_sq += energy * energy;
  }

  const double tn = trajectories;
  result.probabilities = apply_readout_flips(sum / tn, c.n, noise.readout_flip);
  result.energy = e_sum / tn;
  if (trajectories > 1) {
    const double var = std::max(0.0, (e_sq - tn * result.energy * result.energy) / (tn - 1.0));
    result.energy_variance = var / tn;
  }
  return result;
}

Eigen::VectorXd run_noisy(const Circuit& c, const NoiseModel& noise, int trajectories, std::uint64_t seed) {
  return run_noisy_detailed(c, noise, trajectories, seed).probabilities;
}

std::vector<Gate> basis_change(Basis basis, int qubit) {
  if (basis == Basis::X) return {Gate::single(GateKind::H, qubit)};
  return {Gate::single(GateKind::SDG, qubit), Gate::single(GateKind::H, qubit)};
}

}  // namespace deal
