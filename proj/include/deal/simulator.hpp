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

#ifndef DEAL_SIMULATOR_HPP
#define DEAL_SIMULATOR_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "deal/problems.hpp"
#include "deal/random.hpp"

namespace deal {

using Complex = std::complex<double>;

// Gate conventions (all pinned by golden tests):
//   RX(t)        = exp(-i t/2 X)
//   RZ(t)        = diag(e^{-it/2}, e^{it/2})
//   RZZ(t)       = exp(-i t/2 Z(x)Z)
//   RXXplusYY(t) = exp(-i t/2 (XX + YY)/2)
//   SDG          = diag(1, -i), S = diag(1, i)
enum class GateKind { H, X, Y, Z, S, SDG, RX, RZ, RZZ, RXXplusYY, CZ, BARRIER };

std::string_view gate_name(GateKind kind);
GateKind gate_kind_from_name(std::string_view name);
bool is_two_qubit(GateKind kind);
bool has_angle(GateKind kind);

struct Gate {
  GateKind kind = GateKind::BARRIER;
  std::vector<int> targets;
  double angle = 0.0;

  static Gate single(GateKind kind, int q, double angle = 0.0) { return {kind, {q}, angle}; }
  static Gate pair(GateKind kind, int a, int b, double angle = 0.0) { return {kind, {a, b}, angle}; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Gate that undoes `g`.
Gate inverse(const Gate& g);

struct Circuit {
  int n = 0;
  std::vector<Gate> gates;

  /// Throws InvalidArgument when a gate has the wrong arity, repeated targets
  /// or targets outside [0, n).
  void validate() const;

  void append(const Circuit& other);
  std::size_t two_qubit_count() const;
};

/// Reversed sequence of inverted gates.
Circuit inverse(const Circuit& c);

/// Dense n-qubit state. Amplitude k holds basis state k with qubit b in bit b.
class Statevector {
 public:
  explicit Statevector(int n);
  Statevector(int n, Eigen::VectorXcd amplitudes);

  static Statevector basis(int n, std::uint64_t index);

  int qubits() const { return n_; }
  std::uint64_t dimension() const { return std::uint64_t{1} << n_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Eigen::VectorXcd& amplitudes() { return amps_; }

  Eigen::VectorXd probabilities() const { return amps_.cwiseAbs2(); }
  double norm() const { return amps_.norm(); }

 private:
  int n_;
  Eigen::VectorXcd amps_;
};

inline constexpr int kMaxSimulatedQubits = 26;

/// Uniform superposition |+>^n.
Statevector plus_state(int n);

void apply_gate(Statevector& state, const Gate& g);

/// In-place application of every gate in order.
void apply_circuit_inplace(Statevector& state, const Circuit& c);

Statevector apply_circuit(Statevector state, const Circuit& c);

/// <psi| diag(d) |psi>.
double expectation_diagonal(const Statevector& state, const Eigen::VectorXd& diagonal);

double expectation_ising(const Statevector& state, const IsingHamiltonian& h);

/// Histogram keyed by bitstring (qubit 0 rightmost).
using Counts = std::map<std::string, std::int64_t>;

/// Draws `shots` basis indices from a probability vector by inverse-CDF lookup.
std::vector<std::uint64_t> sample_indices(const Eigen::VectorXd& probabilities, std::int64_t shots, Rng& rng);

Counts to_counts(const std::vector<std::uint64_t>& indices, int n);

Counts sample_counts(const Statevector& state, std::int64_t shots, std::uint64_t seed);
Counts sample_counts(const Eigen::VectorXd& probabilities, int n, std::int64_t shots, std::uint64_t seed);

/// Stochastic Pauli noise. After every 1-qubit gate a uniformly random
/// non-identity Pauli hits the target with probability p1; after every
/// 2-qubit gate one of the 15 non-identity two-qubit Paulis hits the pair
/// with probability p2. Each measured bit flips with readout_flip.
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;
  double readout_flip = 0.0;
  std::uint64_t seed_stream = 0;

  void validate() const;
  bool gate_noiseless() const { return p1 == 0.0 && p2 == 0.0; }
  bool noiseless() const { return gate_noiseless() && readout_flip == 0.0; }
};

struct NoisyResult {
  Eigen::VectorXd probabilities;  ///< trajectory-averaged, readout flips applied
  double energy = 0.0;            ///< mean of the observable over trajectories (before readout)
  double energy_variance = 0.0;   ///< variance of that mean across trajectories
};

/// Monte-Carlo trajectory average of the circuit acting on |0...0>.
Eigen::VectorXd run_noisy(const Circuit& c, const NoiseModel& noise, int trajectories, std::uint64_t seed);

/// As run_noisy, additionally tracking a diagonal observable per trajectory.
NoisyResult run_noisy_detailed(const Circuit& c, const NoiseModel& noise, int trajectories, std::uint64_t seed,
                               const Eigen::VectorXd* observable = nullptr);

/// Exact effect of independent per-bit flips on an outcome distribution.
Eigen::VectorXd apply_readout_flips(Eigen::VectorXd probabilities, int n, double flip);

enum class Basis { X, Y };

/// Rotation that maps the requested basis onto the computational basis.
std::vector<Gate> basis_change(Basis basis, int qubit);

}  // namespace deal

#endif  // DEAL_SIMULATOR_HPP
