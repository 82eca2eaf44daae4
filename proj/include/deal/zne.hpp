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

#ifndef DEAL_ZNE_HPP
#define DEAL_ZNE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "deal/errors.hpp"
#include "deal/qpn.hpp"
#include "deal/simulator.hpp"

namespace deal {

// Zero-noise extrapolation: amplify gate noise by unitary folding, measure
// at several amplification levels and extrapolate the observable to zero.

enum class FoldMode { Global, PerGate };

/// Per-gate: G -> G (G^dag G)^k. Global: C -> C (C^dag C)^k. k = (scale - 1) / 2.
Circuit fold_circuit(const Circuit& c, int scale, FoldMode mode);

/// Per-gate folding with an individual odd factor for every gate.
Circuit fold_gates(const Circuit& c, const std::vector<int>& factors);

/// Round half to even, move even results up to the next odd integer, floor at 1.
int to_odd_scale(double x);

/// Integer noise-scaling factor per interacting logical pair.
struct PairScale {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> lambda;     ///< odd, >= 1
  Eigen::VectorXd continuous;  ///< gain * w_i w_j d_ij before rounding
};

/// lambda_ij = to_odd(round(gain * w_i * w_j * d_ij)); `distances` indexes
/// logical pairs (already composed with the placement).
PairScale pair_scale_factors(const Eigen::VectorXd& weights, const Eigen::MatrixXi& distances,
                             const std::vector<std::pair<int, int>>& pairs, double gain = 1.0);

struct ScalePoint {
  double scale = 1.0;
  double expectation = 0.0;
  double variance = 0.0;
};

/// Noisy evaluation at one amplification level: (expectation, variance of that estimate).
using ScaleRunner = std::function<std::pair<double, double>(int scale)>;

std::vector<ScalePoint> measure_at_scales(const ScaleRunner& runner, const std::vector<int>& scales);

/// Least-squares polynomial coefficients, constant term first.
template <typename DerivedX, typename DerivedY>
Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, 1> polyfit(const Eigen::MatrixBase<DerivedX>& x,
                                                                    const Eigen::MatrixBase<DerivedY>& y,
                                                                    int degree) {
  using Scalar = typename DerivedX::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (x.size() != y.size() || degree < 0 || x.size() < degree + 1) {
    throw InvalidArgument("polynomial fit needs at least degree + 1 points");
  }
  Matrix v(x.size(), degree + 1);
  for (Eigen::Index r = 0; r < x.size(); ++r) {
    Scalar p(1);
    for (int c = 0; c <= degree; ++c, p *= x(r)) v(r, c) = p;
  }
  return v.colPivHouseholderQr().solve(y.template cast<Scalar>().eval());
}

template <typename Derived>
typename Derived::Scalar polyval(const Eigen::MatrixBase<Derived>& coeffs, typename Derived::Scalar x) {
  typename Derived::Scalar acc(0);
  for (Eigen::Index c = coeffs.size(); c-- > 0;) acc = acc * x + coeffs(c);
  return acc;
}

template <typename Derived>
typename Derived::Scalar polyder(const Eigen::MatrixBase<Derived>& coeffs, typename Derived::Scalar x) {
  typename Derived::Scalar acc(0);
  for (Eigen::Index c = coeffs.size(); c-- > 1;) acc = acc * x + static_cast<typename Derived::Scalar>(c) * coeffs(c);
  return acc;
}

/// Degree used by extrapolate_zero for `points` samples.
inline int extrapolation_degree(std::size_t points) { return static_cast<int>(std::min<std::size_t>(points - 1, 2)); }

/// Linear weights a with extrapolated value = a . expectations; the variance
/// of the estimate is sum a_k^2 var_k.
Eigen::VectorXd extrapolation_weights(const Eigen::VectorXd& scales);

/// Least-squares polynomial of degree min(#points - 1, 2) evaluated at zero.
double extrapolate_zero(const std::vector<ScalePoint>& points);

/// Propagated variance of extrapolate_zero from the per-point variances.
double extrapolation_variance(const std::vector<ScalePoint>& points);

struct BayesState {
  Eigen::VectorXd lambda;       ///< current scaling vector
  Eigen::MatrixXd sigma_prior;  ///< prior covariance
  double sigma_shot2 = 0.0;
  double sigma_gate2 = 0.0;
  Eigen::MatrixXd conn;      ///< connectivity-cost matrix scaling the gate-noise term
  Eigen::MatrixXd jacobian;  ///< d f / d lambda, one row per observation
  Eigen::VectorXd residual;  ///< f_obs - f(lambda)

  Eigen::MatrixXd noise_covariance() const;
};

/// lambda + Sigma_prior J^T Sigma_noise^{-1} r with
/// Sigma_noise = sigma_shot^2 I + sigma_gate^2 C_conn.
Eigen::VectorXd bayes_update(const BayesState& state);

/// Conjugates every RZZ by a random two-qubit Pauli that commutes with Z(x)Z.
Circuit twirl_circuit(const Circuit& c, std::uint64_t seed);

struct ZneConfig {
  std::vector<int> scales{1, 3, 5};
  FoldMode mode = FoldMode::PerGate;
  int trajectories = 256;
  std::int64_t shots = 1024;  ///< 0: exact expectation of the trajectory-averaged distribution
  double lambda_gain = 10.0;
  int refine_steps = 1;
  double sigma_gate2 = 1e-4;
  double prior_variance = 1.0;
  bool twirl = false;
};

/// Importance weights and placed logical distances used for pair scaling.
struct PairScaleContext {
  Eigen::VectorXd weights;
  Eigen::MatrixXi logical_distances;
  double connectivity_cost = 0.0;
};

struct ZneDiagnostics {
  std::vector<ScalePoint> points;  ///< scale field holds the nominal sweep scale
  std::vector<double> effective_scales;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> lambda_folded;
  Eigen::VectorXd lambda_refined;
  double raw = 0.0;
  double extrapolated = 0.0;
  std::vector<std::string> warnings;
};

struct ZneResult {
  double mitigated = 0.0;
  ZneDiagnostics diagnostics;
};

/// Fold, run under noise at every scale, optionally refine the pair scaling
/// vector with bayes_update, and extrapolate to zero noise. `observable`
/// is the diagonal of the measured operator.
ZneResult mitigated_expectation(const Circuit& circuit, const Eigen::VectorXd& observable, const NoiseModel& noise,
                                const ZneConfig& config, const std::optional<PairScaleContext>& context,
                                std::uint64_t seed);

/// Convenience overload building the circuit from parameters.
ZneResult mitigated_expectation(const std::function<Circuit(const QaoaParams&)>& builder, const QaoaParams& theta,
                                const Eigen::VectorXd& observable, const NoiseModel& noise, const ZneConfig& config,
                                const std::optional<PairScaleContext>& context, std::uint64_t seed);

}  // namespace deal

#endif  // DEAL_ZNE_HPP
