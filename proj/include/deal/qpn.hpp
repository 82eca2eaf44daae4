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

#ifndef DEAL_QPN_HPP
#define DEAL_QPN_HPP

#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

#include "deal/problems.hpp"

namespace deal {

// Qubit-prioritized normalization: per-qubit importance from the QUBO
// coefficients drives a deterministic, layer-graded parameter start.

struct ImportanceWeights {
  Eigen::VectorXd raw;         ///< s_i >= 0
  Eigen::VectorXd normalized;  ///< w_i >= 0, sum 1
};

/// Layer-by-qubit angle tables, row k-1 holds layer k.
struct AngleTensors {
  Eigen::MatrixXd phi_gamma;
  Eigen::MatrixXd phi_beta;
  double lambda_gamma = std::numbers::pi;
  double lambda_beta = std::numbers::pi / 2;

  int depth() const { return static_cast<int>(phi_gamma.rows()); }
  int qubits() const { return static_cast<int>(phi_gamma.cols()); }
};

/// theta = (gamma_1..gamma_p, beta_1..beta_p).
struct QaoaParams {
  Eigen::VectorXd gammas;
  Eigen::VectorXd betas;

  int depth() const { return static_cast<int>(gammas.size()); }

  Eigen::VectorXd flatten() const;
  static QaoaParams unflatten(const Eigen::VectorXd& theta);
};

/// s_i = sum_j |Q_ij| over the symmetrised matrix, diagonal counted once.
Eigen::VectorXd importance_scores(const QuboInstance& q);

/// w = s / sum(s); uniform when every score is zero.
ImportanceWeights normalize_weights(const Eigen::VectorXd& scores);

inline ImportanceWeights importance_weights(const QuboInstance& q) { return normalize_weights(importance_scores(q)); }

AngleTensors angle_tensors(const Eigen::VectorXd& weights, int depth, double lambda_gamma = std::numbers::pi,
                           double lambda_beta = std::numbers::pi / 2);

/// Layer angles as qubit averages of the tensors. `mixer_floor` is added to
/// every beta so the final layer does not start exactly at zero.
QaoaParams initial_params(const AngleTensors& tensors, double mixer_floor = 0.0);

/// Each angle uniform on [0, 2 pi).
QaoaParams random_params(int depth, std::uint64_t seed);

}  // namespace deal

#endif  // DEAL_QPN_HPP
