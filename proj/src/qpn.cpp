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

#include "deal/qpn.hpp"

#include <cmath>

#include "deal/errors.hpp"
#include "deal/random.hpp"

namespace deal {

Eigen::VectorXd QaoaParams::flatten() const {
  Eigen::VectorXd theta(gammas.size() + betas.size());
  theta << gammas, betas;
  return theta;
}

QaoaParams QaoaParams::unflatten(const Eigen::VectorXd& theta) {
  if (theta.size() % 2 != 0) throw InvalidArgument("theta must hold 2p entries");
  const Eigen::Index p = theta.size() / 2;
  return {theta.head(p), theta.tail(p)};
}

Eigen::VectorXd importance_scores(const QuboInstance& q) {
  const Eigen::MatrixXd a = q.matrix().cwiseAbs();
  Eigen::VectorXd s = (a + a.transpose()).rowwise().sum();
  s -= a.diagonal();
  return s;
}

ImportanceWeights normalize_weights(const Eigen::VectorXd& scores) {
  if (scores.size() == 0) throw InvalidArgument("no scores to normalise");
  if ((scores.array() < 0.0).any() || !scores.allFinite()) {
    throw InvalidArgument("importance scores must be finite and non-negative");
  }
  const double total = scores.sum();
  ImportanceWeights w{scores, {}};
  if (total > 0.0) {
    w.normalized = scores / total;
  } else {
    w.normalized = Eigen::VectorXd::Constant(scores.size(), 1.0 / static_cast<double>(scores.size()));
  }
  return w;
}

AngleTensors angle_tensors(const Eigen::VectorXd& weights, int depth, double lambda_gamma, double lambda_beta) {
  if (depth < 1) throw InvalidArgument("depth must be at least 1");
  constexpr double pi = std::numbers::pi;
  if (!(lambda_gamma > 0.0 && lambda_gamma <= pi) || !(lambda_beta > 0.0 && lambda_beta <= pi)) {
    throw InvalidArgument("scaling factors must lie in (0, pi]");
  }
  if (weights.size() == 0 || (weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-9) {
    throw InvalidArgument("weights must form a probability distribution");
  }

  // Clamp guards arccos/arcsin against last-ulp excursions beyond [0, 1].
  const Eigen::ArrayXd w = weights.array().min(1.0);
  const Eigen::RowVectorXd cost_angle = (1.0 - 2.0 * w).acos().matrix().transpose();
  const Eigen::RowVectorXd mixer_angle = w.sqrt().asin().matrix().transpose();

  AngleTensors t;
  t.lambda_gamma = lambda_gamma;
  t.lambda_beta = lambda_beta;
  t.phi_gamma.resize(depth, weights.size());
  t.phi_beta.resize(depth, weights.size());
  for (int k = 1; k <= depth; ++k) {
    const double frac = static_cast<double>(k) / depth;
    t.phi_gamma.row(k - 1) = lambda_gamma * frac * cost_angle;
    t.phi_beta.row(k - 1) = lambda_beta * (1.0 - frac) * mixer_angle;
  }
  return t;
}

QaoaParams initial_params(const AngleTensors& tensors, double mixer_floor) {
  QaoaParams params;
  params.gammas = tensors.phi_gamma.rowwise().mean();
  params.betas = tensors.phi_beta.rowwise().mean().array() + mixer_floor;
  return params;
}

QaoaParams random_params(int depth, std::uint64_t seed) {
  if (depth < 1) throw InvalidArgument("depth must be at least 1");
  Rng rng(seed);
  QaoaParams params{Eigen::VectorXd(depth), Eigen::VectorXd(depth)};
  const double two_pi = 2.0 * std::numbers::pi;
  for (int k = 0; k < depth; ++k) params.gammas(k) = rng.uniform(0.0, two_pi);
  for (int k = 0; k < depth; ++k) params.betas(k) = rng.uniform(0.0, two_pi);
  return params;
}

}  // namespace deal
