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

#ifndef DEAL_METRICS_HPP
#define DEAL_METRICS_HPP

#include <functional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "deal/simulator.hpp"

namespace deal {

/// (e_obs - e_opt) / |e_opt|.
double qnre(double e_obs, double e_opt);

/// max(|e_obs - e_opt| - e_noise, 0) / |e_opt|.
double qnre_noise_floored(double e_obs, double e_opt, double e_noise);

/// Fraction of shots on any bitstring in `optima`.
double success_rate(const Counts& counts, const std::set<std::string>& optima);

/// Probability mass on the optimal outcomes.
double success_probability(const Eigen::VectorXd& probabilities, const std::vector<std::uint64_t>& optima);

/// sum p_k ln(p_k 2^n), natural log, 0 ln 0 = 0.
double kl_to_uniform(const Eigen::VectorXd& probabilities);

/// Probabilities sorted ascending and cumulatively summed.
Eigen::VectorXd cdf_outcomes(const Eigen::VectorXd& probabilities);

/// Sample standard deviation of `repeats` evaluations of a noisy estimator.
double noise_scale(const std::function<double(std::uint64_t seed)>& evaluate, std::uint64_t seed, int repeats = 16);

struct MetricReport {
  double qnre = 0.0;
  double qnre_noise_floored = 0.0;
  double success_rate = 0.0;
  double kl_uniform = 0.0;
  Eigen::VectorXd cdf;
};

}  // namespace deal

#endif  // DEAL_METRICS_HPP
