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

#include "deal/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "deal/errors.hpp"
#include "deal/random.hpp"

namespace deal {

namespace {

void check_distribution(const Eigen::VectorXd& p) {
  if (p.size() < 1 || !std::has_single_bit(static_cast<std::uint64_t>(p.size()))) {
    throw InvalidArgument("outcome distribution length must be a power of two");
  }
  if (!p.allFinite() || (p.array() < 0.0).any()) throw InvalidArgument("probabilities must be finite and non-negative");
  if (std::abs(p.sum() - 1.0) > 1e-9) throw InvalidArgument("probabilities must sum to 1");
}

double reference(double e_opt) {
  if (e_opt == 0.0) throw UndefinedMetric("relative error is undefined for a zero optimal energy");
  return std::abs(e_opt);
}

}  // namespace

double qnre(double e_obs, double e_opt) { return (e_obs - e_opt) / reference(e_opt); }

double qnre_noise_floored(double e_obs, double e_opt, double e_noise) {
  if (!(e_noise >= 0.0)) throw InvalidArgument("noise level must be non-negative");
  const double denom = reference(e_opt);
  return std::max(std::abs(e_obs - e_opt) - e_noise, 0.0) / denom;
}

double success_rate(const Counts& counts, const std::set<std::string>& optima) {
  std::int64_t total = 0, hits = 0;
  for (const auto& [bits, c] : counts) {
    if (c < 0) throw InvalidArgument("histogram counts must be non-negative");
    total += c;
    if (optima.count(bits)) hits += c;
  }
  if (total == 0) throw InvalidArgument("histogram is empty");
  return static_cast<double>(hits) / static_cast<double>(total);
}

double success_probability(const Eigen::VectorXd& probabilities, const std::vector<std::uint64_t>& optima) {
  double mass = 0.0;
  for (auto k : optima) {
    if (k >= static_cast<std::uint64_t>(probabilities.size())) throw InvalidArgument("optimal index out of range");
    mass += probabilities(static_cast<Eigen::Index>(k));
  }
  return mass;
}

double kl_to_uniform(const Eigen::VectorXd& probabilities) {
  check_distribution(probabilities);
  const auto size = static_cast<double>(probabilities.size());
  double kl = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) kl += p * std::log(p * size);
  }
  return std::max(kl, 0.0);
}

Eigen::VectorXd cdf_outcomes(const Eigen::VectorXd& probabilities) {
  check_distribution(probabilities);
  Eigen::VectorXd sorted = probabilities;
  std::sort(sorted.begin(), sorted.end());
  double acc = 0.0;
  for (double& v : sorted) v = (acc += v);
  return sorted;
}

double noise_scale(const std::function<double(std::uint64_t)>& evaluate, std::uint64_t seed, int repeats) {
  if (repeats < 2) throw InvalidArgument("noise estimate needs at least two repeats");
  Eigen::VectorXd e(repeats);
  for (int r = 0; r < repeats; ++r) e(r) = evaluate(derive_seed(seed, static_cast<std::uint64_t>(r)));
  const double mean = e.mean();
  return std::sqrt((e.array() - mean).square().sum() / (repeats - 1));
}

}  // namespace deal
