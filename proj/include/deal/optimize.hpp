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

#ifndef DEAL_OPTIMIZE_HPP
#define DEAL_OPTIMIZE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "deal/ansatz.hpp"
#include "deal/errors.hpp"
#include "deal/qpn.hpp"
#include "deal/simulator.hpp"
#include "deal/zne.hpp"

namespace deal {

enum class OptMethod { Simplex, PatternSearch };

std::string_view method_name(OptMethod method);
OptMethod method_from_name(std::string_view name);

struct OptimizerConfig {
  OptMethod method = OptMethod::Simplex;
  int budget = 200;
  double xtol = 1e-6;
  double ftol = 1e-9;
  std::int64_t shots = 1024;  ///< 0 selects exact expectations
  std::uint64_t seed = 0;
  double initial_step = 0.1;

  void validate() const;
};

struct TraceEntry {
  int t = 0;  ///< 1-based evaluation index
  Eigen::VectorXd theta;
  double f = 0.0;
  double best_f = 0.0;
};

struct OptTrace {
  std::vector<TraceEntry> entries;
  std::string stop_reason;

  std::size_t size() const { return entries.size(); }
  /// Columns t, f, best_f, theta_0 .. theta_{k-1}.
  void write_csv(std::ostream& out) const;
};

/// Raised when the objective returns NaN or infinity; carries the trace so far.
class NonFiniteObjective : public NumericalError {
 public:
  NonFiniteObjective(const std::string& what, OptTrace trace) : NumericalError(what), trace_(std::move(trace)) {}
  const OptTrace& trace() const { return trace_; }

 private:
  OptTrace trace_;
};

struct OptResult {
  Eigen::VectorXd theta;
  double f = 0.0;
  OptTrace trace;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Derivative-free minimisation; never evaluates more than config.budget times.
OptResult minimize(const Objective& objective, const Eigen::VectorXd& theta0, const OptimizerConfig& config);

struct EvalConfig {
  std::int64_t shots = 1024;  ///< 0 selects exact expectations
  NoiseModel noise;
  int trajectories = 64;
  std::optional<ZneConfig> zne;
  std::optional<PairScaleContext> context;
};

/// Energy estimator for one ansatz; caches the diagonal of H_C.
class EnergyEvaluator {
 public:
  EnergyEvaluator(AnsatzSpec spec, EvalConfig config);

  const AnsatzSpec& spec() const { return spec_; }
  const EvalConfig& config() const { return config_; }
  const Eigen::VectorXd& observable() const { return observable_; }

  double operator()(const QaoaParams& theta, std::uint64_t seed) const;

  /// Outcome distribution of the ansatz (readout flips included under noise).
  Eigen::VectorXd distribution(const QaoaParams& theta, std::uint64_t seed) const;

  /// Objective with a private evaluation counter; evaluation t uses derive_seed(seed, t).
  Objective objective(std::uint64_t seed) const;

 private:
  AnsatzSpec spec_;
  EvalConfig config_;
  Eigen::VectorXd observable_;
};

double evaluate_energy(const AnsatzSpec& spec, const QaoaParams& theta, const EvalConfig& config, std::uint64_t seed);

/// Mean of observable over `shots` samples of `probabilities`.
double sampled_mean(const Eigen::VectorXd& probabilities, const Eigen::VectorXd& observable, std::int64_t shots,
                    std::uint64_t seed);

}  // namespace deal

#endif  // DEAL_OPTIMIZE_HPP
