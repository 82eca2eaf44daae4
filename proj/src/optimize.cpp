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

#include "deal/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include "deal/random.hpp"

namespace deal {

std::string_view method_name(OptMethod method) {
  return method == OptMethod::Simplex ? "simplex" : "pattern-search";
}

OptMethod method_from_name(std::string_view name) {
  if (name == "simplex" || name == "nelder-mead") return OptMethod::Simplex;
  if (name == "pattern-search" || name == "pattern_search" || name == "compass") return OptMethod::PatternSearch;
  throw InvalidArgument("unknown optimizer method '" + std::string(name) + "'");
}

void OptimizerConfig::validate() const {
  if (budget < 1) throw InvalidArgument("optimizer budget must be at least 1");
  if (shots < 0) throw InvalidArgument("shots must be non-negative");
  if (!(xtol >= 0.0) || !(ftol >= 0.0)) throw InvalidArgument("tolerances must be non-negative");
  if (!(initial_step > 0.0)) throw InvalidArgument("initial step must be positive");
}

void OptTrace::write_csv(std::ostream& out) const {
  const Eigen::Index k = entries.empty() ? 0 : entries.front().theta.size();
  out << "t,f,best_f";
  for (Eigen::Index i = 0; i < k; ++i) out << ",theta_" << i;
  out << '\n';
  const auto old = out.precision(17);
  for (const auto& e : entries) {
    out << e.t << ',' << e.f << ',' << e.best_f;
    for (Eigen::Index i = 0; i < e.theta.size(); ++i) out << ',' << e.theta(i);
    out << '\n';
  }
  out.precision(old);
}

namespace {

struct BudgetExhausted {};

// Wraps the objective with budget accounting and trace bookkeeping.
class Recorder {
 public:
  Recorder(const Objective& f, int budget) : f_(f), budget_(budget) {}

  double operator()(const Eigen::VectorXd& x) {
    if (static_cast<int>(trace.entries.size()) >= budget_) throw BudgetExhausted{};
    const double value = f_(x);
    const int t = static_cast<int>(trace.entries.size()) + 1;
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "objective returned a non-finite value at evaluation " << t;
      trace.stop_reason = "non-finite objective";
      throw NonFiniteObjective(msg.str(), trace);
    }
    if (trace.entries.empty() || value < best_f) {
      best_f = value;
      best_x = x;
    }
    trace.entries.push_back({t, x, value, best_f});
    return value;
  }

  OptTrace trace;
  Eigen::VectorXd best_x;
  double best_f = std::numeric_limits<double>::infinity();

 private:
  const Objective& f_;
  int budget_;
};

void nelder_mead(Recorder& eval, const Eigen::VectorXd& x0, const OptimizerConfig& config) {
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  const Eigen::Index n = x0.size();
  std::vector<Eigen::VectorXd> x{x0};
  std::vector<double> f{eval(x0)};
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd v = x0;
    v(i) += config.initial_step;
    x.push_back(v);
    f.push_back(eval(v));
  }
  std::vector<std::size_t> order(x.size());
  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return f[a] < f[b]; });
    std::vector<Eigen::VectorXd> xs;
    std::vector<double> fs;
    for (auto k : order) {
      xs.push_back(x[k]);
      fs.push_back(f[k]);
    }
    x = std::move(xs);
    f = std::move(fs);

    double diameter = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) diameter = std::max(diameter, (x[k] - x[0]).lpNorm<Eigen::Infinity>());
    if (diameter < config.xtol && f.back() - f.front() < config.ftol) {
      eval.trace.stop_reason = "converged";
      return;
    }

    const std::size_t worst = x.size() - 1;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < worst; ++k) centroid += x[k];
    centroid /= static_cast<double>(worst);

    const Eigen::VectorXd xr = centroid + kReflect * (centroid - x[worst]);
    const double fr = eval(xr);
    if (fr < f[0]) {
      const Eigen::VectorXd xe = centroid + kExpand * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        x[worst] = xe, f[worst] = fe;
      } else {
        x[worst] = xr, f[worst] = fr;
      }
      continue;
    }
    if (fr < f[worst - 1]) {
      x[worst] = xr, f[worst] = fr;
      continue;
    }
    if (fr < f[worst]) {
      const Eigen::VectorXd xc = centroid + kContract * (xr - centroid);
      const double fc = eval(xc);
      if (fc <= fr) {
        x[worst] = xc, f[worst] = fc;
        continue;
      }
    } else {
      const Eigen::VectorXd xc = centroid + kContract * (x[worst] - centroid);
      const double fc = eval(xc);
      if (fc < f[worst]) {
        x[worst] = xc, f[worst] = fc;
        continue;
      }
    }
    for (std::size_t k = 1; k < x.size(); ++k) {
      x[k] = x[0] + kShrink * (x[k] - x[0]);
      f[k] = eval(x[k]);
    }
  }
}

void pattern_search(Recorder& eval, const Eigen::VectorXd& x0, const OptimizerConfig& config) {
  Eigen::VectorXd x = x0;
  double fx = eval(x);
  double step = config.initial_step;
  while (step >= std::max(config.xtol, std::numeric_limits<double>::epsilon())) {
    bool moved = false;
    for (Eigen::Index i = 0; i < x.size() && !moved; ++i) {
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd y = x;
        y(i) += sign * step;
        const double fy = eval(y);
        if (fy < fx - config.ftol) {
          x = y, fx = fy;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  eval.trace.stop_reason = "converged";
}

}  // namespace

OptResult minimize(const Objective& objective, const Eigen::VectorXd& theta0, const OptimizerConfig& config) {
  config.validate();
  if (theta0.size() < 1) throw InvalidArgument("parameter vector is empty");
  if (!theta0.allFinite()) throw InvalidArgument("initial parameters must be finite");
  Recorder eval(objective, config.budget);
  try {
    if (config.method == OptMethod::Simplex) {
      nelder_mead(eval, theta0, config);
    } else {
      pattern_search(eval, theta0, config);
    }
  } catch (const BudgetExhausted&) {
    eval.trace.stop_reason = "budget";
  }
  return {eval.best_x, eval.best_f, std::move(eval.trace)};
}

double sampled_mean(const Eigen::VectorXd& probabilities, const Eigen::VectorXd& observable, std::int64_t shots,
                    std::uint64_t seed) {
  if (shots < 1) throw InvalidArgument("sampling needs at least one shot");
  Rng rng(seed);
  double sum = 0.0;
  for (auto k : sample_indices(probabilities, shots, rng)) sum += observable(static_cast<Eigen::Index>(k));
  return sum / static_cast<double>(shots);
}

EnergyEvaluator::EnergyEvaluator(AnsatzSpec spec, EvalConfig config)
    : spec_(std::move(spec)), config_(std::move(config)) {
  spec_.validate();
  config_.noise.validate();
  if (config_.shots < 0) throw InvalidArgument("shots must be non-negative");
  if (config_.trajectories < 1) throw InvalidArgument("trajectories must be at least 1");
  observable_ = diagonal_energies(spec_.hamiltonian);
}

Eigen::VectorXd EnergyEvaluator::distribution(const QaoaParams& theta, std::uint64_t seed) const {
  const Circuit c = build_circuit(spec_, theta);
  if (config_.noise.noiseless()) return apply_circuit(Statevector(c.n), c).probabilities();
  return run_noisy(c, config_.noise, config_.noise.gate_noiseless() ? 1 : config_.trajectories, seed);
}

double EnergyEvaluator::operator()(const QaoaParams& theta, std::uint64_t seed) const {
  if (!theta.gammas.allFinite() || !theta.betas.allFinite()) throw InvalidArgument("parameters must be finite");
  if (config_.zne) {
    ZneConfig zc = *config_.zne;
    zc.shots = config_.shots;
    zc.trajectories = config_.trajectories;
    return mitigated_expectation(build_circuit(spec_, theta), observable_, config_.noise, zc, config_.context,
                                 derive_seed(seed, 1))
        .mitigated;
  }
  const Eigen::VectorXd probs = distribution(theta, derive_seed(seed, 2));
  if (config_.shots == 0) return probs.dot(observable_);
  return sampled_mean(probs, observable_, config_.shots, derive_seed(seed, 3));
}

Objective EnergyEvaluator::objective(std::uint64_t seed) const {
  auto counter = std::make_shared<std::uint64_t>(0);
  return [this, seed, counter](const Eigen::VectorXd& theta) {
    return (*this)(QaoaParams::unflatten(theta), derive_seed(seed, ++*counter));
  };
}

double evaluate_energy(const AnsatzSpec& spec, const QaoaParams& theta, const EvalConfig& config, std::uint64_t seed) {
  return EnergyEvaluator(spec, config)(theta, seed);
}

}  // namespace deal
