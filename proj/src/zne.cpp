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

#include "deal/zne.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "deal/random.hpp"

namespace deal {

namespace {

void check_odd_scale(int scale) {
  if (scale < 1 || scale % 2 == 0) {
    throw InvalidArgument("fold scale must be an odd positive integer, got " + std::to_string(scale));
  }
}

void check_distinct(const std::vector<double>& scales) {
  std::set<double> seen(scales.begin(), scales.end());
  if (seen.size() != scales.size()) throw InvalidArgument("scale factors must be distinct");
}

std::pair<int, int> pair_key(const Gate& g) {
  return {std::min(g.targets[0], g.targets[1]), std::max(g.targets[0], g.targets[1])};
}

Eigen::VectorXd column(const std::vector<ScalePoint>& points, double ScalePoint::*field) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) v(static_cast<Eigen::Index>(k)) = points[k].*field;
  return v;
}

// Noise-weighted fold factors: single-qubit gates follow the sweep scale s,
// a gate on pair m follows 1 + (s - 1) lambda_m, which is odd for odd
// integer lambda and reduces to s when lambda_m = 1.
class ScaleModel {
 public:
  ScaleModel(const Circuit& c, const NoiseModel& noise, const std::vector<std::pair<int, int>>& pairs) {
    std::map<std::pair<int, int>, int> index;
    for (std::size_t m = 0; m < pairs.size(); ++m) index[pairs[m]] = static_cast<int>(m);
    pair_weight_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pairs.size()));
    const bool unit = noise.gate_noiseless();
    for (const auto& g : c.gates) {
      if (g.kind == GateKind::BARRIER) continue;
      if (is_two_qubit(g.kind)) {
        const double wt = unit ? 1.0 : noise.p2;
        pair_weight_(index.at(pair_key(g))) += wt;
        total_ += wt;
      } else {
        const double wt = unit ? 1.0 : noise.p1;
        single_weight_ += wt;
        total_ += wt;
      }
    }
    if (total_ == 0.0) total_ = 1.0;
  }

  double effective(double s, const Eigen::VectorXd& lambda) const {
    const double pairs = pair_weight_.size() ? pair_weight_.dot((1.0 + (s - 1.0) * lambda.array()).matrix()) : 0.0;
    return (single_weight_ * s + pairs) / total_;
  }

  /// d effective / d lambda.
  Eigen::VectorXd gradient(double s) const { return pair_weight_ * ((s - 1.0) / total_); }

 private:
  Eigen::VectorXd pair_weight_;
  double single_weight_ = 0.0;
  double total_ = 0.0;
};

}  // namespace

Circuit fold_gates(const Circuit& c, const std::vector<int>& factors) {
  if (factors.size() != c.gates.size()) throw InvalidArgument("need one fold factor per gate");
  Circuit out{c.n, {}};
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    const int f = factors[i];
    check_odd_scale(f);
    out.gates.push_back(g);
    if (g.kind == GateKind::BARRIER) continue;
    const Gate inv = inverse(g);
    for (int k = 0; k < (f - 1) / 2; ++k) {
      out.gates.push_back(inv);
      out.gates.push_back(g);
    }
  }
  return out;
}

Circuit fold_circuit(const Circuit& c, int scale, FoldMode mode) {
  check_odd_scale(scale);
  if (mode == FoldMode::PerGate) return fold_gates(c, std::vector<int>(c.gates.size(), scale));
  Circuit out = c;
  const Circuit inv = inverse(c);
  for (int k = 0; k < (scale - 1) / 2; ++k) {
    out.append(inv);
    out.append(c);
  }
  return out;
}

int to_odd_scale(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("scale must be finite");
  const double r = std::nearbyint(x);  // default rounding mode: half to even
  if (r < 1.0) return 1;
  auto v = static_cast<int>(r);
  if (v % 2 == 0) ++v;
  return v;
}

PairScale pair_scale_factors(const Eigen::VectorXd& weights, const Eigen::MatrixXi& distances,
                             const std::vector<std::pair<int, int>>& pairs, double gain) {
  if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-9) {
    throw InvalidArgument("pair scaling needs importance weights forming a distribution");
  }
  if (!(gain > 0.0)) throw InvalidArgument("lambda gain must be positive");
  PairScale out;
  out.pairs = pairs;
  out.continuous.resize(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t m = 0; m < pairs.size(); ++m) {
    const auto [i, j] = pairs[m];
    if (i < 0 || j < 0 || i >= weights.size() || j >= weights.size()) throw InvalidArgument("pair out of range");
    const double product = gain * weights(i) * weights(j) * distances(i, j);
    out.continuous(static_cast<Eigen::Index>(m)) = product;
    out.lambda.push_back(to_odd_scale(product));
  }
  return out;
}

std::vector<ScalePoint> measure_at_scales(const ScaleRunner& runner, const std::vector<int>& scales) {
  if (scales.empty()) throw InvalidArgument("no scale factors given");
  std::vector<double> as_double(scales.begin(), scales.end());
  check_distinct(as_double);
  std::vector<ScalePoint> points;
  for (int s : scales) {
    if (s < 1) throw InvalidArgument("scale factors must be at least 1");
    const auto [e, v] = runner(s);
    points.push_back({static_cast<double>(s), e, v});
  }
  return points;
}

Eigen::VectorXd extrapolation_weights(const Eigen::VectorXd& scales) {
  if (scales.size() < 2) throw InvalidArgument("extrapolation needs at least two points");
  check_distinct({scales.data(), scales.data() + scales.size()});
  const int degree = extrapolation_degree(static_cast<std::size_t>(scales.size()));
  Eigen::MatrixXd v(scales.size(), degree + 1);
  for (Eigen::Index r = 0; r < scales.size(); ++r) {
    double p = 1.0;
    for (int c = 0; c <= degree; ++c, p *= scales(r)) v(r, c) = p;
  }
  const Eigen::MatrixXd pinv =
      v.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(scales.size(), scales.size()));
  return pinv.row(0).transpose();
}

double extrapolate_zero(const std::vector<ScalePoint>& points) {
  if (points.size() < 2) throw InvalidArgument("extrapolation needs at least two points");
  const Eigen::VectorXd x = column(points, &ScalePoint::scale);
  check_distinct({x.data(), x.data() + x.size()});
  const Eigen::VectorXd y = column(points, &ScalePoint::expectation);
  return polyfit(x, y, extrapolation_degree(points.size()))(0);
}

double extrapolation_variance(const std::vector<ScalePoint>& points) {
  const Eigen::VectorXd a = extrapolation_weights(column(points, &ScalePoint::scale));
  return a.cwiseAbs2().dot(column(points, &ScalePoint::variance));
}

Eigen::MatrixXd BayesState::noise_covariance() const {
  const Eigen::Index k = residual.size();
  Eigen::MatrixXd cov = sigma_shot2 * Eigen::MatrixXd::Identity(k, k);
  if (conn.size() != 0) {
    if (conn.rows() != k || conn.cols() != k) throw InvalidArgument("connectivity matrix has the wrong shape");
    cov += sigma_gate2 * conn;
  }
  return cov;
}

Eigen::VectorXd bayes_update(const BayesState& state) {
  const Eigen::Index k = state.residual.size(), m = state.lambda.size();
  if (state.jacobian.rows() != k || state.jacobian.cols() != m) throw InvalidArgument("Jacobian has the wrong shape");
  if (state.sigma_prior.rows() != m || state.sigma_prior.cols() != m) {
    throw InvalidArgument("prior covariance has the wrong shape");
  }
  const Eigen::MatrixXd noise = state.noise_covariance();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(noise);
  if (!lu.isInvertible()) {
    throw NumericalError("noise covariance is singular (sigma_shot^2 = " + std::to_string(state.sigma_shot2) +
                         ", sigma_gate^2 = " + std::to_string(state.sigma_gate2) + ")");
  }
  return state.lambda + state.sigma_prior * state.jacobian.transpose() * lu.solve(state.residual);
}

Circuit twirl_circuit(const Circuit& c, std::uint64_t seed) {
  // Pairs P (x) Q with P, Q both in {I, Z} or both in {X, Y}.
  static constexpr std::array<std::array<GateKind, 2>, 8> kCommuting{{
      {GateKind::BARRIER, GateKind::BARRIER},
      {GateKind::BARRIER, GateKind::Z},
      {GateKind::Z, GateKind::BARRIER},
      {GateKind::Z, GateKind::Z},
      {GateKind::X, GateKind::X},
      {GateKind::Y, GateKind::Y},
      {GateKind::X, GateKind::Y},
      {GateKind::Y, GateKind::X},
  }};
  Rng rng(seed);
  Circuit out{c.n, {}};
  for (const auto& g : c.gates) {
    if (g.kind != GateKind::RZZ) {
      out.gates.push_back(g);
      continue;
    }
    const auto& pick = kCommuting[rng.below(kCommuting.size())];
    auto frame = [&] {
      for (int t = 0; t < 2; ++t) {
        if (pick[static_cast<std::size_t>(t)] != GateKind::BARRIER) {
          out.gates.push_back(Gate::single(pick[static_cast<std::size_t>(t)], g.targets[static_cast<std::size_t>(t)]));
        }
      }
    };
    frame();
    out.gates.push_back(g);
    frame();
  }
  return out;
}

ZneResult mitigated_expectation(const Circuit& circuit, const Eigen::VectorXd& observable, const NoiseModel& noise,
                                const ZneConfig& config, const std::optional<PairScaleContext>& context,
                                std::uint64_t seed) {
  circuit.validate();
  noise.validate();
  if (config.scales.empty()) throw InvalidArgument("no scale factors given");
  for (int s : config.scales) check_odd_scale(s);
  if (config.trajectories < 1) throw InvalidArgument("trajectories must be at least 1");
  if (config.shots < 0) throw InvalidArgument("shots must be non-negative");

  ZneResult result;
  auto& diag = result.diagnostics;

  // Interacting pairs in order of first appearance.
  std::vector<std::pair<int, int>> pairs;
  {
    std::set<std::pair<int, int>> seen;
    for (const auto& g : circuit.gates) {
      if (is_two_qubit(g.kind) && seen.insert(pair_key(g)).second) pairs.push_back(pair_key(g));
    }
  }
  diag.pairs = pairs;
  diag.lambda_folded.assign(pairs.size(), 1);
  if (context && config.mode == FoldMode::PerGate && !pairs.empty()) {
    diag.lambda_folded = pair_scale_factors(context->weights, context->logical_distances, pairs, config.lambda_gain).lambda;
  } else if (context && config.mode == FoldMode::Global) {
    diag.warnings.emplace_back("global folding ignores per-pair scale factors");
  }
  std::map<std::pair<int, int>, int> lambda_of;
  for (std::size_t m = 0; m < pairs.size(); ++m) lambda_of[pairs[m]] = diag.lambda_folded[m];

  auto run_at = [&](int scale, std::uint64_t stream) -> std::pair<double, double> {
    Circuit folded;
    if (config.mode == FoldMode::Global) {
      folded = fold_circuit(circuit, scale, FoldMode::Global);
    } else {
      std::vector<int> factors;
      factors.reserve(circuit.gates.size());
      for (const auto& g : circuit.gates) {
        factors.push_back(is_two_qubit(g.kind) ? 1 + (scale - 1) * lambda_of.at(pair_key(g)) : scale);
      }
      folded = fold_gates(circuit, factors);
    }
    if (config.twirl) folded = twirl_circuit(folded, derive_seed(stream, 1));
    const auto run = run_noisy_detailed(folded, noise, config.trajectories, derive_seed(stream, 2), &observable);
    if (config.shots == 0) return {run.probabilities.dot(observable), run.energy_variance};
    Rng rng(derive_seed(stream, 3));
    const auto samples = sample_indices(run.probabilities, config.shots, rng);
    double sum = 0.0, sq = 0.0;
    for (auto k : samples) {
      const double e = observable(static_cast<Eigen::Index>(k));
      sum += e;
      sq += e * e;
    }
    const double n = static_cast<double>(config.shots);
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, var / n};
  };

  diag.points = measure_at_scales(
      [&](int scale) { return run_at(scale, derive_seed(seed, static_cast<std::uint64_t>(scale))); }, config.scales);

  const auto unit = std::find_if(diag.points.begin(), diag.points.end(), [](const auto& p) { return p.scale == 1.0; });
  diag.raw = unit != diag.points.end() ? unit->expectation : run_at(1, derive_seed(seed, 1)).first;

  const ScaleModel model(circuit, noise, config.mode == FoldMode::PerGate ? pairs : std::vector<std::pair<int, int>>{});
  Eigen::VectorXd lambda(static_cast<Eigen::Index>(config.mode == FoldMode::PerGate ? pairs.size() : 0));
  for (Eigen::Index m = 0; m < lambda.size(); ++m) lambda(m) = diag.lambda_folded[static_cast<std::size_t>(m)];

  const Eigen::VectorXd observed = column(diag.points, &ScalePoint::expectation);
  auto effective_scales = [&](const Eigen::VectorXd& lam) {
    Eigen::VectorXd x(observed.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = model.effective(diag.points[static_cast<std::size_t>(k)].scale, lam);
    return x;
  };

  if (diag.points.size() < 2) {
    diag.warnings.emplace_back("a single scale cannot be extrapolated; returning the raw value");
    diag.effective_scales = {1.0};
    diag.lambda_refined = lambda;
    diag.extrapolated = diag.raw;
    result.mitigated = diag.raw;
    return result;
  }

  const int degree = extrapolation_degree(diag.points.size());
  if (lambda.size() > 0) {
    const double shot_var = column(diag.points, &ScalePoint::variance).mean();
    const Eigen::Index k = observed.size();
    for (int step = 0; step < config.refine_steps; ++step) {
      const Eigen::VectorXd x = effective_scales(lambda);
      const Eigen::VectorXd coeffs = polyfit(x, observed, degree);
      BayesState state;
      state.lambda = lambda;
      state.sigma_prior = config.prior_variance * Eigen::MatrixXd::Identity(lambda.size(), lambda.size());
      state.sigma_shot2 = shot_var;
      state.sigma_gate2 = config.sigma_gate2;
      state.conn = (context ? context->connectivity_cost : 0.0) * Eigen::MatrixXd::Identity(k, k);
      state.residual.resize(k);
      state.jacobian.resize(k, lambda.size());
      for (Eigen::Index r = 0; r < k; ++r) {
        state.residual(r) = observed(r) - polyval(coeffs, x(r));
        state.jacobian.row(r) =
            polyder(coeffs, x(r)) * model.gradient(diag.points[static_cast<std::size_t>(r)].scale).transpose();
      }
      try {
        lambda = bayes_update(state).cwiseMax(1.0);
      } catch (const NumericalError& e) {
        diag.warnings.emplace_back(std::string("lambda refinement skipped: ") + e.what());
        break;
      }
    }
  }

  const Eigen::VectorXd x = effective_scales(lambda);
  diag.effective_scales.assign(x.data(), x.data() + x.size());
  diag.lambda_refined = lambda;
  if (std::set<double>(diag.effective_scales.begin(), diag.effective_scales.end()).size() != diag.points.size()) {
    throw NumericalError("effective noise scales collapsed; cannot extrapolate");
  }
  diag.extrapolated = polyfit(x, observed, degree)(0);
  result.mitigated = diag.extrapolated;
  return result;
}

ZneResult mitigated_expectation(const std::function<Circuit(const QaoaParams&)>& builder, const QaoaParams& theta,
                                const Eigen::VectorXd& observable, const NoiseModel& noise, const ZneConfig& config,
                                const std::optional<PairScaleContext>& context, std::uint64_t seed) {
  return mitigated_expectation(builder(theta), observable, noise, config, context, seed);
}

}  // namespace deal
