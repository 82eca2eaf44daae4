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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "deal/errors.hpp"
#include "deal/qpn.hpp"

using namespace deal;
using std::numbers::pi;

namespace {

Eigen::MatrixXd upper(int n, std::initializer_list<std::tuple<int, int, double>> terms) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j, v] : terms) m(i, j) = v;
  return m;
}

// Row sums of |Q| over both triangles, counting each diagonal entry once.
Eigen::VectorXd scores_oracle(const QuboInstance& q) {
  const int n = q.size();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        s(i) += std::abs(q.matrix()(i, i));
      } else {
        s(i) += std::abs(q.matrix()(std::min(i, j), std::max(i, j)));
      }
    }
  return s;
}

}  // namespace

TEST_CASE("importance scores") {
  CHECK(importance_scores(QuboInstance(upper(2, {{0, 1, 2.0}}))) == Eigen::Vector2d(2, 2));
  CHECK(importance_scores(QuboInstance(Eigen::MatrixXd::Zero(3, 3))) == Eigen::Vector3d::Zero());
  CHECK(importance_scores(QuboInstance(upper(2, {{0, 0, 1.0}, {0, 1, -3.0}}))) == Eigen::Vector2d(4, 3));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 7;
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = u(rng);
    const QuboInstance q(m);
    CHECK((importance_scores(q) - scores_oracle(q)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("normalize_weights") {
  CHECK(normalize_weights(Eigen::Vector2d(2, 2)).normalized.isApprox(Eigen::Vector2d(0.5, 0.5)));
  CHECK(normalize_weights(Eigen::Vector2d(1, 3)).normalized.isApprox(Eigen::Vector2d(0.25, 0.75)));
  CHECK(normalize_weights(Eigen::Vector3d::Zero()).normalized.isApprox(Eigen::Vector3d::Constant(1.0 / 3)));
  CHECK_THROWS_AS(normalize_weights(Eigen::Vector2d(-1, 2)), InvalidArgument);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 5);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd s(1 + trial % 9);
    for (auto& v : s) v = u(rng);
    const auto w = normalize_weights(s);
    CHECK((w.normalized.array() >= 0).all());
    CHECK(std::abs(w.normalized.sum() - 1.0) < 1e-12);
    CHECK(w.raw == s);
  }
}

TEST_CASE("angle tensors") {
  const Eigen::Vector2d half(0.5, 0.5);
  const auto t = angle_tensors(half, 1);
  CHECK(t.phi_gamma(0, 0) == doctest::Approx(pi * pi / 2));
  CHECK(t.phi_beta(0, 0) == doctest::Approx(0.0));

  const auto z = angle_tensors(Eigen::Vector3d(0, 0.5, 0.5), 4);
  CHECK(z.phi_gamma.col(0).isZero());
  CHECK(z.phi_beta.col(0).isZero());

  SUBCASE("formula recomputed entry by entry") {
    const Eigen::Vector4d w(0.1, 0.2, 0.3, 0.4);
    const int p = 5;
    const double lg = 2.0, lb = 1.0;
    const auto a = angle_tensors(w, p, lg, lb);
    for (int k = 1; k <= p; ++k)
      for (int i = 0; i < 4; ++i) {
        CHECK(a.phi_gamma(k - 1, i) == doctest::Approx(lg * k / p * std::acos(1 - 2 * w(i))));
        CHECK(a.phi_beta(k - 1, i) == doctest::Approx(lb * (1.0 - double(k) / p) * std::asin(std::sqrt(w(i)))));
      }
  }
  SUBCASE("invalid input") {
    CHECK_THROWS_AS(angle_tensors(half, 0), InvalidArgument);
    CHECK_THROWS_AS(angle_tensors(Eigen::Vector2d(0.5, 0.6), 1), InvalidArgument);
    CHECK_THROWS_AS(angle_tensors(half, 1, 0.0), InvalidArgument);
    CHECK_THROWS_AS(angle_tensors(half, 1, pi, 4.0), InvalidArgument);
  }
}

TEST_CASE("initial params") {
  const auto uniform4 = initial_params(angle_tensors(Eigen::Vector4d::Constant(0.25), 2));
  CHECK(uniform4.gammas(0) == doctest::Approx(pi * 0.5 * pi / 3));
  CHECK(uniform4.gammas(0) == doctest::Approx(1.6449).epsilon(1e-4));

  const auto single = initial_params(angle_tensors(importance_weights(QuboInstance(Eigen::MatrixXd::Zero(1, 1))).normalized, 3));
  CHECK(single.gammas(2) == doctest::Approx(pi * pi));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 6, p = 1 + trial % 5;
    Eigen::VectorXd s(n);
    for (auto& v : s) v = u(rng);
    const auto w = normalize_weights(s).normalized;
    const auto params = initial_params(angle_tensors(w, p));
    CHECK(params.betas(p - 1) == 0.0);
    for (int k = 1; k <= p; ++k) {
      // Closed form of the averaged cost angle.
      const double closed = pi * k / (n * p) * (1.0 - 2.0 * w.array()).acos().sum();
      CHECK(params.gammas(k - 1) == doctest::Approx(closed));
    }
    CHECK(initial_params(angle_tensors(w, p)).flatten() == params.flatten());
  }

  const auto floored = initial_params(angle_tensors(Eigen::Vector2d(0.5, 0.5), 2), 0.05);
  CHECK(floored.betas(1) == doctest::Approx(0.05));
}

TEST_CASE("layer grading and range") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 6, p = 1 + trial % 9;
    Eigen::VectorXd s(n);
    for (auto& v : s) v = u(rng);
    const auto t = angle_tensors(normalize_weights(s).normalized, p);
    for (int k = 1; k < p; ++k) {
      CHECK((t.phi_gamma.row(k).array() >= t.phi_gamma.row(k - 1).array()).all());
      CHECK((t.phi_beta.row(k).array() <= t.phi_beta.row(k - 1).array()).all());
    }
    CHECK(t.phi_gamma.minCoeff() >= 0.0);
    CHECK(t.phi_gamma.maxCoeff() <= pi * pi + 1e-12);
    CHECK(t.phi_beta.minCoeff() >= 0.0);
    CHECK(t.phi_beta.maxCoeff() <= pi / 2 * pi / 2 + 1e-12);
  }
}

TEST_CASE("scale invariance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2), c(0.01, 100);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5;
    Eigen::MatrixXd m(n, n);
    for (auto& v : m.reshaped()) v = u(rng);
    const double scale = c(rng);
    const auto a = initial_params(angle_tensors(importance_weights(QuboInstance(m)).normalized, 3));
    const auto b = initial_params(angle_tensors(importance_weights(QuboInstance(scale * m)).normalized, 3));
    CHECK((a.flatten() - b.flatten()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("flatten and unflatten") {
  const QaoaParams p{Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(4, 5, 6)};
  Eigen::VectorXd expected(6);
  expected << 1, 2, 3, 4, 5, 6;
  CHECK(p.flatten() == expected);
  const auto back = QaoaParams::unflatten(expected);
  CHECK(back.gammas == p.gammas);
  CHECK(back.betas == p.betas);
  CHECK_THROWS_AS(QaoaParams::unflatten(Eigen::VectorXd::Zero(3)), InvalidArgument);
}

TEST_CASE("random params") {
  CHECK(random_params(4, 9).flatten() == random_params(4, 9).flatten());
  CHECK(random_params(4, 9).flatten() != random_params(4, 10).flatten());
  CHECK_THROWS_AS(random_params(0, 1), InvalidArgument);

  const int p = 50000;
  const auto r = random_params(p, 11).flatten();
  CHECK(r.minCoeff() >= 0.0);
  CHECK(r.maxCoeff() < 2 * pi);
  const double mean = r.mean();
  const double var = (r.array() - mean).square().sum() / (r.size() - 1);
  const double expected = 4 * pi * pi / 12;
  CHECK(expected == doctest::Approx(3.2899).epsilon(1e-4));
  CHECK(std::abs(var - expected) / expected < 0.02);
}
