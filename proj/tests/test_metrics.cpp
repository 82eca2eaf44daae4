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
#include "deal/metrics.hpp"

using namespace deal;

namespace {

Eigen::VectorXd random_distribution(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd p(Eigen::Index{1} << n);
  for (auto& v : p) v = e(rng);
  return p / p.sum();
}

}  // namespace

TEST_CASE("qnre") {
  CHECK(qnre(-3.0, -3.0) == 0.0);
  CHECK(qnre(-0.5, -1.0) == 0.5);
  CHECK(qnre(11.0, 10.0) == doctest::Approx(0.1));
  CHECK_THROWS_AS(qnre(1.0, 0.0), UndefinedMetric);
  // A TSP-like pair with observed 22 and optimum 14 falls inside the 7.7-69 % band.
  const double band = qnre(22.0, 14.0);
  CHECK(band >= 0.077);
  CHECK(band <= 0.69);
}

TEST_CASE("noise-floored qnre") {
  CHECK(qnre_noise_floored(-0.95, -1.0, 0.1) == 0.0);
  CHECK(qnre_noise_floored(-0.4, -1.0, 0.1) == doctest::Approx(0.5));
  CHECK(qnre_noise_floored(-0.4, -1.0, 0.0) == doctest::Approx(std::abs(qnre(-0.4, -1.0))));
  CHECK_THROWS_AS(qnre_noise_floored(-0.4, 0.0, 0.1), UndefinedMetric);
  CHECK_THROWS_AS(qnre_noise_floored(-0.4, -1.0, -0.1), InvalidArgument);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 5), noise(0.001, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const double obs = u(rng), opt = u(rng), en = noise(rng);
    if (opt == 0.0 || obs == opt) continue;
    CHECK(qnre_noise_floored(obs, opt, en) <= std::abs(qnre(obs, opt)));
    CHECK(qnre_noise_floored(obs, opt, en) < std::abs(qnre(obs, opt)));
    CHECK(qnre_noise_floored(obs, opt, 0.0) == doctest::Approx(std::abs(qnre(obs, opt))));
  }
}

TEST_CASE("success rate") {
  CHECK(success_rate({{"01", 100}}, {"01", "10"}) == 1.0);
  CHECK(success_rate({{"00", 7}, {"11", 3}}, {"01", "10"}) == 0.0);
  CHECK(success_rate({{"01", 512}, {"00", 512}}, {"01", "10"}) == 0.5);
  CHECK_THROWS_AS(success_rate({}, {"01"}), InvalidArgument);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    Counts c{{"00", 1 + static_cast<std::int64_t>(rng() % 50)},
             {"01", static_cast<std::int64_t>(rng() % 50)},
             {"11", static_cast<std::int64_t>(rng() % 50)}};
    Counts scaled = c;
    for (auto& [k, v] : scaled) v *= 7;
    CHECK(success_rate(c, {"01"}) == doctest::Approx(success_rate(scaled, {"01"})));
  }
}

TEST_CASE("success probability") {
  const Eigen::Vector4d p(0.1, 0.4, 0.3, 0.2);
  CHECK(success_probability(p, {1, 2}) == doctest::Approx(0.7));
  CHECK(success_probability(p, {}) == 0.0);
}

TEST_CASE("kl to uniform") {
  CHECK(kl_to_uniform(Eigen::VectorXd::Constant(8, 0.125)) == doctest::Approx(0.0).epsilon(1e-15));
  Eigen::VectorXd point = Eigen::VectorXd::Zero(16);
  point(5) = 1.0;
  CHECK(std::abs(kl_to_uniform(point) - 4 * std::numbers::ln2) < 1e-12);
  CHECK(kl_to_uniform(Eigen::Vector4d(0.5, 0.25, 0.25, 0.0)) ==
        doctest::Approx(0.5 * std::numbers::ln2).epsilon(1e-12));
  CHECK(kl_to_uniform(Eigen::Vector4d(0.5, 0.25, 0.25, 0.0)) == doctest::Approx(0.3466).epsilon(1e-4));
  CHECK_THROWS_AS(kl_to_uniform(Eigen::Vector4d(1.2, -0.2, 0, 0)), InvalidArgument);
  CHECK_THROWS_AS(kl_to_uniform(Eigen::Vector3d(0.2, 0.3, 0.5)), InvalidArgument);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_distribution(1 + trial % 6, rng);
    double direct = 0.0;
    for (double v : p)
      if (v > 0) direct += v * std::log(v * static_cast<double>(p.size()));
    CHECK(kl_to_uniform(p) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(kl_to_uniform(p) > 0.0);
  }
}

TEST_CASE("outcome cdf") {
  CHECK(cdf_outcomes(Eigen::Vector4d::Constant(0.25)).isApprox(Eigen::Vector4d(0.25, 0.5, 0.75, 1.0)));
  CHECK(cdf_outcomes(Eigen::Vector4d(0, 0, 1, 0)) == Eigen::Vector4d(0, 0, 0, 1));
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = cdf_outcomes(random_distribution(1 + trial % 6, rng));
    for (Eigen::Index k = 1; k < c.size(); ++k) CHECK(c(k) >= c(k - 1));
    CHECK(std::abs(c(c.size() - 1) - 1.0) < 1e-9);
  }
}

TEST_CASE("noise scale") {
  CHECK(noise_scale([](std::uint64_t) { return -2.0; }, 1) == 0.0);
  std::vector<double> seen;
  const double sd = noise_scale(
      [&](std::uint64_t seed) {
        seen.push_back(static_cast<double>(seed % 1000));
        return seen.back();
      },
      7, 16);
  REQUIRE(seen.size() == 16);
  double mean = 0;
  for (double v : seen) mean += v / 16;
  double var = 0;
  for (double v : seen) var += (v - mean) * (v - mean) / 15;
  CHECK(sd == doctest::Approx(std::sqrt(var)));
  CHECK_THROWS_AS(noise_scale([](std::uint64_t) { return 0.0; }, 1, 1), InvalidArgument);
}
