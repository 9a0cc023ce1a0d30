/*
 * Copyright 2026 The gaugeblend Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "fixtures.hpp"
#include "gaugeblend/brnn.hpp"
#include "gaugeblend/learners.hpp"

using namespace gaugeblend;
using gaugeblend::testing::random_matrix;
using gaugeblend::testing::random_vector;

namespace {

// Network output written out directly: b2 + sum_h w2_h tanh(b1_h + W1_h . x).
double reference_forward(const std::vector<double>& w, std::size_t inputs, std::size_t hidden,
                         std::span<const double> x) {
  double out = w[hidden * inputs + 2 * hidden];
  for (std::size_t h = 0; h < hidden; ++h) {
    double a = w[hidden * inputs + h];
    for (std::size_t j = 0; j < inputs; ++j) a += w[h * inputs + j] * x[j];
    out += w[hidden * inputs + hidden + h] * std::tanh(a);
  }
  return out;
}

}  // namespace

TEST_CASE("parameter layout and forward pass") {
  CHECK(brnn::parameter_count(3, 4) == 4 * 3 + 4 + 4 + 1);
  Rng rng(1);
  const auto w = random_vector(brnn::parameter_count(3, 4), rng);
  const auto x = random_vector(3, rng);
  CHECK(brnn::forward(w, 3, 4, x) == doctest::Approx(reference_forward(w, 3, 4, x)).epsilon(1e-14));
}

TEST_CASE("loss parts match a direct loop") {
  Rng rng(2);
  const Matrix x = random_matrix(30, 2, rng);
  const auto y = random_vector(30, rng);
  const auto w = random_vector(brnn::parameter_count(2, 5), rng);
  double sse = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < 30; ++i) {
    const double e = reference_forward(w, 2, 5, x.row(i)) - y[i];
    sse += e * e;
  }
  for (double v : w) norm += v * v;
  const auto parts = brnn::loss_parts(w, x, y, 5);
  CHECK(parts.sse == doctest::Approx(sse).epsilon(1e-12));
  CHECK(parts.weight_norm2 == doctest::Approx(norm).epsilon(1e-12));
  CHECK(brnn::penalized_loss(w, x, y, 5, 0.3, 2.0) ==
        doctest::Approx(2.0 * sse + 0.3 * norm).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central differences at 20 random points") {
  Rng rng(3);
  const Matrix x = random_matrix(25, 3, rng);
  const auto y = random_vector(25, rng);
  const std::size_t hidden = 6;
  for (int point = 0; point < 20; ++point) {
    auto w = random_vector(brnn::parameter_count(3, hidden), rng, -1.5, 1.5);
    const double alpha = rng.uniform(0.001, 1.0), beta = rng.uniform(0.1, 5.0);
    const auto g = brnn::penalized_gradient(w, x, y, hidden, alpha, beta);
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(w[k]));
      const double keep = w[k];
      w[k] = keep + h;
      const double up = brnn::penalized_loss(w, x, y, hidden, alpha, beta);
      w[k] = keep - h;
      const double down = brnn::penalized_loss(w, x, y, hidden, alpha, beta);
      w[k] = keep;
      const double fd = (up - down) / (2.0 * h);
      CHECK(std::abs(g[k] - fd) <= 1e-4 * std::max(std::abs(fd), 1e-3));
    }
  }
}

TEST_CASE("output Jacobian matches central differences") {
  Rng rng(4);
  const Matrix x = random_matrix(6, 2, rng);
  auto w = random_vector(brnn::parameter_count(2, 3), rng);
  const Matrix j = brnn::output_jacobian(w, x, 3);
  REQUIRE(j.rows() == 6);
  REQUIRE(j.cols() == w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double keep = w[k];
    for (std::size_t i = 0; i < 6; ++i) {
      w[k] = keep + 1e-6;
      const double up = reference_forward(w, 2, 3, x.row(i));
      w[k] = keep - 1e-6;
      const double down = reference_forward(w, 2, 3, x.row(i));
      w[k] = keep;
      CHECK(j(i, k) == doctest::Approx((up - down) / 2e-6).epsilon(1e-6));
    }
  }
}

TEST_CASE("BRNN fits sin(2 pi x) better than the intercept-only model") {
  Matrix x(200, 1);
  std::vector<double> y;
  for (std::size_t i = 0; i < 200; ++i) {
    x(i, 0) = static_cast<double>(i) / 199.0;
    y.push_back(std::sin(2.0 * std::numbers::pi * x(i, 0)));
  }
  double mean = 0.0, var = 0.0;
  for (double v : y) mean += v;
  mean /= 200.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= 200.0;
  const auto m = fit(RegressorSpec::defaults(Algorithm::BRNN, 1), x, y);
  const auto p = m.predict(x);
  double mse = 0.0;
  for (std::size_t i = 0; i < 200; ++i) mse += (p[i] - y[i]) * (p[i] - y[i]);
  mse /= 200.0;
  CHECK(mse < var);
  CHECK(mse < 0.05 * var);
  const auto& state = std::get<BrnnModel>(m.state());
  CHECK(state.alpha > 0.0);
  CHECK(state.beta > 0.0);
  CHECK(state.steps <= 1000);
}

TEST_CASE("BRNN on a constant target predicts the constant") {
  Rng rng(5);
  const Matrix x = random_matrix(40, 2, rng);
  const std::vector<double> y(40, 12.5);
  const auto m = fit(RegressorSpec::defaults(Algorithm::BRNN), x, y);
  CHECK(m.metadata().degenerate_target);
  for (double v : m.predict(x)) CHECK(std::abs(v - 12.5) < 1e-6);
}

TEST_CASE("BRNN is deterministic for a seed") {
  Rng rng(6);
  const Matrix x = random_matrix(60, 2, rng);
  std::vector<double> y(60);
  for (std::size_t i = 0; i < 60; ++i) y[i] = x(i, 0) * x(i, 1);
  auto spec = RegressorSpec::defaults(Algorithm::BRNN, 4);
  spec.brnn.max_steps = 100;
  CHECK(fit(spec, x, y).state() == fit(spec, x, y).state());
}
