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

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

#include "fixtures.hpp"
#include "gaugeblend/learners.hpp"

using namespace gaugeblend;
using gaugeblend::testing::random_matrix;

namespace {

const MarsModel& mars(const FittedRegressor& m) { return std::get<MarsModel>(m.state()); }

double training_mse(const FittedRegressor& m, const Matrix& x, const std::vector<double>& y) {
  const auto p = m.predict(x);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (p[i] - y[i]) * (p[i] - y[i]);
  return s / static_cast<double>(y.size());
}

// GCV recomputed from the model's own predictions, with C(k) = k + 3 (k - 1) / 2.
double gcv_oracle(const FittedRegressor& m, const Matrix& x, const std::vector<double>& y) {
  const double n = static_cast<double>(y.size());
  const double k = static_cast<double>(mars(m).terms.size());
  const double c = k + 3.0 * (k - 1.0) / 2.0;
  return training_mse(m, x, y) * n / (n * (1.0 - c / n) * (1.0 - c / n));
}

struct Data {
  Matrix x;
  std::vector<double> y;
};

Data nonlinear(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Data d{random_matrix(n, 4, rng, -2.0, 2.0), {}};
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = d.x.row(i);
    d.y.push_back(std::max(0.0, r[0] - 0.3) * 3.0 + std::abs(r[1]) + 0.5 * r[2] +
                  rng.normal(0.0, 0.1));
  }
  return d;
}

}  // namespace

TEST_CASE("MARS represents a kink that LR cannot") {
  Matrix x(101, 1);
  std::vector<double> y;
  for (int i = 0; i <= 100; ++i) {
    x(i, 0) = i / 100.0;
    y.push_back(std::abs(x(i, 0) - 0.5));
  }
  const auto m = fit(RegressorSpec::defaults(Algorithm::MARS), x, y);
  const auto lr = fit(RegressorSpec::defaults(Algorithm::LR), x, y);
  CHECK(training_mse(m, x, y) < training_mse(lr, x, y));
  CHECK(training_mse(m, x, y) < 1e-10);
}

TEST_CASE("MARS basis count and GCV bookkeeping") {
  const auto d = nonlinear(400, 1);
  for (auto algo : {Algorithm::MARS, Algorithm::PolyMARS}) {
    const auto m = fit(RegressorSpec::defaults(algo), d.x, d.y);
    const std::size_t limit = std::max<std::size_t>(21, 2 * 4 + 1);
    CHECK(mars(m).forward_terms <= limit);
    CHECK(mars(m).terms.size() <= mars(m).forward_terms);
    CHECK(mars(m).terms[0].kind == BasisFunction::Kind::Intercept);
    // backward pass never ends above the forward model
    CHECK(mars(m).gcv <= mars(m).gcv_forward);
    CHECK(mars(m).gcv == doctest::Approx(gcv_oracle(m, d.x, d.y)).epsilon(1e-9));
  }
}

TEST_CASE("MARS respects a configured term limit") {
  const auto d = nonlinear(300, 2);
  auto spec = RegressorSpec::defaults(Algorithm::MARS);
  spec.mars.max_terms = 5;
  const auto m = fit(spec, d.x, d.y);
  CHECK(mars(m).forward_terms <= 5);
  CHECK(mars(m).terms.size() <= 5);
}

TEST_CASE("PolyMARS keeps a linear term under every hinge") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = nonlinear(300, seed);
    const auto m = fit(RegressorSpec::defaults(Algorithm::PolyMARS), d.x, d.y);
    bool any_hinge = false;
    for (const auto& t : mars(m).terms) {
      if (t.kind != BasisFunction::Kind::HingeUp && t.kind != BasisFunction::Kind::HingeDown) continue;
      any_hinge = true;
      const bool linear_present =
          std::any_of(mars(m).terms.begin(), mars(m).terms.end(), [&](const BasisFunction& b) {
            return b.kind == BasisFunction::Kind::Linear && b.feature == t.feature;
          });
      CHECK(linear_present);
    }
    CHECK(any_hinge);
  }
}

TEST_CASE("MARS fits the nonlinear signal better than LR out of sample") {
  const auto train = nonlinear(500, 10), test = nonlinear(500, 11);
  for (auto algo : {Algorithm::MARS, Algorithm::PolyMARS}) {
    const auto m = fit(RegressorSpec::defaults(algo), train.x, train.y);
    const auto lr = fit(RegressorSpec::defaults(Algorithm::LR), train.x, train.y);
    CHECK(training_mse(m, test.x, test.y) < 0.5 * training_mse(lr, test.x, test.y));
  }
}

TEST_CASE("MARS on a constant target and constant features") {
  Rng rng(3);
  Matrix x = random_matrix(50, 3, rng);
  for (std::size_t i = 0; i < 50; ++i) x(i, 2) = 4.0;
  const std::vector<double> y(50, -2.5);
  for (auto algo : {Algorithm::MARS, Algorithm::PolyMARS}) {
    const auto pred = fit(RegressorSpec::defaults(algo), x, y).predict(x);
    for (double v : pred) CHECK(std::abs(v + 2.5) < 1e-6);
  }
}

TEST_CASE("MARS is deterministic") {
  const auto d = nonlinear(200, 4);
  const auto a = fit(RegressorSpec::defaults(Algorithm::MARS), d.x, d.y);
  const auto b = fit(RegressorSpec::defaults(Algorithm::MARS), d.x, d.y);
  CHECK(a.state() == b.state());
}
