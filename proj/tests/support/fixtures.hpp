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

// Shared helpers for the unit tests: independent oracles live in the test
// files themselves; this header only builds inputs.
#ifndef GAUGEBLEND_TESTS_SUPPORT_FIXTURES_HPP_
#define GAUGEBLEND_TESTS_SUPPORT_FIXTURES_HPP_

#include <cmath>
#include <vector>

#include "gaugeblend/ensemble.hpp"
#include "gaugeblend/learners.hpp"
#include "gaugeblend/matrix.hpp"
#include "gaugeblend/pipeline.hpp"
#include "gaugeblend/random.hpp"

namespace gaugeblend::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double lo = -1.0,
                            double hi = 1.0) {
  Matrix m(rows, cols);
  for (auto& v : m.values()) v = rng.uniform(lo, hi);
  return m;
}

inline std::vector<double> random_vector(std::size_t n, Rng& rng, double lo = -1.0,
                                         double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& e : v) e = rng.uniform(lo, hi);
  return v;
}

inline double relative_error(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

inline PredictionMatrix prediction_matrix(Matrix values) {
  PredictionMatrix p;
  p.values = std::move(values);
  return p;
}

// Defaults with fewer trees and steps, for tests that exercise plumbing.
inline ExperimentConfig quick_config(std::uint64_t seed = 7) {
  ExperimentConfig config = ExperimentConfig::defaults(seed);
  for (auto& spec : config.base_learners) {
    spec.forest.trees = 40;
    spec.gbm.trees = 40;
    spec.xgb.rounds = 40;
    spec.brnn.hidden = 5;
    spec.brnn.max_steps = 60;
  }
  return config;
}

}  // namespace gaugeblend::testing

#endif  // GAUGEBLEND_TESTS_SUPPORT_FIXTURES_HPP_
