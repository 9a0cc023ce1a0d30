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

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "gaugeblend/evaluation.hpp"
#include "gaugeblend/geo.hpp"
#include "gaugeblend/learners.hpp"
#include "gaugeblend/random.hpp"
#include "gaugeblend/tree.hpp"

using namespace gaugeblend;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (auto& v : m.values()) v = rng.uniform(-1.0, 1.0);
  return m;
}

std::vector<double> target_of(const Matrix& x, Rng& rng) {
  std::vector<double> y(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    y[i] = 2.0 * x(i, 0) - x(i, 1) * x(i, 2) + rng.normal(0.0, 0.1);
  }
  return y;
}

void BM_NearestFour(benchmark::State& state) {
  Rng rng(1);
  const auto side = static_cast<std::size_t>(state.range(0));
  std::vector<GeoPoint> grid;
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c)
      grid.push_back({30.0 + 0.25 * static_cast<double>(r), -110.0 + 0.25 * static_cast<double>(c)});
  const auto index = build_grid_index(grid);
  std::vector<GeoPoint> queries;
  for (int i = 0; i < 1024; ++i) queries.push_back({rng.uniform(30.0, 40.0), rng.uniform(-110.0, -100.0)});
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nearest_four(index, queries[q++ & 1023]));
  }
  state.SetLabel(std::to_string(grid.size()) + " grid points");
}
BENCHMARK(BM_NearestFour)->Arg(41)->Arg(200);

void BM_TreeGrow(benchmark::State& state) {
  Rng rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix x = random_matrix(n, 9, rng);
  const auto y = target_of(x, rng);
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  TreeGrowOptions options;
  options.min_split_size = 6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RegressionTree::grow(x, y, rows, options, rng));
  }
}
BENCHMARK(BM_TreeGrow)->Arg(700)->Arg(1400);

void BM_MarsFit(benchmark::State& state) {
  Rng rng(3);
  const Matrix x = random_matrix(static_cast<std::size_t>(state.range(0)), 17, rng);
  const auto y = target_of(x, rng);
  const auto spec = RegressorSpec::defaults(Algorithm::MARS);
  for (auto _ : state) benchmark::DoNotOptimize(fit(spec, x, y));
}
BENCHMARK(BM_MarsFit)->Arg(700)->Arg(1400)->Unit(benchmark::kMillisecond);

void BM_Mse(benchmark::State& state) {
  Rng rng(4);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> p(n), t(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = rng.uniform(), t[i] = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(mse(p, t));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_Mse)->Arg(700)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
