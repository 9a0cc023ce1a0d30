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
#include <numbers>
#include <numeric>
#include <vector>

#include "gaugeblend/error.hpp"
#include "gaugeblend/geo.hpp"
#include "gaugeblend/random.hpp"

using namespace gaugeblend;

namespace {

// Central angle from the vector form (atan2 of cross and dot), a different
// route to the same great-circle distance.
double vector_distance_m(const GeoPoint& a, const GeoPoint& b) {
  auto xyz = [](const GeoPoint& p) {
    const double la = p.lat * std::numbers::pi / 180.0, lo = p.lon * std::numbers::pi / 180.0;
    return std::array<double, 3>{std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo),
                                 std::sin(la)};
  };
  const auto u = xyz(a), v = xyz(b);
  const double cx = u[1] * v[2] - u[2] * v[1];
  const double cy = u[2] * v[0] - u[0] * v[2];
  const double cz = u[0] * v[1] - u[1] * v[0];
  const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return 6'371'000.0 * std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

// Exhaustive scan: sort every grid point by (distance, index).
std::vector<Neighbor> brute_force(const std::vector<GeoPoint>& grid, const GeoPoint& q,
                                  std::size_t k) {
  std::vector<Neighbor> all;
  for (std::size_t i = 0; i < grid.size(); ++i) all.push_back({i, haversine_m(q, grid[i])});
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.distance_m != b.distance_m ? a.distance_m < b.distance_m : a.grid_index < b.grid_index;
  });
  all.resize(k);
  return all;
}

GeoPoint random_point(Rng& rng, double lat_lo = -89.0, double lat_hi = 89.0,
                      double lon_lo = -180.0, double lon_hi = 180.0) {
  return {rng.uniform(lat_lo, lat_hi), rng.uniform(lon_lo, lon_hi)};
}

}  // namespace

TEST_CASE("haversine agrees with the vector formula") {
  const GeoPoint a{0.0, 0.0}, b{0.0, 1.0};
  CHECK(haversine_m(a, b) == doctest::Approx(6'371'000.0 * std::numbers::pi / 180.0).epsilon(1e-12));
  CHECK(haversine_m(a, a) == 0.0);
  CHECK(haversine_m({90.0, 0.0}, {-90.0, 0.0}) ==
        doctest::Approx(6'371'000.0 * std::numbers::pi).epsilon(1e-12));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_point(rng), q = random_point(rng);
    CHECK(std::abs(haversine_m(p, q) - vector_distance_m(p, q)) < 1e-4);
    CHECK(haversine_m(p, q) == haversine_m(q, p));
  }
}

TEST_CASE("GeoPoint validity") {
  CHECK(GeoPoint{90.0, 180.0}.valid());
  CHECK_FALSE(GeoPoint{90.5, 0.0}.valid());
  CHECK_FALSE(GeoPoint{0.0, -181.0}.valid());
  CHECK_FALSE(GeoPoint{std::nan(""), 0.0}.valid());
}

TEST_CASE("build_grid_index preconditions and size") {
  CHECK_THROWS_AS(build_grid_index(std::vector<GeoPoint>{}), ValidationError);
  CHECK_THROWS_AS(build_grid_index(std::vector<GeoPoint>{{100.0, 0.0}}), ValidationError);
  const std::vector<GeoPoint> square{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  CHECK(build_grid_index(square).size() == 4);
  const std::vector<GeoPoint> dup{{0, 0}, {0, 0}, {1, 1}, {1, 1}, {1, 1}};
  CHECK(build_grid_index(dup).size() == 5);
}

TEST_CASE("nearest_four needs four points") {
  const std::vector<GeoPoint> three{{0, 0}, {0, 1}, {1, 0}};
  CHECK_THROWS_AS(nearest_four(build_grid_index(three), {0.5, 0.5}), ValidationError);
}

TEST_CASE("station on a grid point has distance zero first") {
  Rng rng(4);
  std::vector<GeoPoint> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(random_point(rng, 30, 40, -100, -90));
  const auto index = build_grid_index(grid);
  const auto n = nearest_four(index, grid[17]);
  CHECK(n[0].grid_index == 17);
  CHECK(n[0].distance_m == 0.0);
}

TEST_CASE("symmetric 2x2 grid ties resolve by index") {
  const std::vector<GeoPoint> grid{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  const auto n = nearest_four(build_grid_index(grid), {0.0, 0.0});
  for (std::size_t i = 0; i < 4; ++i) CHECK(n[i].grid_index == i);
  CHECK(n[0].distance_m == n[3].distance_m);
}

TEST_CASE("nearest_four equals brute force on 1000 random configurations") {
  Rng rng(2718);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<GeoPoint> grid;
    const int kind = trial % 4;
    if (kind == 0) {
      // scattered, anywhere on the globe
      const std::size_t m = 4 + rng.index(200);
      for (std::size_t i = 0; i < m; ++i) grid.push_back(random_point(rng));
    } else if (kind == 1) {
      // regular lattice: many exact ties for queries on lattice symmetries
      const double step = 0.25 * (1 + rng.index(4));
      for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) grid.push_back({30.0 + r * step, -100.0 + c * step});
    } else if (kind == 2) {
      // duplicated points
      const std::size_t m = 2 + rng.index(20);
      for (std::size_t i = 0; i < m; ++i) {
        const auto p = random_point(rng, -10, 10, -10, 10);
        grid.push_back(p);
        grid.push_back(p);
      }
    } else {
      // near the antimeridian and the poles
      const std::size_t m = 4 + rng.index(60);
      for (std::size_t i = 0; i < m; ++i) {
        grid.push_back(rng.uniform() < 0.5 ? random_point(rng, -60, 60, 170, 180)
                                           : random_point(rng, 80, 90, -180, 180));
      }
    }
    const auto index = build_grid_index(grid);
    GeoPoint q;
    if (kind == 1 && rng.uniform() < 0.7) {
      // cell centers and lattice points
      const double step = grid[1].lon - grid[0].lon;
      q = {grid[0].lat + step * (rng.index(7) + 0.5 * rng.index(2)),
           grid[0].lon + step * (rng.index(7) + 0.5 * rng.index(2))};
    } else if (kind == 3) {
      q = rng.uniform() < 0.5 ? random_point(rng, -60, 60, -180, -170) : random_point(rng, 80, 90);
    } else {
      q = random_point(rng, -20, 45, -110, 20);
    }
    const auto got = nearest_four(index, q);
    const auto want = brute_force(grid, q, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(got[i].grid_index == want[i].grid_index);
      CHECK(got[i].distance_m == want[i].distance_m);
    }
  }
}

TEST_CASE("nearest neighbor on 10000 points matches an exhaustive scan") {
  Rng rng(77);
  std::vector<GeoPoint> grid;
  for (int i = 0; i < 10000; ++i) grid.push_back(random_point(rng));
  const auto index = build_grid_index(grid);
  for (int i = 0; i < 200; ++i) {
    const auto q = random_point(rng);
    const auto got = index.nearest(q, 1);
    REQUIRE(got.size() == 1);
    CHECK(got[0] == brute_force(grid, q, 1)[0]);
  }
}

TEST_CASE("neighbor distances are invariant under grid reordering") {
  Rng rng(8);
  std::vector<GeoPoint> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(random_point(rng, 20, 50, -120, -70));
  std::vector<std::size_t> perm(grid.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(perm));
  std::vector<GeoPoint> shuffled;
  for (auto i : perm) shuffled.push_back(grid[i]);
  const auto a = build_grid_index(grid);
  const auto b = build_grid_index(shuffled);
  for (int i = 0; i < 100; ++i) {
    const auto q = random_point(rng, 20, 50, -120, -70);
    const auto na = nearest_four(a, q), nb = nearest_four(b, q);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(na[k].distance_m == nb[k].distance_m);
      CHECK(na[k].distance_m >= 0.0);
      if (k > 0) CHECK(na[k - 1].distance_m <= na[k].distance_m);
      CHECK(grid[na[k].grid_index] == shuffled[nb[k].grid_index]);
    }
  }
}
