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

#ifndef GAUGEBLEND_GEO_HPP_
#define GAUGEBLEND_GEO_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace gaugeblend {

inline constexpr double kEarthRadiusM = 6'371'000.0;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]

  bool valid() const;
  bool operator==(const GeoPoint&) const = default;
};

// Great-circle distance in meters (haversine, spherical Earth).
double haversine_m(const GeoPoint& a, const GeoPoint& b);

struct Neighbor {
  std::size_t grid_index = 0;
  double distance_m = 0.0;
  bool operator==(const Neighbor&) const = default;
};

// The four grid points closest to a location, nearest first. Equal
// distances are ordered by grid index.
using NeighborSet = std::array<Neighbor, 4>;

// Static kd-tree over grid points embedded on the unit sphere. Chord length
// is monotone in great-circle distance, so the tree prunes on chords and the
// final ordering is taken on haversine distances.
class SpatialIndex {
 public:
  explicit SpatialIndex(std::span<const GeoPoint> points);

  std::size_t size() const { return points_.size(); }
  const GeoPoint& point(std::size_t i) const { return points_[i]; }

  // The k nearest points, ascending by (haversine distance, index).
  std::vector<Neighbor> nearest(const GeoPoint& query, std::size_t k) const;

 private:
  struct Node {
    std::size_t begin = 0, end = 0;  // range in order_
    int axis = -1;                   // -1 for leaves
    double split = 0.0;
    std::size_t left = 0, right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end);
  void search_knn(std::size_t node, const std::array<double, 3>& q, std::size_t k,
                  std::vector<std::pair<double, std::size_t>>& heap) const;
  void search_radius(std::size_t node, const std::array<double, 3>& q, double r2,
                     std::vector<std::size_t>& out) const;

  std::vector<GeoPoint> points_;
  std::vector<std::array<double, 3>> xyz_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

SpatialIndex build_grid_index(std::span<const GeoPoint> grid_points);

NeighborSet nearest_four(const SpatialIndex& index, const GeoPoint& station);

}  // namespace gaugeblend

#endif  // GAUGEBLEND_GEO_HPP_
