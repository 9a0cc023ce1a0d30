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

#include "gaugeblend/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gaugeblend/error.hpp"

namespace gaugeblend {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr std::size_t kLeafSize = 8;

std::array<double, 3> to_unit_xyz(const GeoPoint& p) {
  const double lat = p.lat * kDegToRad;
  const double lon = p.lon * kDegToRad;
  return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

double chord2(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace

bool GeoPoint::valid() const {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
         lon >= -180.0 && lon <= 180.0;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double s_lat = std::sin((phi2 - phi1) / 2.0);
  const double s_lon = std::sin((b.lon - a.lon) * kDegToRad / 2.0);
  double h = s_lat * s_lat + std::cos(phi1) * std::cos(phi2) * s_lon * s_lon;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

SpatialIndex::SpatialIndex(std::span<const GeoPoint> points)
    : points_(points.begin(), points.end()) {
  if (points_.empty()) throw ValidationError("spatial index: grid point list is empty");
  xyz_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].valid()) {
      throw ValidationError("spatial index: grid point " + std::to_string(i) +
                            " has invalid coordinates");
    }
    xyz_.push_back(to_unit_xyz(points_[i]));
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  build(0, order_.size());
}

std::size_t SpatialIndex::build(std::size_t begin, std::size_t end) {
  const std::size_t id = nodes_.size();
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return id;

  std::array<double, 3> lo{1e9, 1e9, 1e9}, hi{-1e9, -1e9, -1e9};
  for (std::size_t i = begin; i < end; ++i) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], xyz_[order_[i]][a]);
      hi[a] = std::max(hi[a], xyz_[order_[i]][a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  }
  if (hi[axis] - lo[axis] <= 0.0) return id;  // all coincident: stay a leaf

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::size_t a, std::size_t b) {
                     if (xyz_[a][axis] != xyz_[b][axis]) return xyz_[a][axis] < xyz_[b][axis];
                     return a < b;
                   });
  const double split = xyz_[order_[mid]][axis];
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

// Max-heap of (chord², index) holding the k best so far.
void SpatialIndex::search_knn(std::size_t node_id, const std::array<double, 3>& q,
                              std::size_t k,
                              std::vector<std::pair<double, std::size_t>>& heap) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const std::size_t idx = order_[i];
      const std::pair<double, std::size_t> cand{chord2(q, xyz_[idx]), idx};
      if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end());
      } else if (cand < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  const std::size_t near = diff < 0.0 ? node.left : node.right;
  const std::size_t far = diff < 0.0 ? node.right : node.left;
  search_knn(near, q, k, heap);
  if (heap.size() < k || diff * diff <= heap.front().first) search_knn(far, q, k, heap);
}

void SpatialIndex::search_radius(std::size_t node_id, const std::array<double, 3>& q,
                                 double r2, std::vector<std::size_t>& out) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      if (chord2(q, xyz_[order_[i]]) <= r2) out.push_back(order_[i]);
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  if (diff <= 0.0 || diff * diff <= r2) search_radius(node.left, q, r2, out);
  if (diff >= 0.0 || diff * diff <= r2) search_radius(node.right, q, r2, out);
}

std::vector<Neighbor> SpatialIndex::nearest(const GeoPoint& query, std::size_t k) const {
  if (!query.valid()) throw ValidationError("spatial index: query has invalid coordinates");
  if (k > points_.size()) {
    throw ValidationError("spatial index: asked for " + std::to_string(k) +
                          " neighbors but the grid has " + std::to_string(points_.size()) +
                          " points");
  }
  if (k == 0) return {};
  const auto q = to_unit_xyz(query);
  std::vector<std::pair<double, std::size_t>> heap;
  heap.reserve(k + 1);
  search_knn(0, q, k, heap);

  // Chords and haversine can disagree in the last bits for near-ties, so
  // collect everything within a slightly inflated radius and rank those on
  // haversine distance.
  const double kth = std::max_element(heap.begin(), heap.end())->first;
  const double r2 = kth * (1.0 + 1e-9) + 1e-24;
  std::vector<std::size_t> candidates;
  search_radius(0, q, r2, candidates);

  std::vector<Neighbor> ranked;
  ranked.reserve(candidates.size());
  for (auto idx : candidates) ranked.push_back({idx, haversine_m(query, points_[idx])});
  std::sort(ranked.begin(), ranked.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
    return a.grid_index < b.grid_index;
  });
  ranked.resize(k);
  return ranked;
}

SpatialIndex build_grid_index(std::span<const GeoPoint> grid_points) {
  return SpatialIndex(grid_points);
}

NeighborSet nearest_four(const SpatialIndex& index, const GeoPoint& station) {
  if (index.size() < 4) {
    throw ValidationError("nearest_four: grid has fewer than 4 points");
  }
  const auto found = index.nearest(station, 4);
  NeighborSet out;
  std::copy(found.begin(), found.end(), out.begin());
  return out;
}

}  // namespace gaugeblend
