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

#include "gaugeblend/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "gaugeblend/error.hpp"

namespace gaugeblend {

double GridProduct::value(std::size_t grid_index, const YearMonth& when) const {
  const auto it = values.find(when);
  if (it == values.end() || grid_index >= it->second.size()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return it->second[grid_index];
}

std::size_t feature_count(PredictorSetId set) {
  return set == PredictorSetId::Set3 ? 17 : 9;
}

std::string_view to_string(PredictorSetId set) {
  switch (set) {
    case PredictorSetId::Set1: return "set1";
    case PredictorSetId::Set2: return "set2";
    case PredictorSetId::Set3: return "set3";
  }
  return "set?";
}

std::optional<PredictorSetId> predictor_set_from_int(int n) {
  if (n < 1 || n > 3) return std::nullopt;
  return static_cast<PredictorSetId>(n);
}

std::vector<std::string> feature_names(PredictorSetId set, std::string_view product_a,
                                       std::string_view product_b) {
  std::vector<std::string_view> products;
  switch (set) {
    case PredictorSetId::Set1: products = {product_a}; break;
    case PredictorSetId::Set2: products = {product_b}; break;
    case PredictorSetId::Set3: products = {product_a, product_b}; break;
  }
  std::vector<std::string> names;
  for (const char* kind : {"value", "distance"}) {
    for (auto p : products) {
      for (int k = 1; k <= 4; ++k) {
        names.push_back(std::string(p) + "_" + kind + "_" + std::to_string(k));
      }
    }
  }
  names.emplace_back("elevation");
  return names;
}

FeatureTable assemble_features(const GaugeData& data, PredictorSetId set) {
  if (data.products.empty()) throw ValidationError("assemble_features: no gridded product given");
  if (set != PredictorSetId::Set1 && data.products.size() < 2) {
    throw ValidationError(std::string("assemble_features: predictor ") +
                          std::string(to_string(set)) +
                          " requires two gridded products (the second product" +
                          (set == PredictorSetId::Set3 ? " alongside the first" : "") +
                          ") but only one was supplied");
  }

  std::vector<const GridProduct*> used;
  switch (set) {
    case PredictorSetId::Set1: used = {&data.products[0]}; break;
    case PredictorSetId::Set2: used = {&data.products[1]}; break;
    case PredictorSetId::Set3: used = {&data.products[0], &data.products[1]}; break;
  }

  std::unordered_map<std::string, std::size_t> station_pos;
  for (std::size_t i = 0; i < data.stations.size(); ++i) {
    const auto& s = data.stations[i];
    if (!s.location.valid()) {
      throw ValidationError("assemble_features: station " + s.id + " has invalid coordinates");
    }
    if (!std::isfinite(s.elevation_m)) {
      throw ValidationError("assemble_features: station " + s.id + " has no elevation");
    }
    if (!station_pos.emplace(s.id, i).second) {
      throw ValidationError("assemble_features: duplicate station " + s.id);
    }
  }

  // Neighbors per (product, station).
  std::vector<std::vector<NeighborSet>> neighbors(used.size());
  for (std::size_t p = 0; p < used.size(); ++p) {
    const SpatialIndex index(used[p]->points);
    neighbors[p].reserve(data.stations.size());
    for (const auto& s : data.stations) neighbors[p].push_back(nearest_four(index, s.location));
  }

  // Canonical (station_id, month) order.
  std::vector<const Observation*> obs;
  obs.reserve(data.observations.size());
  for (const auto& o : data.observations) {
    if (!station_pos.contains(o.station_id)) {
      throw ValidationError("assemble_features: observation for unknown station " +
                            o.station_id);
    }
    obs.push_back(&o);
  }
  std::stable_sort(obs.begin(), obs.end(), [](const Observation* a, const Observation* b) {
    if (a->station_id != b->station_id) return a->station_id < b->station_id;
    return a->when < b->when;
  });

  FeatureTable table;
  table.set = set;
  table.names = feature_names(set, data.products[0].name,
                              data.products.size() > 1 ? data.products[1].name : "");
  const std::size_t width = table.names.size();
  std::vector<double> flat;
  flat.reserve(obs.size() * width);
  std::vector<double> row(width);

  for (const Observation* o : obs) {
    if (o->missing || !std::isfinite(o->precip_mm) || o->precip_mm < 0.0) {
      ++table.drops.missing_target;
      continue;
    }
    const std::size_t si = station_pos.at(o->station_id);
    bool complete = true;
    std::size_t col = 0;
    for (std::size_t p = 0; p < used.size() && complete; ++p) {
      for (const auto& nb : neighbors[p][si]) {
        const double v = used[p]->value(nb.grid_index, o->when);
        if (!std::isfinite(v) || v < 0.0) {
          complete = false;
          break;
        }
        row[col++] = v;
      }
    }
    if (!complete) {
      ++table.drops.missing_product;
      continue;
    }
    for (std::size_t p = 0; p < used.size(); ++p) {
      for (const auto& nb : neighbors[p][si]) row[col++] = nb.distance_m;
    }
    row[col++] = data.stations[si].elevation_m;
    flat.insert(flat.end(), row.begin(), row.end());
    table.keys.push_back({o->station_id, o->when});
    table.y.push_back(o->precip_mm);
  }
  table.x = Matrix(table.keys.size(), width, std::move(flat));
  return table;
}

}  // namespace gaugeblend
