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

#ifndef GAUGEBLEND_DATA_HPP_
#define GAUGEBLEND_DATA_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gaugeblend/geo.hpp"

namespace gaugeblend {

// Sentinel used in input files for a missing monthly total.
inline constexpr double kMissingValue = -9999.0;

struct YearMonth {
  int year = 0;
  int month = 1;  // 1..12

  auto operator<=>(const YearMonth&) const = default;
  bool valid() const { return month >= 1 && month <= 12; }
};

struct Station {
  std::string id;
  GeoPoint location;
  double elevation_m = 0.0;
};

struct Observation {
  std::string station_id;
  YearMonth when;
  double precip_mm = 0.0;
  bool missing = false;  // set when the file carried the sentinel
};

// A named gridded product. values[month][grid_index] holds the monthly total
// at that grid point, NaN when missing or absent.
struct GridProduct {
  std::string name;
  std::vector<std::string> grid_ids;
  std::vector<GeoPoint> points;
  std::map<YearMonth, std::vector<double>> values;

  // NaN when the month is not covered.
  double value(std::size_t grid_index, const YearMonth& when) const;
};

// Everything the feature builder needs. Elevation lives on Station.
struct GaugeData {
  std::vector<Station> stations;
  std::vector<Observation> observations;
  std::vector<GridProduct> products;  // one or two
};

}  // namespace gaugeblend

#endif  // GAUGEBLEND_DATA_HPP_
