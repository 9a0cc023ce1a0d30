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

#ifndef GAUGEBLEND_FEATURES_HPP_
#define GAUGEBLEND_FEATURES_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaugeblend/data.hpp"
#include "gaugeblend/matrix.hpp"

namespace gaugeblend {

// The three predictor sets. Set1 uses the first product, Set2 the second,
// Set3 both.
enum class PredictorSetId { Set1 = 1, Set2 = 2, Set3 = 3 };

std::size_t feature_count(PredictorSetId set);
std::string_view to_string(PredictorSetId set);
std::optional<PredictorSetId> predictor_set_from_int(int n);

// Column names in frozen order:
//   first-product values 1-4, [second-product values 1-4],
//   first-product distances 1-4, [second-product distances 1-4], elevation.
// For Set2 the second product takes the first product's place.
std::vector<std::string> feature_names(PredictorSetId set, std::string_view product_a,
                                       std::string_view product_b);

struct RowKey {
  std::string station_id;
  YearMonth when;
  auto operator<=>(const RowKey&) const = default;
};

struct DropReport {
  std::size_t missing_target = 0;   // observation carried the sentinel
  std::size_t missing_product = 0;  // some neighbor value absent that month
  bool operator==(const DropReport&) const = default;
};

// Regression rows aligned with targets. Row order is (station_id, month).
struct FeatureTable {
  PredictorSetId set = PredictorSetId::Set1;
  std::vector<std::string> names;
  std::vector<RowKey> keys;
  Matrix x;
  std::vector<double> y;
  DropReport drops;

  std::size_t rows() const { return x.rows(); }
  std::size_t cols() const { return x.cols(); }
  bool operator==(const FeatureTable&) const = default;
};

// Builds one row per (station, month) with a valid observation and all
// neighbor values present. `data.products[0]` is the first product; Set2 and
// Set3 read `data.products[1]`.
FeatureTable assemble_features(const GaugeData& data, PredictorSetId set);

}  // namespace gaugeblend

#endif  // GAUGEBLEND_FEATURES_HPP_
