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

#ifndef GAUGEBLEND_IO_HPP_
#define GAUGEBLEND_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaugeblend/data.hpp"
#include "gaugeblend/features.hpp"
#include "gaugeblend/pipeline.hpp"

namespace gaugeblend {

// Input files. CSV, UTF-8, header row required, '.' decimals.
//   stations:      station_id,lat_deg,lon_deg,elevation_m
//   observations:  station_id,year,month,precip_mm
//   product:       first line "product_name,<name>", then
//                  grid_id,lat_deg,lon_deg,year,month,precip_mm
// precip_mm is >= 0 or the sentinel -9999.
struct TablePaths {
  std::filesystem::path stations;
  std::filesystem::path observations;
  std::vector<std::filesystem::path> products;  // one or two
};

// Errors are ValidationError with "file:line: message".
GaugeData load_tables(const TablePaths& paths);

// Writes stations.csv, observations.csv and <product name>.csv into `dir`
// and returns their paths.
TablePaths write_tables(const GaugeData& data, const std::filesystem::path& dir);

// keys, then feature columns, then target:
//   station_id,year,month,<feature names...>,precip_mm
void write_feature_table(const FeatureTable& table, const std::filesystem::path& path);

// Shortest text that parses back to the same double.
std::string format_double(double value);
// Fixed-point with `decimals` digits, locale-independent.
std::string format_fixed(double value, int decimals);

nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);
void write_report_json(const ExperimentReport& report, const std::filesystem::path& path);
ExperimentReport read_report_json(const std::filesystem::path& path);

// One row per {learner, predictor set}:
//   learner,predictor_set,mse,mdse,rs_type1,rs_type2,rank_type1,rank_type2,seconds,selected
// Suppressed skill scores are left empty.
void write_report_csv(const ExperimentReport& report, const std::filesystem::path& path);

// Heatmap-ready files rs_type1.csv, rs_type2.csv, rank_type1.csv and
// rank_type2.csv with columns learner,predictor_set,metric,value. Skill
// scores carry 2 decimals. Returns the paths written.
std::vector<std::filesystem::path> write_long_format(const ExperimentReport& report,
                                                     const std::filesystem::path& dir);

nlohmann::json importance_to_json(const std::vector<ImportanceRun>& runs);
// predictor_set,scope,method,feature,score,rank,raw,std_error
void write_importance_csv(const std::vector<ImportanceRun>& runs,
                          const std::filesystem::path& path);

}  // namespace gaugeblend

#endif  // GAUGEBLEND_IO_HPP_
