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

#include "gaugeblend/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "gaugeblend/error.hpp"

namespace gaugeblend {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CsvReader {
 public:
  explicit CsvReader(const fs::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw ValidationError(path_.string() + ": cannot open file");
  }

  // False at end of file. Blank lines are skipped.
  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      if (line_no_ == 1 && line_.starts_with("\xEF\xBB\xBF")) line_.erase(0, 3);
      if (line_.empty()) continue;
      fields.clear();
      std::string_view rest(line_);
      while (true) {
        const auto comma = rest.find(',');
        fields.push_back(rest.substr(0, comma));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ValidationError(path_.string() + ":" + std::to_string(line_no_) + ": " + message);
  }

  void expect_header(const std::vector<std::string_view>& expected) {
    std::vector<std::string_view> fields;
    if (!next(fields)) fail("missing header row");
    if (fields != expected) {
      std::string want;
      for (auto f : expected) want += (want.empty() ? "" : ",") + std::string(f);
      fail("header must be '" + want + "'");
    }
  }

  void expect_width(const std::vector<std::string_view>& fields, std::size_t n) const {
    if (fields.size() != n) {
      fail("expected " + std::to_string(n) + " fields, found " + std::to_string(fields.size()));
    }
  }

  double number(std::string_view text, std::string_view what) const {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
      fail("invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
  }

  int integer(std::string_view text, std::string_view what) const {
    int v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end) {
      fail("invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
  }

  GeoPoint point(std::string_view lat, std::string_view lon) const {
    GeoPoint p{number(lat, "lat_deg"), number(lon, "lon_deg")};
    if (!p.valid()) fail("coordinates out of range");
    return p;
  }

  YearMonth month(std::string_view year, std::string_view month) const {
    YearMonth ym{integer(year, "year"), integer(month, "month")};
    if (!ym.valid()) fail("month must be in 1..12");
    return ym;
  }

  // NaN for the sentinel.
  double precip(std::string_view text) const {
    const double v = number(text, "precip_mm");
    if (v == kMissingValue) return std::numeric_limits<double>::quiet_NaN();
    if (v < 0.0) fail("precip_mm must be >= 0 or -9999");
    return v;
  }

  std::string_view identifier(std::string_view text, std::string_view what) const {
    if (text.empty()) fail("empty " + std::string(what));
    if (text.find('"') != std::string_view::npos) fail("quoted fields are not supported");
    return text;
  }

 private:
  fs::path path_;
  std::ifstream in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

std::vector<Station> load_stations(const fs::path& path) {
  CsvReader csv(path);
  csv.expect_header({"station_id", "lat_deg", "lon_deg", "elevation_m"});
  std::vector<Station> stations;
  std::set<std::string, std::less<>> seen;
  std::vector<std::string_view> f;
  while (csv.next(f)) {
    csv.expect_width(f, 4);
    Station s;
    s.id = csv.identifier(f[0], "station_id");
    s.location = csv.point(f[1], f[2]);
    s.elevation_m = csv.number(f[3], "elevation_m");
    if (!seen.insert(s.id).second) csv.fail("duplicate station_id '" + s.id + "'");
    stations.push_back(std::move(s));
  }
  return stations;
}

std::vector<Observation> load_observations(const fs::path& path,
                                           const std::vector<Station>& stations) {
  std::set<std::string, std::less<>> known;
  for (const auto& s : stations) known.insert(s.id);

  CsvReader csv(path);
  csv.expect_header({"station_id", "year", "month", "precip_mm"});
  std::vector<Observation> out;
  std::set<std::pair<std::string, YearMonth>> seen;
  std::vector<std::string_view> f;
  while (csv.next(f)) {
    csv.expect_width(f, 4);
    Observation o;
    o.station_id = csv.identifier(f[0], "station_id");
    if (!known.contains(o.station_id)) csv.fail("unknown station_id '" + o.station_id + "'");
    o.when = csv.month(f[1], f[2]);
    const double v = csv.precip(f[3]);
    o.missing = std::isnan(v);
    o.precip_mm = o.missing ? kMissingValue : v;
    if (!seen.emplace(o.station_id, o.when).second) {
      csv.fail("duplicate (station, year, month) for '" + o.station_id + "'");
    }
    out.push_back(std::move(o));
  }
  return out;
}

GridProduct load_product(const fs::path& path) {
  CsvReader csv(path);
  std::vector<std::string_view> f;
  if (!csv.next(f) || f.size() != 2 || f[0] != "product_name") {
    csv.fail("first line must be 'product_name,<name>'");
  }
  GridProduct product;
  product.name = csv.identifier(f[1], "product name");
  csv.expect_header({"grid_id", "lat_deg", "lon_deg", "year", "month", "precip_mm"});

  std::unordered_map<std::string, std::size_t> index;
  struct Entry {
    std::size_t grid;
    YearMonth when;
    double value;
  };
  std::vector<Entry> entries;
  std::set<std::pair<std::size_t, YearMonth>> seen;
  while (csv.next(f)) {
    csv.expect_width(f, 6);
    const std::string id(csv.identifier(f[0], "grid_id"));
    const GeoPoint p = csv.point(f[1], f[2]);
    auto [it, inserted] = index.emplace(id, product.grid_ids.size());
    if (inserted) {
      product.grid_ids.push_back(id);
      product.points.push_back(p);
    } else if (product.points[it->second] != p) {
      csv.fail("grid_id '" + id + "' changes coordinates");
    }
    const YearMonth when = csv.month(f[3], f[4]);
    if (!seen.emplace(it->second, when).second) {
      csv.fail("duplicate grid_id+month for '" + id + "'");
    }
    entries.push_back({it->second, when, csv.precip(f[5])});
  }
  if (product.grid_ids.empty()) csv.fail("product has no rows");
  for (const auto& e : entries) {
    auto& month = product.values[e.when];
    if (month.empty()) month.assign(product.grid_ids.size(), std::numeric_limits<double>::quiet_NaN());
    month[e.grid] = e.value;
  }
  return product;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError(path.string() + ": cannot open for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw ValidationError(path.string() + ": write failed");
}

std::string precip_text(double v) {
  return std::isnan(v) || v == kMissingValue ? "-9999" : format_double(v);
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> read_optional(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

PredictorSetId set_from_json(const json& j) {
  const auto set = predictor_set_from_int(j.get<int>());
  if (!set) throw ValidationError("report: invalid predictor_set");
  return *set;
}

json importance_report_json(const ImportanceReport& r) {
  json j;
  j["method"] = std::string(to_string(r.method));
  j["features"] = r.features;
  j["scores"] = r.scores;
  j["ranks"] = r.ranks;
  if (!r.raw.empty()) j["raw"] = r.raw;
  if (!r.std_error.empty()) j["std_error"] = r.std_error;
  j["no_splits"] = r.no_splits;
  return j;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw NumericError("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string format_fixed(double value, int decimals) {
  char buf[128];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  if (ec != std::errc()) throw NumericError("format_fixed: conversion failed");
  std::string s(buf, ptr);
  if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

GaugeData load_tables(const TablePaths& paths) {
  if (paths.products.empty() || paths.products.size() > 2) {
    throw ValidationError("load_tables: one or two product files are required");
  }
  GaugeData data;
  data.stations = load_stations(paths.stations);
  data.observations = load_observations(paths.observations, data.stations);
  for (const auto& p : paths.products) data.products.push_back(load_product(p));
  if (data.products.size() == 2 && data.products[0].name == data.products[1].name) {
    throw ValidationError("load_tables: both product files are named '" +
                          data.products[0].name + "'");
  }
  return data;
}

TablePaths write_tables(const GaugeData& data, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  TablePaths paths{dir / "stations.csv", dir / "observations.csv", {}};

  {
    auto out = open_output(paths.stations);
    out << "station_id,lat_deg,lon_deg,elevation_m\n";
    for (const auto& s : data.stations) {
      out << s.id << ',' << format_double(s.location.lat) << ',' << format_double(s.location.lon)
          << ',' << format_double(s.elevation_m) << '\n';
    }
    finish(out, paths.stations);
  }
  {
    auto out = open_output(paths.observations);
    out << "station_id,year,month,precip_mm\n";
    for (const auto& o : data.observations) {
      out << o.station_id << ',' << o.when.year << ',' << o.when.month << ','
          << (o.missing ? "-9999" : precip_text(o.precip_mm)) << '\n';
    }
    finish(out, paths.observations);
  }
  for (const auto& product : data.products) {
    const fs::path path = dir / (product.name + ".csv");
    auto out = open_output(path);
    out << "product_name," << product.name << '\n';
    out << "grid_id,lat_deg,lon_deg,year,month,precip_mm\n";
    for (std::size_t g = 0; g < product.grid_ids.size(); ++g) {
      const std::string prefix = product.grid_ids[g] + ',' +
                                 format_double(product.points[g].lat) + ',' +
                                 format_double(product.points[g].lon) + ',';
      for (const auto& [when, values] : product.values) {
        out << prefix << when.year << ',' << when.month << ',' << precip_text(values[g]) << '\n';
      }
    }
    finish(out, path);
    paths.products.push_back(path);
  }
  return paths;
}

void write_feature_table(const FeatureTable& table, const fs::path& path) {
  auto out = open_output(path);
  out << "station_id,year,month";
  for (const auto& n : table.names) out << ',' << n;
  out << ",precip_mm\n";
  for (std::size_t i = 0; i < table.rows(); ++i) {
    out << table.keys[i].station_id << ',' << table.keys[i].when.year << ','
        << table.keys[i].when.month;
    for (double v : table.x.row(i)) out << ',' << format_double(v);
    out << ',' << format_double(table.y[i]) << '\n';
  }
  finish(out, path);
}

json report_to_json(const ExperimentReport& report) {
  json j;
  j["format_version"] = report.format_version;
  j["software_version"] = report.software_version;
  j["seed"] = report.seed;
  j["rows"] = report.rows;
  j["split_sizes"] = report.split_sizes;
  j["learners"] = report.learners;
  j["seeds"] = report.seeds;
  j["type2_suppressed"] = report.type2_suppressed;
  json results = json::array();
  for (const auto& r : report.results) {
    json row;
    row["learner"] = r.learner;
    row["predictor_set"] = static_cast<int>(r.set);
    row["mse"] = r.mse;
    row["mdse"] = r.mdse;
    row["rs_type1"] = optional_number(r.rs_type1);
    row["rs_type2"] = optional_number(r.rs_type2);
    row["rank_type1"] = r.rank_type1;
    row["rank_type2"] = r.rank_type2;
    row["seconds"] = r.seconds;
    row["selected"] = r.selected ? json(*r.selected) : json(nullptr);
    results.push_back(std::move(row));
  }
  j["results"] = std::move(results);
  json summaries = json::array();
  for (const auto& s : report.summaries) {
    json row;
    row["predictor_set"] = static_cast<int>(s.set);
    row["rows"] = s.rows;
    row["dropped_missing_target"] = s.drops.missing_target;
    row["dropped_missing_product"] = s.drops.missing_product;
    row["type1_suppressed"] = s.type1_suppressed;
    json d2 = json::array();
    for (const auto& [name, value] : s.d2_mse) d2.push_back({{"learner", name}, {"mse", value}});
    row["d2_mse"] = std::move(d2);
    summaries.push_back(std::move(row));
  }
  j["summaries"] = std::move(summaries);
  return j;
}

ExperimentReport report_from_json(const json& j) {
  try {
    ExperimentReport report;
    report.format_version = j.at("format_version").get<int>();
    if (report.format_version != kReportFormatVersion) {
      throw ValidationError("report: unsupported format_version " +
                            std::to_string(report.format_version));
    }
    report.software_version = j.at("software_version").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.rows = j.at("rows").get<std::size_t>();
    report.split_sizes = j.at("split_sizes").get<std::array<std::size_t, 3>>();
    report.learners = j.at("learners").get<std::vector<std::string>>();
    report.seeds = j.at("seeds").get<std::map<std::string, std::uint64_t>>();
    report.type2_suppressed = j.at("type2_suppressed").get<bool>();
    for (const auto& row : j.at("results")) {
      LearnerResult r;
      r.learner = row.at("learner").get<std::string>();
      r.set = set_from_json(row.at("predictor_set"));
      r.mse = row.at("mse").get<double>();
      r.mdse = row.at("mdse").get<double>();
      r.rs_type1 = read_optional(row.at("rs_type1"));
      r.rs_type2 = read_optional(row.at("rs_type2"));
      r.rank_type1 = row.at("rank_type1").get<int>();
      r.rank_type2 = row.at("rank_type2").get<int>();
      r.seconds = row.at("seconds").get<double>();
      if (!row.at("selected").is_null()) r.selected = row.at("selected").get<std::string>();
      report.results.push_back(std::move(r));
    }
    for (const auto& row : j.at("summaries")) {
      SetSummary s;
      s.set = set_from_json(row.at("predictor_set"));
      s.rows = row.at("rows").get<std::size_t>();
      s.drops.missing_target = row.at("dropped_missing_target").get<std::size_t>();
      s.drops.missing_product = row.at("dropped_missing_product").get<std::size_t>();
      s.type1_suppressed = row.at("type1_suppressed").get<bool>();
      for (const auto& d : row.at("d2_mse")) {
        s.d2_mse.emplace_back(d.at("learner").get<std::string>(), d.at("mse").get<double>());
      }
      report.summaries.push_back(std::move(s));
    }
    return report;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report: malformed JSON (") + e.what() + ")");
  }
}

void write_report_json(const ExperimentReport& report, const fs::path& path) {
  auto out = open_output(path);
  out << report_to_json(report).dump(2) << '\n';
  finish(out, path);
}

ExperimentReport read_report_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return report_from_json(j);
}

void write_report_csv(const ExperimentReport& report, const fs::path& path) {
  auto out = open_output(path);
  out << "learner,predictor_set,mse,mdse,rs_type1,rs_type2,rank_type1,rank_type2,seconds,selected\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : report.results) {
    out << r.learner << ',' << static_cast<int>(r.set) << ',' << format_double(r.mse) << ','
        << format_double(r.mdse) << ',' << opt(r.rs_type1) << ',' << opt(r.rs_type2) << ','
        << r.rank_type1 << ',' << r.rank_type2 << ',' << format_double(r.seconds) << ','
        << r.selected.value_or("") << '\n';
  }
  finish(out, path);
}

std::vector<fs::path> write_long_format(const ExperimentReport& report, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::vector<fs::path> written;
  auto emit = [&](const std::string& metric, auto value_of) {
    const fs::path path = dir / (metric + ".csv");
    auto out = open_output(path);
    out << "learner,predictor_set,metric,value\n";
    for (const auto& r : report.results) {
      out << r.learner << ',' << static_cast<int>(r.set) << ',' << metric << ',' << value_of(r)
          << '\n';
    }
    finish(out, path);
    written.push_back(path);
  };
  auto skill = [](const std::optional<double>& v) {
    return v ? format_fixed(*v, 2) : std::string("NA");
  };
  emit("rs_type1", [&](const LearnerResult& r) { return skill(r.rs_type1); });
  emit("rs_type2", [&](const LearnerResult& r) { return skill(r.rs_type2); });
  emit("rank_type1", [](const LearnerResult& r) { return std::to_string(r.rank_type1); });
  emit("rank_type2", [](const LearnerResult& r) { return std::to_string(r.rank_type2); });
  return written;
}

json importance_to_json(const std::vector<ImportanceRun>& runs) {
  json j;
  j["format_version"] = kReportFormatVersion;
  j["software_version"] = std::string(software_version());
  json items = json::array();
  for (const auto& run : runs) {
    items.push_back({{"predictor_set", static_cast<int>(run.set)},
                     {"scope", run.scope},
                     {"permutation", importance_report_json(run.permutation)},
                     {"gain", importance_report_json(run.gain)}});
  }
  j["runs"] = std::move(items);
  return j;
}

void write_importance_csv(const std::vector<ImportanceRun>& runs, const fs::path& path) {
  auto out = open_output(path);
  out << "predictor_set,scope,method,feature,score,rank,raw,std_error\n";
  for (const auto& run : runs) {
    for (const ImportanceReport* r : {&run.permutation, &run.gain}) {
      for (std::size_t i = 0; i < r->features.size(); ++i) {
        out << static_cast<int>(run.set) << ',' << run.scope << ',' << to_string(r->method) << ','
            << r->features[i] << ',' << format_double(r->scores[i]) << ',' << r->ranks[i] << ','
            << (i < r->raw.size() ? format_double(r->raw[i]) : std::string()) << ','
            << (i < r->std_error.size() ? format_double(r->std_error[i]) : std::string())
            << '\n';
      }
    }
  }
  finish(out, path);
}

}  // namespace gaugeblend
