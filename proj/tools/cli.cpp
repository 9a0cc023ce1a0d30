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

#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gaugeblend/error.hpp"
#include "gaugeblend/features.hpp"
#include "gaugeblend/io.hpp"
#include "gaugeblend/parallel.hpp"
#include "gaugeblend/pipeline.hpp"
#include "gaugeblend/serialization.hpp"
#include "gaugeblend/synthetic.hpp"

namespace gaugeblend::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Inputs {
  fs::path data_dir;
  fs::path stations;
  fs::path observations;
  std::vector<fs::path> products;

  // Explicit paths win; otherwise files are taken from --data: stations.csv,
  // observations.csv and every other *.csv as a product, sorted by name.
  TablePaths resolve() const {
    TablePaths paths{stations, observations, products};
    if (!data_dir.empty()) {
      if (paths.stations.empty()) paths.stations = data_dir / "stations.csv";
      if (paths.observations.empty()) paths.observations = data_dir / "observations.csv";
      if (paths.products.empty()) {
        std::error_code ec;
        for (const auto& entry : fs::directory_iterator(data_dir, ec)) {
          const auto name = entry.path().filename().string();
          if (entry.path().extension() == ".csv" && name != "stations.csv" &&
              name != "observations.csv") {
            paths.products.push_back(entry.path());
          }
        }
        std::sort(paths.products.begin(), paths.products.end());
      }
    }
    if (paths.stations.empty() || paths.observations.empty() || paths.products.empty()) {
      throw CLI::ValidationError(
          "inputs", "give --data DIR or --stations, --observations and --product");
    }
    return paths;
  }

  void add_to(CLI::App* app) {
    app->add_option("--data", data_dir, "Directory holding stations.csv, observations.csv and product CSVs");
    app->add_option("--stations", stations, "Stations CSV");
    app->add_option("--observations", observations, "Observations CSV");
    app->add_option("--product", products, "Product CSV; give twice for Set2/Set3")->expected(1, 2);
  }
};

struct Common {
  std::uint64_t seed = kDefaultSeed;
  fs::path out;
  fs::path config;
  std::vector<int> sets;
  bool clip_zero = false;
  unsigned threads = 0;
  bool quiet = false;
};

class Manifest {
 public:
  explicit Manifest(std::string subcommand, const std::vector<std::string>& args) {
    j_["tool"] = "gaugeblend";
    j_["version"] = std::string(software_version());
    j_["subcommand"] = std::move(subcommand);
    j_["arguments"] = args;
    j_["inputs"] = json::array();
    j_["outputs"] = json::array();
  }
  void input(const fs::path& p) { j_["inputs"].push_back(entry(p)); }
  void output(const fs::path& p) { outputs_.push_back(p); }
  json& operator[](const char* key) { return j_[key]; }

  void write(const fs::path& dir) {
    std::sort(outputs_.begin(), outputs_.end());
    for (const auto& p : outputs_) j_["outputs"].push_back(entry(p));
    const fs::path path = dir / "manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << j_.dump(2) << '\n';
    if (!out) throw ValidationError(path.string() + ": cannot write manifest");
  }

 private:
  static json entry(const fs::path& p) {
    return {{"path", p.generic_string()}, {"sha256", sha256_file(p)}};
  }
  json j_;
  std::vector<fs::path> outputs_;
};

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::vector<PredictorSetId> parse_sets(const std::vector<int>& raw) {
  std::vector<PredictorSetId> sets;
  for (int n : raw) {
    const auto set = predictor_set_from_int(n);
    if (!set) throw CLI::ValidationError("--predictor-set", "must be 1, 2 or 3");
    if (std::find(sets.begin(), sets.end(), *set) == sets.end()) sets.push_back(*set);
  }
  std::sort(sets.begin(), sets.end());
  return sets;
}

// Config file fields: seed, predictor_sets, clip_at_zero, threads and
// base_learners (partial regressor specs, matched by algorithm). Flags given
// on the command line take precedence.
ExperimentConfig build_config(const Common& c, const CLI::App& app) {
  ExperimentConfig config = ExperimentConfig::defaults(c.seed);
  if (!c.config.empty()) {
    const json j = read_json_file(c.config);
    try {
      if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("predictor_sets")) {
        config.sets = parse_sets(j.at("predictor_sets").get<std::vector<int>>());
      }
      if (j.contains("clip_at_zero")) config.clip_at_zero = j.at("clip_at_zero").get<bool>();
      if (j.contains("threads")) config.threads = j.at("threads").get<unsigned>();
      if (j.contains("base_learners")) {
        for (const auto& item : j.at("base_learners")) {
          const RegressorSpec spec = spec_from_json(item);
          auto it = std::find_if(config.base_learners.begin(), config.base_learners.end(),
                                 [&](const RegressorSpec& s) { return s.algorithm == spec.algorithm; });
          if (it == config.base_learners.end()) {
            throw ValidationError("config: '" + std::string(to_string(spec.algorithm)) +
                                  "' is not a base learner");
          }
          *it = spec;
        }
      }
    } catch (const json::exception& e) {
      throw ValidationError(c.config.string() + ": " + e.what());
    }
  }
  if (app.count("--seed") > 0) config.seed = c.seed;
  if (!c.sets.empty()) config.sets = parse_sets(c.sets);
  if (c.clip_zero) config.clip_at_zero = true;
  if (app.count("--threads") > 0 || c.config.empty()) config.threads = c.threads;
  config.threads = resolve_threads(config.threads);
  config.validate();
  return config;
}

json config_to_json(const ExperimentConfig& config) {
  json j;
  j["seed"] = config.seed;
  json sets = json::array();
  for (auto s : config.sets) sets.push_back(static_cast<int>(s));
  j["predictor_sets"] = sets;
  j["clip_at_zero"] = config.clip_at_zero;
  j["threads"] = config.threads;
  json base = json::array();
  for (const auto& s : config.base_learners) base.push_back(spec_to_json(s));
  j["base_learners"] = base;
  json combiners = json::array();
  for (const auto& c : config.combiners) combiners.push_back(c.name());
  j["combiners"] = combiners;
  return j;
}

std::map<PredictorSetId, FeatureTable> load_features(const TablePaths& paths,
                                                     const std::vector<PredictorSetId>& sets,
                                                     Manifest& manifest) {
  const GaugeData data = load_tables(paths);
  manifest.input(paths.stations);
  manifest.input(paths.observations);
  for (const auto& p : paths.products) manifest.input(p);
  std::map<PredictorSetId, FeatureTable> tables;
  for (auto s : sets) tables.emplace(s, assemble_features(data, s));
  return tables;
}

void add_common(CLI::App* app, Common& c, bool experiment_flags) {
  app->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  app->add_option("--out", c.out, "Output directory")->required();
  app->add_flag("--quiet", c.quiet, "No progress messages");
  if (experiment_flags) {
    app->add_option("--config", c.config, "JSON experiment config")->check(CLI::ExistingFile);
    app->add_option("--predictor-set", c.sets, "Predictor set 1, 2 or 3 (repeatable)")
        ->check(CLI::Range(1, 3));
    app->add_flag("--clip-zero", c.clip_zero, "Clip negative predictions at 0");
    app->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  }
}

SyntheticSpec synthetic_from_json(const json& j, SyntheticSpec spec) {
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("stations", spec.stations);
  get("months", spec.months);
  get("start_year", spec.start_year);
  get("lat_min", spec.lat_min);
  get("lat_max", spec.lat_max);
  get("lon_min", spec.lon_min);
  get("lon_max", spec.lon_max);
  get("grid_rows", spec.grid_rows);
  get("grid_cols", spec.grid_cols);
  get("bumps", spec.bumps);
  get("bump_sigma_deg", spec.bump_sigma_deg);
  get("bump_amplitude_mm", spec.bump_amplitude_mm);
  get("base_mm", spec.base_mm);
  get("seasonal_amplitude", spec.seasonal_amplitude);
  get("elevation_per_km", spec.elevation_per_km);
  get("max_elevation_m", spec.max_elevation_m);
  get("bias_a", spec.bias_a);
  get("noise_a", spec.noise_a);
  get("bias_b", spec.bias_b);
  get("noise_b", spec.noise_b);
  get("gauge_noise", spec.gauge_noise);
  get("missing_fraction", spec.missing_fraction);
  return spec;
}

json synthetic_to_json(const SyntheticSpec& s) {
  return {{"stations", s.stations},       {"months", s.months},
          {"start_year", s.start_year},   {"lat_min", s.lat_min},
          {"lat_max", s.lat_max},         {"lon_min", s.lon_min},
          {"lon_max", s.lon_max},         {"grid_rows", s.grid_rows},
          {"grid_cols", s.grid_cols},     {"bumps", s.bumps},
          {"bump_sigma_deg", s.bump_sigma_deg}, {"bump_amplitude_mm", s.bump_amplitude_mm},
          {"base_mm", s.base_mm},         {"seasonal_amplitude", s.seasonal_amplitude},
          {"elevation_per_km", s.elevation_per_km}, {"max_elevation_m", s.max_elevation_m},
          {"bias_a", s.bias_a},           {"noise_a", s.noise_a},
          {"bias_b", s.bias_b},           {"noise_b", s.noise_b},
          {"gauge_noise", s.gauge_noise}, {"missing_fraction", s.missing_fraction},
          {"seed", s.seed}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gauge and satellite precipitation merging with ensemble learners", "gaugeblend"};
  app.set_version_flag("--version", std::string(software_version()));
  app.require_subcommand(1);

  Common common;
  Inputs inputs;

  auto* synth = app.add_subcommand("synth", "Write a synthetic gauge and two-product data set");
  add_common(synth, common, false);
  fs::path synth_config;
  std::size_t stations = 0, months = 0;
  synth->add_option("--config", synth_config, "JSON with generator fields")->check(CLI::ExistingFile);
  synth->add_option("--stations", stations, "Number of gauges (>= 20)");
  synth->add_option("--months", months, "Number of months (>= 12)");

  auto* features = app.add_subcommand("features", "Assemble predictor-set feature tables");
  add_common(features, common, false);
  inputs.add_to(features);
  features->add_option("--predictor-set", common.sets, "Predictor set 1, 2 or 3 (repeatable)")
      ->check(CLI::Range(1, 3));

  auto* experiment = app.add_subcommand("experiment", "Run the three-way split experiment");
  add_common(experiment, common, true);
  inputs.add_to(experiment);

  auto* importance = app.add_subcommand("importance", "Permutation and gain importance tables");
  add_common(importance, common, true);
  inputs.add_to(importance);
  std::size_t repeats = 10;
  importance->add_option("--repeats", repeats, "Permutations per feature")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "Re-render a report JSON as CSV tables");
  fs::path report_in;
  report->add_option("--in", report_in, "report.json")->required()->check(CLI::ExistingFile);
  report->add_option("--out", common.out, "Output directory")->required();

  std::vector<const char*> argv;
  argv.push_back("gaugeblend");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  auto progress = [&](std::string_view message) {
    if (!common.quiet) err << "[gaugeblend] " << message << std::endl;
  };
  std::error_code ec;
  fs::create_directories(common.out, ec);
  if (ec) throw ValidationError(common.out.string() + ": " + ec.message());

  if (synth->parsed()) {
    Manifest manifest("synth", args);
    SyntheticSpec spec;
    if (!synth_config.empty()) {
      manifest.input(synth_config);
      try {
        spec = synthetic_from_json(read_json_file(synth_config), spec);
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError(synth_config.string() + ": " + e.what());
      }
    }
    if (stations > 0) spec.stations = stations;
    if (months > 0) spec.months = months;
    spec.seed = common.seed;
    progress("generating synthetic data");
    const auto paths = write_tables(generate_synthetic(spec), common.out);
    manifest.output(paths.stations);
    manifest.output(paths.observations);
    for (const auto& p : paths.products) manifest.output(p);
    manifest["seed"] = common.seed;
    manifest["config"] = synthetic_to_json(spec);
    manifest.write(common.out);
    return kOk;
  }

  if (features->parsed()) {
    Manifest manifest("features", args);
    auto sets = parse_sets(common.sets);
    if (sets.empty()) sets = {PredictorSetId::Set1, PredictorSetId::Set2, PredictorSetId::Set3};
    const auto tables = load_features(inputs.resolve(), sets, manifest);
    for (const auto& [set, table] : tables) {
      const fs::path path = common.out / ("features_" + std::string(to_string(set)) + ".csv");
      write_feature_table(table, path);
      manifest.output(path);
      progress(std::string(to_string(set)) + ": " + std::to_string(table.rows()) + " rows, " +
               std::to_string(table.drops.missing_target) + " dropped for missing target, " +
               std::to_string(table.drops.missing_product) + " for missing product values");
    }
    manifest.write(common.out);
    return kOk;
  }

  if (experiment->parsed() || importance->parsed()) {
    const bool is_experiment = experiment->parsed();
    const CLI::App& sub = is_experiment ? *experiment : *importance;
    Manifest manifest(is_experiment ? "experiment" : "importance", args);
    ExperimentConfig config = build_config(common, sub);
    config.progress = progress;
    if (!common.config.empty()) manifest.input(common.config);
    const auto tables = load_features(inputs.resolve(), config.sets, manifest);
    manifest["seed"] = config.seed;
    manifest["config"] = config_to_json(config);

    if (is_experiment) {
      const ExperimentReport result = run_experiment(tables, config);
      const fs::path json_path = common.out / "report.json";
      const fs::path csv_path = common.out / "report.csv";
      write_report_json(result, json_path);
      write_report_csv(result, csv_path);
      manifest.output(json_path);
      manifest.output(csv_path);
      for (const auto& p : write_long_format(result, common.out / "long")) manifest.output(p);
      manifest["derived_seeds"] = result.seeds;
      out << "wrote " << result.results.size() << " learner rows to " << json_path.string()
          << '\n';
    } else {
      manifest["repeats"] = repeats;
      const auto runs = run_importance(tables, config, repeats);
      const fs::path json_path = common.out / "importance.json";
      const fs::path csv_path = common.out / "importance.csv";
      {
        std::ofstream f(json_path, std::ios::binary | std::ios::trunc);
        f << importance_to_json(runs).dump(2) << '\n';
        if (!f) throw ValidationError(json_path.string() + ": write failed");
      }
      write_importance_csv(runs, csv_path);
      manifest.output(json_path);
      manifest.output(csv_path);
      out << "wrote " << runs.size() << " importance runs to " << json_path.string() << '\n';
    }
    manifest.write(common.out);
    return kOk;
  }

  // report
  Manifest manifest("report", args);
  manifest.input(report_in);
  const ExperimentReport result = read_report_json(report_in);
  const fs::path csv_path = common.out / "report.csv";
  write_report_csv(result, csv_path);
  manifest.output(csv_path);
  for (const auto& p : write_long_format(result, common.out / "long")) manifest.output(p);
  manifest.write(common.out);
  return kOk;
}

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open file for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("sha256: digest initialisation failed");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(args, out, err);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace gaugeblend::cli
