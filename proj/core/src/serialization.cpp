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

#include "gaugeblend/serialization.hpp"

#include <cmath>
#include <limits>

#include "gaugeblend/error.hpp"

namespace gaugeblend {

using nlohmann::json;

namespace {

// JSON has no infinities; they are written as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double num(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json tree_to_json(const RegressionTree& tree) {
  json feature = json::array(), threshold = json::array(), left = json::array(),
       right = json::array(), value = json::array(), gain = json::array(),
       count = json::array();
  for (const auto& n : tree.nodes()) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
    gain.push_back(n.gain);
    count.push_back(n.count);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right},
          {"value", value},     {"gain", gain},           {"count", count}};
}

RegressionTree tree_from_json(const json& j) {
  const auto& feature = j.at("feature");
  std::vector<RegressionTree::Node> nodes(feature.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].feature = feature[i].get<int>();
    nodes[i].threshold = j.at("threshold")[i].get<double>();
    nodes[i].left = j.at("left")[i].get<std::int32_t>();
    nodes[i].right = j.at("right")[i].get<std::int32_t>();
    nodes[i].value = j.at("value")[i].get<double>();
    nodes[i].gain = j.at("gain")[i].get<double>();
    nodes[i].count = j.at("count")[i].get<std::size_t>();
  }
  return RegressionTree(std::move(nodes));
}

json trees_to_json(const std::vector<RegressionTree>& trees) {
  json out = json::array();
  for (const auto& t : trees) out.push_back(tree_to_json(t));
  return out;
}

std::vector<RegressionTree> trees_from_json(const json& j) {
  std::vector<RegressionTree> out;
  for (const auto& t : j) out.push_back(tree_from_json(t));
  return out;
}

json state_to_json(const ModelState& state) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          return {{"type", "linear"},
                  {"intercept", m.intercept},
                  {"coefficients", m.coefficients},
                  {"rank", m.rank}};
        } else if constexpr (std::is_same_v<T, MarsModel>) {
          json terms = json::array();
          for (const auto& t : m.terms) {
            terms.push_back({static_cast<int>(t.kind), t.feature, t.knot});
          }
          return {{"type", "mars"},          {"poly", m.poly},
                  {"center", m.center},      {"scale", m.scale},
                  {"terms", terms},          {"coefficients", m.coefficients},
                  {"forward_terms", m.forward_terms},
                  {"gcv_forward", num(m.gcv_forward)},
                  {"gcv", num(m.gcv)}};
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          return {{"type", "forest"},
                  {"target_min", m.target_min},
                  {"target_max", m.target_max},
                  {"trees", trees_to_json(m.trees)}};
        } else if constexpr (std::is_same_v<T, BoostedModel>) {
          return {{"type", "boosted"},
                  {"criterion", m.criterion == SplitCriterion::Variance ? "variance"
                                                                        : "second_order"},
                  {"base_score", m.base_score},
                  {"learning_rate", m.learning_rate},
                  {"training_mse", m.training_mse},
                  {"trees", trees_to_json(m.trees)}};
        } else {
          return {{"type", "brnn"},         {"inputs", m.inputs},   {"hidden", m.hidden},
                  {"x_center", m.x_center}, {"x_scale", m.x_scale}, {"y_center", m.y_center},
                  {"y_scale", m.y_scale},   {"params", m.params},   {"alpha", m.alpha},
                  {"beta", m.beta},         {"gamma", m.gamma},     {"steps", m.steps},
                  {"constant", m.constant}};
        }
      },
      state);
}

ModelState state_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "linear") {
    LinearModel m;
    m.intercept = j.at("intercept").get<double>();
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.rank = j.at("rank").get<std::size_t>();
    return m;
  }
  if (type == "mars") {
    MarsModel m;
    m.poly = j.at("poly").get<bool>();
    m.center = j.at("center").get<std::vector<double>>();
    m.scale = j.at("scale").get<std::vector<double>>();
    for (const auto& t : j.at("terms")) {
      m.terms.push_back({static_cast<BasisFunction::Kind>(t[0].get<int>()), t[1].get<int>(),
                         t[2].get<double>()});
    }
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.forward_terms = j.at("forward_terms").get<std::size_t>();
    m.gcv_forward = num(j.at("gcv_forward"));
    m.gcv = num(j.at("gcv"));
    return m;
  }
  if (type == "forest") {
    ForestModel m;
    m.target_min = j.at("target_min").get<double>();
    m.target_max = j.at("target_max").get<double>();
    m.trees = trees_from_json(j.at("trees"));
    return m;
  }
  if (type == "boosted") {
    BoostedModel m;
    m.criterion = j.at("criterion").get<std::string>() == "variance" ? SplitCriterion::Variance
                                                                     : SplitCriterion::SecondOrder;
    m.base_score = j.at("base_score").get<double>();
    m.learning_rate = j.at("learning_rate").get<double>();
    m.training_mse = j.at("training_mse").get<std::vector<double>>();
    m.trees = trees_from_json(j.at("trees"));
    return m;
  }
  if (type == "brnn") {
    BrnnModel m;
    m.inputs = j.at("inputs").get<std::size_t>();
    m.hidden = j.at("hidden").get<std::size_t>();
    m.x_center = j.at("x_center").get<std::vector<double>>();
    m.x_scale = j.at("x_scale").get<std::vector<double>>();
    m.y_center = j.at("y_center").get<double>();
    m.y_scale = j.at("y_scale").get<double>();
    m.params = j.at("params").get<std::vector<double>>();
    m.alpha = j.at("alpha").get<double>();
    m.beta = j.at("beta").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.steps = j.at("steps").get<std::size_t>();
    m.constant = j.at("constant").get<bool>();
    return m;
  }
  throw ValidationError("model json: unknown model type '" + type + "'");
}

}  // namespace

json spec_to_json(const RegressorSpec& s) {
  return {
      {"algorithm", std::string(to_string(s.algorithm))},
      {"seed", s.seed},
      {"clip_at_zero", s.clip_at_zero},
      {"mars",
       {{"max_terms", s.mars.max_terms},
        {"max_knots", s.mars.max_knots},
        {"penalty", s.mars.penalty},
        {"min_rsq_gain", s.mars.min_rsq_gain}}},
      {"forest",
       {{"trees", s.forest.trees},
        {"candidates", s.forest.candidates},
        {"min_node_size", s.forest.min_node_size},
        {"bootstrap", s.forest.bootstrap}}},
      {"gbm",
       {{"trees", s.gbm.trees},
        {"learning_rate", s.gbm.learning_rate},
        {"max_depth", s.gbm.max_depth},
        {"subsample", s.gbm.subsample},
        {"min_leaf_size", s.gbm.min_leaf_size}}},
      {"xgb",
       {{"rounds", s.xgb.rounds},
        {"learning_rate", s.xgb.learning_rate},
        {"max_depth", s.xgb.max_depth},
        {"lambda", s.xgb.lambda},
        {"min_gain", s.xgb.min_gain},
        {"subsample", s.xgb.subsample}}},
      {"brnn",
       {{"hidden", s.brnn.hidden},
        {"max_steps", s.brnn.max_steps},
        {"tolerance", s.brnn.tolerance},
        {"evidence_every", s.brnn.evidence_every},
        {"initial_alpha", s.brnn.initial_alpha},
        {"initial_beta", s.brnn.initial_beta}}},
  };
}

RegressorSpec spec_from_json(const json& j) {
  const auto name = j.at("algorithm").get<std::string>();
  const auto algorithm = algorithm_from_string(name);
  if (!algorithm) throw ValidationError("regressor spec: unknown algorithm '" + name + "'");
  RegressorSpec s = RegressorSpec::defaults(*algorithm);
  read(j, "seed", s.seed);
  read(j, "clip_at_zero", s.clip_at_zero);
  if (j.contains("mars")) {
    const auto& m = j.at("mars");
    read(m, "max_terms", s.mars.max_terms);
    read(m, "max_knots", s.mars.max_knots);
    read(m, "penalty", s.mars.penalty);
    read(m, "min_rsq_gain", s.mars.min_rsq_gain);
  }
  if (j.contains("forest")) {
    const auto& m = j.at("forest");
    read(m, "trees", s.forest.trees);
    read(m, "candidates", s.forest.candidates);
    read(m, "min_node_size", s.forest.min_node_size);
    read(m, "bootstrap", s.forest.bootstrap);
  }
  if (j.contains("gbm")) {
    const auto& m = j.at("gbm");
    read(m, "trees", s.gbm.trees);
    read(m, "learning_rate", s.gbm.learning_rate);
    read(m, "max_depth", s.gbm.max_depth);
    read(m, "subsample", s.gbm.subsample);
    read(m, "min_leaf_size", s.gbm.min_leaf_size);
  }
  if (j.contains("xgb")) {
    const auto& m = j.at("xgb");
    read(m, "rounds", s.xgb.rounds);
    read(m, "learning_rate", s.xgb.learning_rate);
    read(m, "max_depth", s.xgb.max_depth);
    read(m, "lambda", s.xgb.lambda);
    read(m, "min_gain", s.xgb.min_gain);
    read(m, "subsample", s.xgb.subsample);
  }
  if (j.contains("brnn")) {
    const auto& m = j.at("brnn");
    read(m, "hidden", s.brnn.hidden);
    read(m, "max_steps", s.brnn.max_steps);
    read(m, "tolerance", s.brnn.tolerance);
    read(m, "evidence_every", s.brnn.evidence_every);
    read(m, "initial_alpha", s.brnn.initial_alpha);
    read(m, "initial_beta", s.brnn.initial_beta);
  }
  return s;
}

json model_to_json(const FittedRegressor& model) {
  const auto& meta = model.metadata();
  return {{"format_version", kModelFormatVersion},
          {"spec", spec_to_json(model.spec())},
          {"metadata",
           {{"rows", meta.rows},
            {"features", meta.features},
            {"fit_seconds", meta.fit_seconds},
            {"rank_deficient", meta.rank_deficient},
            {"evidence_frozen", meta.evidence_frozen},
            {"degenerate_target", meta.degenerate_target}}},
          {"state", state_to_json(model.state())}};
}

FittedRegressor model_from_json(const json& j) {
  const int version = j.at("format_version").get<int>();
  if (version != kModelFormatVersion) {
    throw ValidationError("model json: unsupported format_version " + std::to_string(version));
  }
  FitMetadata meta;
  const auto& m = j.at("metadata");
  meta.rows = m.at("rows").get<std::size_t>();
  meta.features = m.at("features").get<std::size_t>();
  meta.fit_seconds = m.at("fit_seconds").get<double>();
  meta.rank_deficient = m.at("rank_deficient").get<bool>();
  meta.evidence_frozen = m.at("evidence_frozen").get<bool>();
  meta.degenerate_target = m.at("degenerate_target").get<bool>();
  return FittedRegressor(spec_from_json(j.at("spec")), meta, state_from_json(j.at("state")));
}

std::string serialize_model(const FittedRegressor& model) { return model_to_json(model).dump(); }

FittedRegressor deserialize_model(std::string_view text) {
  try {
    return model_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model json: ") + e.what());
  }
}

}  // namespace gaugeblend
