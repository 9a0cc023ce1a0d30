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

#ifndef GAUGEBLEND_LEARNERS_HPP_
#define GAUGEBLEND_LEARNERS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gaugeblend/features.hpp"
#include "gaugeblend/matrix.hpp"
#include "gaugeblend/tree.hpp"

namespace gaugeblend {

enum class Algorithm { LR, MARS, PolyMARS, RF, GBM, XGB, BRNN };

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> algorithm_from_string(std::string_view name);

struct MarsParams {
  std::size_t max_terms = 0;     // including the intercept; 0 = max(21, 2p + 1)
  std::size_t max_knots = 100;   // knot candidates per feature
  double penalty = 3.0;          // GCV cost per basis function
  double min_rsq_gain = 1e-3;    // forward pass stops below this R^2 gain
};

struct ForestParams {
  std::size_t trees = 500;
  std::size_t candidates = 0;  // 0 = max(1, floor(p / 3))
  std::size_t min_node_size = 5;
  bool bootstrap = true;
};

struct GbmParams {
  std::size_t trees = 500;
  double learning_rate = 0.1;
  int max_depth = 3;
  double subsample = 0.5;
  std::size_t min_leaf_size = 10;
};

struct XgbParams {
  std::size_t rounds = 500;
  double learning_rate = 0.3;
  int max_depth = 6;
  double lambda = 1.0;
  double min_gain = 0.0;
  double subsample = 1.0;
};

struct BrnnParams {
  std::size_t hidden = 20;
  std::size_t max_steps = 1000;
  double tolerance = 1e-8;          // relative loss change
  std::size_t evidence_every = 10;  // steps between (alpha, beta) updates
  double initial_alpha = 0.01;
  double initial_beta = 1.0;
};

// Configuration of one regression algorithm. Only the parameter block of
// the selected algorithm is read.
struct RegressorSpec {
  Algorithm algorithm = Algorithm::LR;
  MarsParams mars;
  ForestParams forest;
  GbmParams gbm;
  XgbParams xgb;
  BrnnParams brnn;
  std::uint64_t seed = 0;
  bool clip_at_zero = false;

  static RegressorSpec defaults(Algorithm algorithm, std::uint64_t seed = 0);
  bool operator==(const RegressorSpec&) const;
};

struct FitOptions {
  unsigned threads = 1;  // used by RF; results do not depend on it
};

struct FitMetadata {
  std::size_t rows = 0;
  std::size_t features = 0;
  double fit_seconds = 0.0;
  bool rank_deficient = false;  // LR solved by pseudoinverse
  bool evidence_frozen = false; // BRNN fell back to fixed (alpha, beta)
  bool degenerate_target = false;
};

struct LinearModel {
  double intercept = 0.0;
  std::vector<double> coefficients;
  std::size_t rank = 0;
  bool operator==(const LinearModel&) const = default;
};

// A MARS basis function of one (standardized) predictor.
struct BasisFunction {
  enum class Kind { Intercept, Linear, HingeUp, HingeDown };
  Kind kind = Kind::Intercept;
  int feature = -1;
  double knot = 0.0;  // in standardized units
  double eval(std::span<const double> standardized) const;
  bool operator==(const BasisFunction&) const = default;
};

struct MarsModel {
  bool poly = false;
  std::vector<double> center, scale;  // per-feature standardization
  std::vector<BasisFunction> terms;   // terms[0] is the intercept
  std::vector<double> coefficients;
  std::size_t forward_terms = 0;      // basis count after the forward pass
  double gcv_forward = 0.0;           // GCV of the forward-pass model
  double gcv = 0.0;                   // GCV of the selected model
  bool operator==(const MarsModel&) const = default;
};

struct ForestModel {
  std::vector<RegressionTree> trees;
  double target_min = 0.0, target_max = 0.0;
  bool operator==(const ForestModel&) const = default;
};

struct BoostedModel {
  SplitCriterion criterion = SplitCriterion::Variance;
  double base_score = 0.0;
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;
  std::vector<double> training_mse;  // after 0, 1, ..., trees.size() trees
  bool operator==(const BoostedModel&) const = default;
};

struct BrnnModel {
  std::size_t inputs = 0, hidden = 0;
  std::vector<double> x_center, x_scale;
  double y_center = 0.0, y_scale = 1.0;
  std::vector<double> params;  // see brnn.hpp for layout
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  std::size_t steps = 0;
  bool constant = false;  // degenerate target: predicts y_center
  bool operator==(const BrnnModel&) const = default;
};

using ModelState = std::variant<LinearModel, MarsModel, ForestModel, BoostedModel, BrnnModel>;

// A trained model. Immutable; predict is a pure function of state and input.
class FittedRegressor {
 public:
  FittedRegressor(RegressorSpec spec, FitMetadata meta, ModelState state)
      : spec_(std::move(spec)), meta_(meta), state_(std::move(state)) {}

  const RegressorSpec& spec() const { return spec_; }
  const FitMetadata& metadata() const { return meta_; }
  const ModelState& state() const { return state_; }

  double predict_row(std::span<const double> features) const;
  std::vector<double> predict(const Matrix& rows) const;

 private:
  RegressorSpec spec_;
  FitMetadata meta_;
  ModelState state_;
};

FittedRegressor fit(const RegressorSpec& spec, const Matrix& x, std::span<const double> y,
                    const FitOptions& options = {});
FittedRegressor fit(const RegressorSpec& spec, const FeatureTable& table,
                    const FitOptions& options = {});

std::vector<double> predict(const FittedRegressor& model, const Matrix& rows);

// Versioned JSON document; predictions round-trip exactly.
std::string serialize_model(const FittedRegressor& model);
FittedRegressor deserialize_model(std::string_view json);

}  // namespace gaugeblend

#endif  // GAUGEBLEND_LEARNERS_HPP_
