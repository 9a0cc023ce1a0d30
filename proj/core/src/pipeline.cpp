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

#include "gaugeblend/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>

#include "gaugeblend/error.hpp"
#include "gaugeblend/evaluation.hpp"
#include "gaugeblend/parallel.hpp"
#include "gaugeblend/random.hpp"

namespace gaugeblend {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::size_t> sorted_union(const std::vector<std::size_t>& a,
                                      const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out(a);
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

struct BaseRun {
  std::vector<FittedRegressor> models;
  Matrix predictions;  // rows x 6
  std::vector<double> seconds;
};

// Fits the six base learners on `train` rows and predicts `apply` rows.
BaseRun fit_and_predict(const ExperimentConfig& config, const FeatureTable& table,
                        const std::vector<std::size_t>& train,
                        const std::vector<std::size_t>& apply) {
  const Matrix x_train = table.x.select_rows(train);
  const auto y_train = select<double>(table.y, train);
  const Matrix x_apply = table.x.select_rows(apply);

  const std::size_t k = config.base_learners.size();
  std::vector<std::optional<FittedRegressor>> fitted(k);
  std::vector<std::vector<double>> preds(k);
  std::vector<double> seconds(k);
  parallel_for(k, config.threads, [&](std::size_t i) {
    const auto start = Clock::now();
    fitted[i] = fit(config.base_learners[i], x_train, y_train);
    preds[i] = fitted[i]->predict(x_apply);
    seconds[i] = seconds_since(start);
  });

  BaseRun run;
  run.predictions = Matrix(apply.size(), k);
  for (std::size_t i = 0; i < k; ++i) {
    run.predictions.set_column(i, preds[i]);
    run.models.push_back(std::move(*fitted[i]));
  }
  run.seconds = std::move(seconds);
  return run;
}

}  // namespace

std::string_view software_version() { return GAUGEBLEND_VERSION; }

SplitPlan split_three(std::size_t n, std::uint64_t seed) {
  if (n < 3) throw ValidationError("split_three: need at least 3 rows");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  const std::size_t base = n / 3, extra = n % 3;
  const std::size_t n1 = base + (extra > 0 ? 1 : 0);
  const std::size_t n2 = base + (extra > 1 ? 1 : 0);
  SplitPlan plan;
  plan.seed = seed;
  plan.d1.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n1));
  plan.d2.assign(order.begin() + static_cast<std::ptrdiff_t>(n1),
                 order.begin() + static_cast<std::ptrdiff_t>(n1 + n2));
  plan.d3.assign(order.begin() + static_cast<std::ptrdiff_t>(n1 + n2), order.end());
  return plan;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  return master ^ stable_tag(tag);
}

ExperimentConfig ExperimentConfig::defaults(std::uint64_t seed) {
  ExperimentConfig config;
  config.seed = seed;
  for (Algorithm a : kBaseLearners) config.base_learners.push_back(RegressorSpec::defaults(a));
  config.combiners = CombinerSpec::all();
  return config;
}

void ExperimentConfig::validate() const {
  if (sets.empty()) throw ValidationError("experiment config: no predictor set selected");
  if (std::set<PredictorSetId>(sets.begin(), sets.end()).size() != sets.size()) {
    throw ValidationError("experiment config: predictor set listed twice");
  }
  if (base_learners.size() != kBaseLearners.size()) {
    throw ValidationError("experiment config: exactly 6 base learners are required");
  }
  for (std::size_t i = 0; i < kBaseLearners.size(); ++i) {
    if (base_learners[i].algorithm != kBaseLearners[i]) {
      throw ValidationError(
          "experiment config: base learners must be MARS, PolyMARS, RF, GBM, XGB, BRNN in order");
    }
  }
  if (combiners != CombinerSpec::all()) {
    throw ValidationError("experiment config: the 11 combiners must all be present, in order");
  }
}

RegressorSpec ExperimentConfig::meta_spec(Algorithm algorithm) const {
  for (const auto& spec : base_learners) {
    if (spec.algorithm == algorithm) return spec;
  }
  return RegressorSpec::defaults(algorithm);
}

std::vector<std::string> learner_names(const ExperimentConfig& config) {
  std::vector<std::string> names;
  for (const auto& spec : config.base_learners) names.emplace_back(to_string(spec.algorithm));
  for (const auto& c : config.combiners) names.push_back(c.name());
  return names;
}

const LearnerResult& ExperimentReport::result(std::string_view learner,
                                              PredictorSetId set) const {
  for (const auto& r : results) {
    if (r.learner == learner && r.set == set) return r;
  }
  throw ValidationError("report: no row for " + std::string(learner) + " / " +
                        std::string(to_string(set)));
}

const SetSummary& ExperimentReport::summary(PredictorSetId set) const {
  for (const auto& s : summaries) {
    if (s.set == set) return s;
  }
  throw ValidationError("report: predictor " + std::string(to_string(set)) + " was not run");
}

ExperimentReport run_experiment(const std::map<PredictorSetId, FeatureTable>& features,
                                const ExperimentConfig& input_config) {
  input_config.validate();
  ExperimentConfig config = input_config;

  // Shared row universe.
  const FeatureTable* reference = nullptr;
  for (PredictorSetId set : config.sets) {
    const auto it = features.find(set);
    if (it == features.end()) {
      throw ValidationError("run_experiment: no feature table for predictor " +
                            std::string(to_string(set)));
    }
    if (it->second.cols() != feature_count(set)) {
      throw ValidationError("run_experiment: feature table for " + std::string(to_string(set)) +
                            " has the wrong width");
    }
    if (reference == nullptr) {
      reference = &it->second;
    } else if (it->second.keys != reference->keys || it->second.y != reference->y) {
      throw ValidationError(
          "run_experiment: predictor sets do not share the same rows (station, month, target)");
    }
  }
  const std::size_t n = reference->rows();

  ExperimentReport report;
  report.software_version = GAUGEBLEND_VERSION;
  report.seed = config.seed;
  report.rows = n;
  report.learners = learner_names(config);

  // Per-learner seeds.
  const std::uint64_t split_seed = derive_seed(config.seed, "split");
  report.seeds["split"] = split_seed;
  for (auto& spec : config.base_learners) {
    const std::string tag = "base/" + std::string(to_string(spec.algorithm));
    spec.seed = derive_seed(config.seed, tag);
    spec.clip_at_zero = config.clip_at_zero;
    report.seeds[tag] = spec.seed;
  }
  std::vector<RegressorSpec> meta_specs(config.combiners.size());
  for (std::size_t c = 0; c < config.combiners.size(); ++c) {
    meta_specs[c] = config.meta_spec(config.combiners[c].meta);
    if (config.combiners[c].kind == CombinerKind::Stack) {
      const std::string tag = "stack/" + std::string(to_string(config.combiners[c].meta));
      meta_specs[c].seed = derive_seed(config.seed, tag);
      meta_specs[c].clip_at_zero = config.clip_at_zero;
      report.seeds[tag] = meta_specs[c].seed;
    }
  }

  const SplitPlan plan = split_three(n, split_seed);
  report.split_sizes = {plan.d1.size(), plan.d2.size(), plan.d3.size()};
  const auto d12 = sorted_union(plan.d1, plan.d2);

  auto log = [&](const std::string& message) {
    if (config.progress) config.progress(message);
  };
  auto touch = [&](const char* stage, PredictorSetId set, const std::vector<std::size_t>& rows) {
    if (config.audit) report.audit.push_back({stage, set, rows});
  };

  const std::size_t n_base = config.base_learners.size();
  const std::size_t n_comb = config.combiners.size();

  for (PredictorSetId set : config.sets) {
    const FeatureTable& table = features.at(set);
    const std::string set_name(to_string(set));

    // (a) base learners on d1, predictions for d2.
    log(set_name + ": fitting base learners on dataset 1");
    touch("fit_base_d1", set, plan.d1);
    touch("predict_base_d2", set, plan.d2);
    BaseRun stage1 = fit_and_predict(config, table, plan.d1, plan.d2);

    // (b) selection and meta-learners on (d2 predictions, d2 truth).
    log(set_name + ": fitting combiners on dataset 2");
    touch("fit_combiners_d2", set, plan.d2);
    const auto truth_d2 = select<double>(table.y, plan.d2);
    PredictionMatrix preds_d2{stage1.predictions};
    std::vector<std::optional<FittedCombiner>> combiners(n_comb);
    std::vector<double> combiner_fit_seconds(n_comb);
    parallel_for(n_comb, config.threads, [&](std::size_t c) {
      const auto start = Clock::now();
      combiners[c] = fit_combiner(config.combiners[c], preds_d2, truth_d2, meta_specs[c]);
      combiner_fit_seconds[c] = seconds_since(start);
    });

    SetSummary summary;
    summary.set = set;
    summary.rows = table.rows();
    summary.drops = table.drops;
    for (std::size_t i = 0; i < n_base; ++i) {
      summary.d2_mse.emplace_back(report.learners[i],
                                  mse(preds_d2.values.column(i), truth_d2));
    }
    summary.d2_mse.emplace_back("Mean", mse(combine_mean(preds_d2), truth_d2));
    summary.d2_mse.emplace_back("Median", mse(combine_median(preds_d2), truth_d2));
    for (std::size_t c = 0; c < n_comb; ++c) {
      const auto& spec = config.combiners[c];
      if (spec.kind == CombinerKind::Stack && spec.meta == Algorithm::LR) {
        summary.d2_mse.emplace_back("Stack-LR", mse(predict_combiner(*combiners[c], preds_d2),
                                                    truth_d2));
      }
    }

    // (c) base learners refit on d1+d2, predictions for d3.
    log(set_name + ": refitting base learners on datasets 1 and 2");
    touch("fit_base_d12", set, d12);
    touch("predict_base_d3", set, plan.d3);
    BaseRun stage2 = fit_and_predict(config, table, d12, plan.d3);
    PredictionMatrix preds_d3{stage2.predictions};

    // (d) combiners applied to d3, (e) scored on d3.
    touch("evaluate_d3", set, plan.d3);
    const auto truth_d3 = select<double>(table.y, plan.d3);
    const double stage1_total =
        std::accumulate(stage1.seconds.begin(), stage1.seconds.end(), 0.0);
    const double stage2_total =
        std::accumulate(stage2.seconds.begin(), stage2.seconds.end(), 0.0);

    for (std::size_t i = 0; i < n_base; ++i) {
      const auto col = preds_d3.values.column(i);
      LearnerResult r;
      r.learner = report.learners[i];
      r.set = set;
      r.mse = mse(col, truth_d3);
      r.mdse = mdse(col, truth_d3);
      r.seconds = stage2.seconds[i];
      report.results.push_back(std::move(r));
    }
    for (std::size_t c = 0; c < n_comb; ++c) {
      const auto start = Clock::now();
      const auto pred = predict_combiner(*combiners[c], preds_d3);
      const double apply_seconds = seconds_since(start);
      const auto kind = config.combiners[c].kind;
      LearnerResult r;
      r.learner = report.learners[n_base + c];
      r.set = set;
      r.mse = mse(pred, truth_d3);
      r.mdse = mdse(pred, truth_d3);
      // (f) time: every base fit the combiner depends on, plus its own work.
      r.seconds = stage2_total + apply_seconds;
      if (kind != CombinerKind::Mean && kind != CombinerKind::Median) {
        r.seconds += stage1_total + combiner_fit_seconds[c];
      }
      if (combiners[c]->selected()) r.selected = report.learners[*combiners[c]->selected()];
      report.results.push_back(std::move(r));
    }

    // Type-1 skill against MARS on this set.
    const double benchmark = report.result("MARS", set).mse;
    summary.type1_suppressed = !(benchmark > 0.0);
    std::vector<double> set_mse;
    for (auto& r : report.results) {
      if (r.set != set) continue;
      if (!summary.type1_suppressed) r.rs_type1 = skill_score(r.mse, benchmark);
      set_mse.push_back(r.mse);
    }
    const auto ranks = rank_values(set_mse, Direction::LowerIsBetter);
    std::size_t k = 0;
    for (auto& r : report.results) {
      if (r.set == set) r.rank_type1 = ranks[k++];
    }
    report.summaries.push_back(std::move(summary));
    log(set_name + ": done");
  }

  // Type-2 skill against {MARS, Set1}, ranked over every row.
  const bool has_set1 = std::find(config.sets.begin(), config.sets.end(), PredictorSetId::Set1) !=
                        config.sets.end();
  const double benchmark2 = has_set1 ? report.result("MARS", PredictorSetId::Set1).mse : 0.0;
  report.type2_suppressed = !(benchmark2 > 0.0);
  std::vector<double> all_mse;
  for (auto& r : report.results) {
    if (!report.type2_suppressed) r.rs_type2 = skill_score(r.mse, benchmark2);
    all_mse.push_back(r.mse);
  }
  const auto ranks2 = rank_values(all_mse, Direction::LowerIsBetter);
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    report.results[i].rank_type2 = ranks2[i];
  }
  return report;
}

std::vector<ImportanceRun> run_importance(const std::map<PredictorSetId, FeatureTable>& features,
                                          const ExperimentConfig& input_config,
                                          std::size_t repeats) {
  input_config.validate();
  ExperimentConfig config = input_config;
  for (auto& spec : config.base_learners) {
    spec.seed = derive_seed(config.seed, "base/" + std::string(to_string(spec.algorithm)));
    spec.clip_at_zero = config.clip_at_zero;
  }
  RegressorSpec rf = config.meta_spec(Algorithm::RF);
  RegressorSpec xgb = config.meta_spec(Algorithm::XGB);
  rf.seed = derive_seed(config.seed, "importance/RF");
  xgb.seed = derive_seed(config.seed, "importance/XGB");
  const std::uint64_t perm_seed = derive_seed(config.seed, "importance/permutation");

  std::vector<std::string> base_names;
  for (Algorithm a : kBaseLearners) base_names.emplace_back(to_string(a));

  std::vector<ImportanceRun> runs;
  std::optional<SplitPlan> plan;
  for (PredictorSetId set : config.sets) {
    const auto it = features.find(set);
    if (it == features.end()) {
      throw ValidationError("run_importance: no feature table for predictor " +
                            std::string(to_string(set)));
    }
    const FeatureTable& table = it->second;
    if (!plan) plan = split_three(table.rows(), derive_seed(config.seed, "split"));
    if (table.rows() != plan->d1.size() + plan->d2.size() + plan->d3.size()) {
      throw ValidationError("run_importance: predictor sets do not share the same rows");
    }
    if (config.progress) config.progress(std::string(to_string(set)) + ": base-learner importance");

    const BaseRun stage1 = fit_and_predict(config, table, plan->d1, plan->d2);
    const auto truth_d2 = select<double>(table.y, plan->d2);
    ImportanceRun run;
    run.set = set;
    run.scope = "base_learners";
    const auto rf_model = fit(rf, stage1.predictions, truth_d2, {config.threads});
    run.permutation = permutation_importance(rf_model, stage1.predictions, truth_d2, base_names,
                                             repeats, perm_seed);
    run.gain = gain_importance(fit(xgb, stage1.predictions, truth_d2), base_names);
    runs.push_back(std::move(run));

    if (set == PredictorSetId::Set3) {
      if (config.progress) config.progress("set3: predictor importance");
      const auto d12 = sorted_union(plan->d1, plan->d2);
      const Matrix x = table.x.select_rows(d12);
      const auto y = select<double>(table.y, d12);
      ImportanceRun pr;
      pr.set = set;
      pr.scope = "predictors";
      const auto rf_pred = fit(rf, x, y, {config.threads});
      pr.permutation = permutation_importance(rf_pred, x, y, table.names, repeats, perm_seed);
      pr.gain = gain_importance(fit(xgb, x, y), table.names);
      runs.push_back(std::move(pr));
    }
  }
  return runs;
}

}  // namespace gaugeblend
