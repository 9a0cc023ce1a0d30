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

#include <Eigen/Dense>

#include "fitters.hpp"

namespace gaugeblend::internal {

// OLS with intercept via complete orthogonal decomposition, which yields the
// minimum-norm least-squares solution when [1 | X] is rank deficient.
LinearModel fit_linear(const Matrix& x, std::span<const double> y, FitMetadata& meta) {
  const auto n = static_cast<Eigen::Index>(x.rows());
  const auto p = static_cast<Eigen::Index>(x.cols());
  Eigen::MatrixXd design(n, p + 1);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      design(i, j + 1) = x(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    target(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  const Eigen::VectorXd beta = cod.solve(target);

  LinearModel model;
  model.rank = static_cast<std::size_t>(cod.rank());
  model.intercept = beta(0);
  model.coefficients.assign(beta.data() + 1, beta.data() + beta.size());
  meta.rank_deficient = cod.rank() < p + 1;
  return model;
}

double predict_linear(const LinearModel& m, std::span<const double> row) {
  double out = m.intercept;
  for (std::size_t j = 0; j < row.size(); ++j) out += m.coefficients[j] * row[j];
  return out;
}

}  // namespace gaugeblend::internal
