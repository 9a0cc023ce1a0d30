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

// Bayesian-regularized single-hidden-layer network.
//
// Objective F = beta * SSE + alpha * |w|^2 on standardized data, minimized
// by full-batch gradient descent with backtracking line search. Every few
// steps (alpha, beta) are re-estimated from the evidence approximation with
// the Gauss-Newton Hessian H = 2 beta J'J + 2 alpha I:
//   gamma = W - 2 alpha tr(H^-1),  alpha = gamma / (2 |w|^2),
//   beta = (n - gamma) / (2 SSE).
// If H is not positive definite or gamma leaves (0, n), the current
// (alpha, beta) are frozen for the rest of the fit.

#include "gaugeblend/brnn.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fitters.hpp"
#include "gaugeblend/random.hpp"

namespace gaugeblend::brnn {

std::size_t parameter_count(std::size_t inputs, std::size_t hidden) {
  return hidden * inputs + 2 * hidden + 1;
}

double forward(std::span<const double> params, std::size_t inputs, std::size_t hidden,
               std::span<const double> x) {
  const double* w1 = params.data();
  const double* b1 = w1 + hidden * inputs;
  const double* w2 = b1 + hidden;
  double out = w2[hidden];
  for (std::size_t h = 0; h < hidden; ++h) {
    double a = b1[h];
    for (std::size_t k = 0; k < inputs; ++k) a += w1[h * inputs + k] * x[k];
    out += w2[h] * std::tanh(a);
  }
  return out;
}

LossParts loss_parts(std::span<const double> params, const Matrix& x,
                     std::span<const double> y, std::size_t hidden) {
  LossParts parts;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double e = forward(params, x.cols(), hidden, x.row(i)) - y[i];
    parts.sse += e * e;
  }
  for (double w : params) parts.weight_norm2 += w * w;
  return parts;
}

double penalized_loss(std::span<const double> params, const Matrix& x,
                      std::span<const double> y, std::size_t hidden, double alpha,
                      double beta) {
  const auto parts = loss_parts(params, x, y, hidden);
  return beta * parts.sse + alpha * parts.weight_norm2;
}

std::vector<double> penalized_gradient(std::span<const double> params, const Matrix& x,
                                       std::span<const double> y, std::size_t hidden,
                                       double alpha, double beta) {
  const std::size_t inputs = x.cols();
  const double* w1 = params.data();
  const double* b1 = w1 + hidden * inputs;
  const double* w2 = b1 + hidden;

  std::vector<double> grad(params.size(), 0.0);
  double* g_w1 = grad.data();
  double* g_b1 = g_w1 + hidden * inputs;
  double* g_w2 = g_b1 + hidden;
  std::vector<double> act(hidden);

  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto xi = x.row(i);
    double out = w2[hidden];
    for (std::size_t h = 0; h < hidden; ++h) {
      double a = b1[h];
      for (std::size_t k = 0; k < inputs; ++k) a += w1[h * inputs + k] * xi[k];
      act[h] = std::tanh(a);
      out += w2[h] * act[h];
    }
    const double d = 2.0 * beta * (out - y[i]);
    g_w2[hidden] += d;
    for (std::size_t h = 0; h < hidden; ++h) {
      g_w2[h] += d * act[h];
      const double dh = d * w2[h] * (1.0 - act[h] * act[h]);
      g_b1[h] += dh;
      for (std::size_t k = 0; k < inputs; ++k) g_w1[h * inputs + k] += dh * xi[k];
    }
  }
  for (std::size_t k = 0; k < params.size(); ++k) grad[k] += 2.0 * alpha * params[k];
  return grad;
}

Matrix output_jacobian(std::span<const double> params, const Matrix& x, std::size_t hidden) {
  const std::size_t inputs = x.cols();
  const double* w1 = params.data();
  const double* b1 = w1 + hidden * inputs;
  const double* w2 = b1 + hidden;
  Matrix jac(x.rows(), params.size());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto xi = x.row(i);
    auto row = jac.row(i);
    for (std::size_t h = 0; h < hidden; ++h) {
      double a = b1[h];
      for (std::size_t k = 0; k < inputs; ++k) a += w1[h * inputs + k] * xi[k];
      const double t = std::tanh(a);
      const double dh = w2[h] * (1.0 - t * t);
      for (std::size_t k = 0; k < inputs; ++k) row[h * inputs + k] = dh * xi[k];
      row[hidden * inputs + h] = dh;
      row[hidden * inputs + hidden + h] = t;
    }
    row[hidden * inputs + 2 * hidden] = 1.0;
  }
  return jac;
}

}  // namespace gaugeblend::brnn

namespace gaugeblend::internal {
namespace {

struct Evidence {
  bool ok = false;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

Evidence evidence_update(std::span<const double> params, const Matrix& x,
                         std::span<const double> y, std::size_t hidden, double alpha,
                         double beta) {
  const Matrix jac = brnn::output_jacobian(params, x, hidden);
  const auto n = static_cast<Eigen::Index>(jac.rows());
  const auto w = static_cast<Eigen::Index>(jac.cols());
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      j(jac.values().data(), n, w);
  Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(w, w);
  hessian.selfadjointView<Eigen::Lower>().rankUpdate(j.transpose(), 2.0 * beta);
  hessian.diagonal().array() += 2.0 * alpha;
  const Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(hessian);
  if (llt.info() != Eigen::Success) return {};
  const Eigen::MatrixXd inverse = llt.solve(Eigen::MatrixXd::Identity(w, w));
  const double gamma = static_cast<double>(w) - 2.0 * alpha * inverse.trace();

  const auto parts = brnn::loss_parts(params, x, y, hidden);
  const double nn = static_cast<double>(n);
  if (!(gamma > 0.0) || !(gamma < nn) || !(parts.weight_norm2 > 0.0) || !(parts.sse > 0.0)) {
    return {};
  }
  Evidence e{true, gamma / (2.0 * parts.weight_norm2), (nn - gamma) / (2.0 * parts.sse), gamma};
  if (!std::isfinite(e.alpha) || !std::isfinite(e.beta)) return {};
  return e;
}

}  // namespace

BrnnModel fit_brnn(const Matrix& x, std::span<const double> y, const BrnnParams& params,
                   std::uint64_t seed, FitMetadata& meta) {
  const std::size_t n = x.rows(), p = x.cols();
  BrnnModel model;
  model.inputs = p;
  model.hidden = params.hidden;
  column_standardization(x, model.x_center, model.x_scale);
  model.y_center = stable_mean(y);
  double ss = 0.0;
  for (double v : y) ss += (v - model.y_center) * (v - model.y_center);
  const double sd = std::sqrt(ss / static_cast<double>(n));
  if (!(sd > 0.0)) {
    model.constant = true;
    meta.degenerate_target = true;
    return model;
  }
  model.y_scale = sd;

  Matrix xs(n, p);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) xs(i, j) = (x(i, j) - model.x_center[j]) / model.x_scale[j];
    ys[i] = (y[i] - model.y_center) / model.y_scale;
  }

  const std::size_t hidden = params.hidden;
  std::vector<double> w(brnn::parameter_count(p, hidden));
  {
    Rng rng(seed);
    const double in_scale = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, p)));
    const double out_scale = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, hidden)));
    for (std::size_t k = 0; k < hidden * p; ++k) w[k] = rng.uniform(-1.0, 1.0) * in_scale;
    for (std::size_t k = hidden * p; k < hidden * p + hidden; ++k) w[k] = rng.uniform(-0.5, 0.5);
    for (std::size_t k = hidden * p + hidden; k < w.size(); ++k) {
      w[k] = rng.uniform(-1.0, 1.0) * out_scale;
    }
  }

  double alpha = params.initial_alpha;
  double beta = params.initial_beta;
  double gamma = static_cast<double>(w.size());
  bool frozen = false;
  double loss = brnn::penalized_loss(w, xs, ys, hidden, alpha, beta);
  double step = 1e-3;
  std::vector<double> trial(w.size());
  std::size_t steps = 0;

  for (; steps < params.max_steps; ++steps) {
    bool reweighted = false;
    if (!frozen && steps > 0 && params.evidence_every > 0 && steps % params.evidence_every == 0) {
      const Evidence e = evidence_update(w, xs, ys, hidden, alpha, beta);
      if (e.ok) {
        alpha = e.alpha;
        beta = e.beta;
        gamma = e.gamma;
        loss = brnn::penalized_loss(w, xs, ys, hidden, alpha, beta);
        reweighted = true;
      } else {
        frozen = true;
        meta.evidence_frozen = true;
      }
    }

    const auto grad = brnn::penalized_gradient(w, xs, ys, hidden, alpha, beta);
    double g2 = 0.0;
    for (double g : grad) g2 += g * g;
    if (!(g2 > 0.0)) break;

    // Armijo backtracking, starting from twice the last accepted step.
    step *= 2.0;
    double next = loss;
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      for (std::size_t k = 0; k < w.size(); ++k) trial[k] = w[k] - step * grad[k];
      next = brnn::penalized_loss(trial, xs, ys, hidden, alpha, beta);
      if (std::isfinite(next) && next <= loss - 1e-4 * step * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    w.swap(trial);
    const double change = (loss - next) / std::max(loss, 1e-300);
    loss = next;
    if (!reweighted && change < params.tolerance) {
      ++steps;
      break;
    }
  }

  model.params = std::move(w);
  model.alpha = alpha;
  model.beta = beta;
  model.gamma = gamma;
  model.steps = steps;
  return model;
}

double predict_brnn(const BrnnModel& m, std::span<const double> row) {
  if (m.constant) return m.y_center;
  thread_local std::vector<double> z;
  z.resize(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) z[j] = (row[j] - m.x_center[j]) / m.x_scale[j];
  return m.y_center + m.y_scale * brnn::forward(m.params, m.inputs, m.hidden, z);
}

}  // namespace gaugeblend::internal
