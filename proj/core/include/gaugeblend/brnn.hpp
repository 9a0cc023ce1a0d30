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

#ifndef GAUGEBLEND_BRNN_HPP_
#define GAUGEBLEND_BRNN_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "gaugeblend/matrix.hpp"

// Single-hidden-layer tanh network with Bayesian regularization. Parameter
// layout: input weights (hidden x inputs, row-major), hidden biases, output
// weights, output bias.
namespace gaugeblend::brnn {

std::size_t parameter_count(std::size_t inputs, std::size_t hidden);

double forward(std::span<const double> params, std::size_t inputs, std::size_t hidden,
               std::span<const double> x);

// Sum of squared errors and squared weight norm.
struct LossParts {
  double sse = 0.0;
  double weight_norm2 = 0.0;
};
LossParts loss_parts(std::span<const double> params, const Matrix& x,
                     std::span<const double> y, std::size_t hidden);

// beta * SSE + alpha * |w|^2 and its gradient.
double penalized_loss(std::span<const double> params, const Matrix& x,
                      std::span<const double> y, std::size_t hidden, double alpha,
                      double beta);
std::vector<double> penalized_gradient(std::span<const double> params, const Matrix& x,
                                       std::span<const double> y, std::size_t hidden,
                                       double alpha, double beta);

// Jacobian of the network output with respect to the parameters, n x W.
Matrix output_jacobian(std::span<const double> params, const Matrix& x, std::size_t hidden);

}  // namespace gaugeblend::brnn

#endif  // GAUGEBLEND_BRNN_HPP_
