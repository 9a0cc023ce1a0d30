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

#ifndef GAUGEBLEND_SERIALIZATION_HPP_
#define GAUGEBLEND_SERIALIZATION_HPP_

#include <nlohmann/json.hpp>

#include "gaugeblend/learners.hpp"

namespace gaugeblend {

inline constexpr int kModelFormatVersion = 1;

// Regressor specs as JSON objects. Missing fields keep their defaults, so a
// config may give only {"algorithm": "RF", "forest": {"trees": 100}}.
nlohmann::json spec_to_json(const RegressorSpec& spec);
RegressorSpec spec_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const FittedRegressor& model);
FittedRegressor model_from_json(const nlohmann::json& j);

}  // namespace gaugeblend

#endif  // GAUGEBLEND_SERIALIZATION_HPP_
