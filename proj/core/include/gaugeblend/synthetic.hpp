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

#ifndef GAUGEBLEND_SYNTHETIC_HPP_
#define GAUGEBLEND_SYNTHETIC_HPP_

#include <cstdint>

#include "gaugeblend/data.hpp"

namespace gaugeblend {

// Desk-scale stand-in for gauge plus satellite data. A latent monthly field
// (seasonal base and seeded Gaussian bumps whose amplitudes change every
// month) is observed three ways:
//   product A = latent * (1 + bias_a) + N(0, noise_a), on the base grid
//   product B = latent + bias_b + N(0, noise_b), on a grid shifted by half a cell
//   gauges    = latent * (1 + elevation_per_km * km) + N(0, gauge_noise)
// The products miss the orographic term, as satellite retrievals tend to.
// All values are floored at 0.
struct SyntheticSpec {
  std::size_t stations = 50;
  std::size_t months = 40;
  int start_year = 2001;

  double lat_min = 35.0, lat_max = 45.0;
  double lon_min = -100.0, lon_max = -90.0;
  std::size_t grid_rows = 41, grid_cols = 41;  // span the box plus one cell

  std::size_t bumps = 8;
  double bump_sigma_deg = 1.5;
  double bump_amplitude_mm = 40.0;
  double base_mm = 60.0;
  double seasonal_amplitude = 0.3;
  double elevation_per_km = 0.5;   // relative increase per km
  double max_elevation_m = 2000.0;

  double bias_a = 0.2;
  double noise_a = 14.0;
  double bias_b = 5.0;
  double noise_b = 7.0;
  double gauge_noise = 2.0;
  double missing_fraction = 0.02;  // gauge months written as the sentinel

  std::uint64_t seed = 42;

  // Throws ValidationError for < 20 stations, < 12 months, an empty box or a
  // grid with fewer than 2 points along an axis.
  void validate() const;
};

// Products are named "product_a" and "product_b".
GaugeData generate_synthetic(const SyntheticSpec& spec);

}  // namespace gaugeblend

#endif  // GAUGEBLEND_SYNTHETIC_HPP_
