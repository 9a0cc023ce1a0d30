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

#include "gaugeblend/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "gaugeblend/error.hpp"
#include "gaugeblend/random.hpp"

namespace gaugeblend {
namespace {

struct Bump {
  double lat, lon;
  double phase;
};


struct Field {
  const SyntheticSpec& spec;
  std::vector<Bump> bumps;
  // amplitude[month][bump]
  std::vector<std::vector<double>> amplitude;
  // Smooth terrain: a few broad ridges.
  std::vector<Bump> ridges;

  double elevation(double lat, double lon) const {
    double e = 0.0;
    for (const auto& r : ridges) {
      const double d2 = (lat - r.lat) * (lat - r.lat) + (lon - r.lon) * (lon - r.lon);
      e += std::exp(-d2 / (2.0 * 4.0));
    }
    return spec.max_elevation_m * std::min(1.0, e / static_cast<double>(ridges.size()) * 1.5);
  }

  // Field seen from space: seasonal base plus bumps.
  double free_value(double lat, double lon, std::size_t month) const {
    const double season =
        1.0 + spec.seasonal_amplitude *
                  std::sin(2.0 * std::numbers::pi * static_cast<double>(month % 12) / 12.0);
    double v = spec.base_mm * season;
    const double s2 = 2.0 * spec.bump_sigma_deg * spec.bump_sigma_deg;
    for (std::size_t b = 0; b < bumps.size(); ++b) {
      const double d2 = (lat - bumps[b].lat) * (lat - bumps[b].lat) +
                        (lon - bumps[b].lon) * (lon - bumps[b].lon);
      v += amplitude[month][b] * std::exp(-d2 / s2);
    }
    return std::max(0.0, v);
  }

  // What a gauge at this elevation receives.
  double ground_value(double lat, double lon, double elevation_m, std::size_t month) const {
    return free_value(lat, lon, month) * (1.0 + spec.elevation_per_km * elevation_m / 1000.0);
  }
};

std::string padded(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

GridProduct make_product(const SyntheticSpec& spec, const char* name, double offset_fraction) {
  GridProduct product;
  product.name = name;
  const double dlat = (spec.lat_max - spec.lat_min) / static_cast<double>(spec.grid_rows - 1);
  const double dlon = (spec.lon_max - spec.lon_min) / static_cast<double>(spec.grid_cols - 1);
  // The shifted grid gains one row and column so it still covers the box.
  const std::size_t rows = spec.grid_rows + (offset_fraction > 0.0 ? 1 : 0);
  const std::size_t cols = spec.grid_cols + (offset_fraction > 0.0 ? 1 : 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double lat = spec.lat_min + (static_cast<double>(r) - offset_fraction) * dlat;
      const double lon = spec.lon_min + (static_cast<double>(c) - offset_fraction) * dlon;
      product.points.push_back({lat, lon});
      product.grid_ids.push_back(padded("g", r * cols + c, 5));
    }
  }
  return product;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (stations < 20) throw ValidationError("synthetic: at least 20 stations are required");
  if (months < 12) throw ValidationError("synthetic: at least 12 months are required");
  if (!(lat_max > lat_min) || !(lon_max > lon_min) || lat_min < -89.0 || lat_max > 89.0 ||
      lon_min < -180.0 || lon_max > 180.0) {
    throw ValidationError("synthetic: invalid bounding box");
  }
  if (grid_rows < 2 || grid_cols < 2) {
    throw ValidationError("synthetic: grid too sparse for 4 distinct neighbors");
  }
  if (noise_a < 0.0 || noise_b < 0.0 || gauge_noise < 0.0 || bias_a <= -1.0) {
    throw ValidationError("synthetic: noise levels must be >= 0 and bias_a > -1");
  }
  if (missing_fraction < 0.0 || missing_fraction >= 1.0) {
    throw ValidationError("synthetic: missing_fraction must lie in [0, 1)");
  }
}

GaugeData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(mix_seed(spec.seed));

  Field field{spec, {}, {}, {}};
  for (int i = 0; i < 3; ++i) {
    field.ridges.push_back({rng.uniform(spec.lat_min, spec.lat_max),
                            rng.uniform(spec.lon_min, spec.lon_max), 0.0});
  }
  for (std::size_t b = 0; b < spec.bumps; ++b) {
    field.bumps.push_back({rng.uniform(spec.lat_min, spec.lat_max),
                           rng.uniform(spec.lon_min, spec.lon_max),
                           rng.uniform(0.0, 2.0 * std::numbers::pi)});
  }
  field.amplitude.assign(spec.months, std::vector<double>(spec.bumps));
  for (std::size_t m = 0; m < spec.months; ++m) {
    for (std::size_t b = 0; b < spec.bumps; ++b) {
      const double seasonal =
          0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * static_cast<double>(m) / 12.0 +
                               field.bumps[b].phase);
      field.amplitude[m][b] = spec.bump_amplitude_mm * seasonal * 2.0 * rng.uniform();
    }
  }

  GaugeData data;
  const int width = spec.stations < 1000 ? 3 : 6;
  for (std::size_t s = 0; s < spec.stations; ++s) {
    Station st;
    st.id = padded("ST", s + 1, width);
    st.location = {rng.uniform(spec.lat_min, spec.lat_max), rng.uniform(spec.lon_min, spec.lon_max)};
    st.elevation_m = std::round(field.elevation(st.location.lat, st.location.lon) * 10.0) / 10.0;
    data.stations.push_back(std::move(st));
  }

  std::vector<YearMonth> calendar;
  for (std::size_t m = 0; m < spec.months; ++m) {
    calendar.push_back({spec.start_year + static_cast<int>(m / 12), static_cast<int>(m % 12) + 1});
  }

  for (const auto& st : data.stations) {
    for (std::size_t m = 0; m < spec.months; ++m) {
      Observation obs;
      obs.station_id = st.id;
      obs.when = calendar[m];
      const double truth = field.ground_value(st.location.lat, st.location.lon, st.elevation_m, m);
      const double noisy = std::max(0.0, truth + spec.gauge_noise * rng.normal());
      if (rng.uniform() < spec.missing_fraction) {
        obs.precip_mm = kMissingValue;
        obs.missing = true;
      } else {
        obs.precip_mm = noisy;
      }
      data.observations.push_back(std::move(obs));
    }
  }

  GridProduct a = make_product(spec, "product_a", 0.0);
  GridProduct b = make_product(spec, "product_b", 0.5);
  for (std::size_t m = 0; m < spec.months; ++m) {
    auto& va = a.values[calendar[m]];
    va.resize(a.points.size());
    for (std::size_t g = 0; g < a.points.size(); ++g) {
      const auto& p = a.points[g];
      const double latent = field.free_value(p.lat, p.lon, m);
      va[g] = std::max(0.0, latent * (1.0 + spec.bias_a) + spec.noise_a * rng.normal());
    }
    auto& vb = b.values[calendar[m]];
    vb.resize(b.points.size());
    for (std::size_t g = 0; g < b.points.size(); ++g) {
      const auto& p = b.points[g];
      const double latent = field.free_value(p.lat, p.lon, m);
      vb[g] = std::max(0.0, latent + spec.bias_b + spec.noise_b * rng.normal());
    }
  }
  data.products.push_back(std::move(a));
  data.products.push_back(std::move(b));
  return data;
}

}  // namespace gaugeblend
