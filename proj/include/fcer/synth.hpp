/*
 * Copyright 2026 The FCER Toolkit Authors.
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

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fcer/dataset.hpp"

namespace fcer {

/// Parameters of a seeded synthetic fire pack.
///
/// Each fire's ground truth is a union of random disks. Member k is
/// clip(smooth(gt) + member_bias + N(0, sigma), 0, 1) with independent
/// per-pixel noise, sigma = member_noise_sigma * (f + (1 - f) * q), where
/// q = exp(-d / 3) is the proximity to the gt boundary and f is
/// member_noise_floor. f = 1 gives uniform noise. Feature channels, truncated
/// to feature_channels, are:
///   0        boundary proximity q
///   1..n     member logits / 4
///   n+1..    N(0, feature_noise_sigma)
struct ScenarioSpec {
  std::uint64_t rng_seed = 0;
  Index grid_size = 128;
  int n_fires = 8;
  std::pair<int, int> blob_count_range{1, 4};
  std::pair<double, double> blob_radius_range_px{3.0, 12.0};
  int n_members = 3;
  double member_noise_sigma = 0.15;
  double member_bias = 0.0;
  double member_noise_floor = 0.25;
  double smoothing_sigma_px = 1.5;
  int feature_channels = 6;
  double feature_noise_sigma = 0.1;
  std::vector<int> years{2018, 2019, 2020, 2021};

  void validate() const;
};

/// Per-fire seed: splitmix64 of (seed + golden-ratio increment * (index + 1)).
/// Fires are generated independently, so generation order is irrelevant.
std::uint64_t fire_seed(std::uint64_t seed, std::size_t fire_index);

/// Deterministic for a given spec. Fire i is "fire_<i>" in years[i % years.size()].
std::vector<FireEvent> generate_scenario(const ScenarioSpec& spec, std::size_t jobs = 1);

nlohmann::ordered_json to_json(const ScenarioSpec& spec);

/// Separable Gaussian blur with zero padding; sigma 0 returns the input.
Grid<double> gaussian_blur(const Grid<double>& grid, double sigma_px);

}  // namespace fcer
