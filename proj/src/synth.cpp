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

#include "fcer/synth.hpp"

#include <cmath>
#include <random>

#include "fcer/morphology.hpp"
#include "fcer/parallel.hpp"

namespace fcer {

void ScenarioSpec::validate() const {
  if (grid_size < 1) throw ArgumentError("scenario: grid_size must be >= 1");
  if (n_fires < 1) throw ArgumentError("scenario: n_fires must be >= 1");
  if (blob_count_range.first < 1) throw ArgumentError("scenario: at least one blob per fire is required");
  if (blob_count_range.second < blob_count_range.first) throw ArgumentError("scenario: empty blob count range");
  if (!(blob_radius_range_px.first >= 0.0) || blob_radius_range_px.second < blob_radius_range_px.first) {
    throw ArgumentError("scenario: invalid blob radius range");
  }
  if (n_members < 1) throw ArgumentError("scenario: n_members must be >= 1");
  if (!(member_noise_sigma >= 0.0) || !(feature_noise_sigma >= 0.0) || !(smoothing_sigma_px >= 0.0)) {
    throw ArgumentError("scenario: noise and smoothing parameters must be >= 0");
  }
  if (!(member_noise_floor >= 0.0 && member_noise_floor <= 1.0)) {
    throw ArgumentError("scenario: member_noise_floor must lie in [0, 1]");
  }
  if (!std::isfinite(member_bias)) throw ArgumentError("scenario: member_bias must be finite");
  if (feature_channels < 0) throw ArgumentError("scenario: feature_channels must be >= 0");
  if (years.empty()) throw ArgumentError("scenario: at least one year is required");
}

std::uint64_t fire_seed(std::uint64_t seed, std::size_t fire_index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(fire_index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Grid<double> gaussian_blur(const Grid<double>& grid, double sigma_px) {
  if (sigma_px <= 0.0) return grid;
  const int reach = static_cast<int>(std::ceil(3.0 * sigma_px));
  Eigen::ArrayXd kernel(2 * reach + 1);
  for (int i = -reach; i <= reach; ++i) kernel(i + reach) = std::exp(-0.5 * i * i / (sigma_px * sigma_px));
  kernel /= kernel.sum();

  const Index h = grid.rows();
  const Index w = grid.cols();
  Grid<double> tmp = Grid<double>::Zero(h, w);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -reach; i <= reach; ++i) {
        const Index xx = x + i;
        if (xx >= 0 && xx < w) acc += kernel(i + reach) * grid(y, xx);
      }
      tmp(y, x) = acc;
    }
  }
  Grid<double> out = Grid<double>::Zero(h, w);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -reach; i <= reach; ++i) {
        const Index yy = y + i;
        if (yy >= 0 && yy < h) acc += kernel(i + reach) * tmp(yy, x);
      }
      out(y, x) = acc;
    }
  }
  return out;
}

namespace {

FireEvent generate_fire(const ScenarioSpec& spec, std::size_t index) {
  std::mt19937_64 rng(fire_seed(spec.rng_seed, index));
  const Index g = spec.grid_size;

  FireEvent ev;
  char id[32];
  std::snprintf(id, sizeof(id), "fire_%03zu", index);
  ev.id = id;
  ev.year = spec.years[index % spec.years.size()];

  // Blob centres stay in the middle half of the raster.
  std::uniform_int_distribution<int> blob_count(spec.blob_count_range.first, spec.blob_count_range.second);
  std::uniform_int_distribution<Index> centre(g / 4, std::max<Index>(g / 4, (3 * g) / 4 - 1));
  std::uniform_real_distribution<double> radius(spec.blob_radius_range_px.first, spec.blob_radius_range_px.second);
  ev.gt = BinaryMask::Zero(g, g);
  const int blobs = blob_count(rng);
  for (int b = 0; b < blobs; ++b) {
    const Index cy = centre(rng);
    const Index cx = centre(rng);
    const double r = radius(rng);
    for (Index y = 0; y < g; ++y) {
      for (Index x = 0; x < g; ++x) {
        const double dy = static_cast<double>(y - cy);
        const double dx = static_cast<double>(x - cx);
        if (dy * dy + dx * dx <= r * r) ev.gt(y, x) = 1;
      }
    }
  }

  const Grid<double> smooth = gaussian_blur(ev.gt.cast<double>(), spec.smoothing_sigma_px);
  const Grid<double> proximity = (-euclidean_distance_transform(extract_boundary(ev.gt)) / 3.0).exp();
  const Grid<double> sigma =
      spec.member_noise_sigma * (spec.member_noise_floor + (1.0 - spec.member_noise_floor) * proximity);
  std::normal_distribution<double> member_noise(0.0, 1.0);
  for (int k = 0; k < spec.n_members; ++k) {
    Grid<double> m = smooth + spec.member_bias;
    if (spec.member_noise_sigma > 0.0) {
      for (Index i = 0; i < m.size(); ++i) m.data()[i] += sigma.data()[i] * member_noise(rng);
    }
    ev.members.push_back(m.max(0.0).min(1.0).cast<float>());
  }

  if (spec.feature_channels > 0) {
    std::vector<Grid<double>> channels;
    channels.push_back(proximity);
    for (const auto& m : ev.members) {
      const Grid<double> p = m.cast<double>().max(0.01).min(0.99);
      channels.push_back((p / (1.0 - p)).log() / 4.0);
    }
    std::normal_distribution<double> feature_noise(0.0, 1.0);
    while (static_cast<int>(channels.size()) < spec.feature_channels) {
      Grid<double> c(g, g);
      for (Index i = 0; i < c.size(); ++i) c.data()[i] = spec.feature_noise_sigma * feature_noise(rng);
      channels.push_back(std::move(c));
    }
    FeatureStack stack;
    stack.height = g;
    stack.width = g;
    stack.data.resize(spec.feature_channels, g * g);
    for (int c = 0; c < spec.feature_channels; ++c) {
      stack.data.row(c) = Eigen::Map<const Eigen::RowVectorXd>(channels[static_cast<std::size_t>(c)].data(), g * g)
                              .cast<float>();
    }
    ev.features = std::move(stack);
  }
  return ev;
}

}  // namespace

std::vector<FireEvent> generate_scenario(const ScenarioSpec& spec, std::size_t jobs) {
  spec.validate();
  std::vector<FireEvent> events(static_cast<std::size_t>(spec.n_fires));
  parallel_for(events.size(), jobs, [&](std::size_t i) { events[i] = generate_fire(spec, i); });
  for (const auto& ev : events) ev.validate();
  return events;
}

nlohmann::ordered_json to_json(const ScenarioSpec& spec) {
  return {{"rng_seed", spec.rng_seed},
          {"grid_size", spec.grid_size},
          {"n_fires", spec.n_fires},
          {"blob_count_range", {spec.blob_count_range.first, spec.blob_count_range.second}},
          {"blob_radius_range_px", {spec.blob_radius_range_px.first, spec.blob_radius_range_px.second}},
          {"n_members", spec.n_members},
          {"member_noise_sigma", spec.member_noise_sigma},
          {"member_bias", spec.member_bias},
          {"member_noise_floor", spec.member_noise_floor},
          {"smoothing_sigma_px", spec.smoothing_sigma_px},
          {"feature_channels", spec.feature_channels},
          {"feature_noise_sigma", spec.feature_noise_sigma},
          {"years", spec.years}};
}

}  // namespace fcer
