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

#include "fcer/raster.hpp"

#include <cmath>

namespace fcer {

void GeoConfig::validate() const {
  if (!(meters_per_pixel > 0.0) || !std::isfinite(meters_per_pixel)) {
    throw ArgumentError("meters_per_pixel must be positive and finite");
  }
  if (crop_size < 1) throw ArgumentError("crop_size must be >= 1");
}

FeatureStack center_crop(const FeatureStack& stack, Index crop_size) {
  if (crop_size < 1) throw DimensionError("center_crop: crop size must be >= 1");
  if (crop_size > stack.height) {
    throw DimensionError("center_crop: crop " + std::to_string(crop_size) + " exceeds height " +
                         std::to_string(stack.height));
  }
  if (crop_size > stack.width) {
    throw DimensionError("center_crop: crop " + std::to_string(crop_size) + " exceeds width " +
                         std::to_string(stack.width));
  }
  const Index top = (stack.height - crop_size) / 2;
  const Index left = (stack.width - crop_size) / 2;
  FeatureStack out;
  out.height = crop_size;
  out.width = crop_size;
  out.data.resize(stack.channels(), crop_size * crop_size);
  for (Index c = 0; c < stack.channels(); ++c) {
    for (Index y = 0; y < crop_size; ++y) {
      for (Index x = 0; x < crop_size; ++x) {
        out.data(c, y * crop_size + x) = stack.data(c, (top + y) * stack.width + left + x);
      }
    }
  }
  return out;
}

void validate_probability(const ProbabilityMap& prob, const std::string& what) {
  if (prob.size() == 0) throw ShapeError(what + ": empty raster");
  for (Index i = 0; i < prob.size(); ++i) {
    const float p = prob.data()[i];
    if (!std::isfinite(p)) throw ValidationError(what + ": non-finite value");
    if (p < 0.0f || p > 1.0f) throw ValidationError(what + ": value outside [0, 1]");
  }
}

void validate_mask(const BinaryMask& mask, const std::string& what) {
  if (mask.size() == 0) throw ShapeError(what + ": empty raster");
  if ((mask > 1).any()) throw ValidationError(what + ": value other than 0 or 1");
}

void validate_uncertainty(const UncertaintyMap& unc, const std::string& what) {
  if (unc.size() == 0) throw ShapeError(what + ": empty raster");
  for (Index i = 0; i < unc.size(); ++i) {
    const float u = unc.data()[i];
    if (!std::isfinite(u)) throw ValidationError(what + ": non-finite value");
    if (u < 0.0f) throw ValidationError(what + ": negative value");
  }
}

void validate_features(const FeatureStack& stack, const std::string& what) {
  if (stack.channels() < 1 || stack.pixels() < 1) throw ShapeError(what + ": empty stack");
  if (stack.data.cols() != stack.pixels()) throw ShapeError(what + ": inconsistent layout");
  if (!stack.data.allFinite()) throw ValidationError(what + ": non-finite value");
}

}  // namespace fcer
