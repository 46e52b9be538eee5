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
#include <string>

#include <Eigen/Core>

#include "fcer/error.hpp"

namespace fcer {

using Index = Eigen::Index;

/// Dense row-major raster. Row index is y (height), column index is x (width).
template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-pixel fire probability in [0, 1].
using ProbabilityMap = Grid<float>;
/// {0, 1} raster: ground truth, predicted mask, error map or evaluation region.
using BinaryMask = Grid<std::uint8_t>;
/// Nonnegative per-pixel uncertainty score.
using UncertaintyMap = Grid<float>;

/// Feature stack with C channels over an H x W raster. Row c holds channel c
/// flattened in row-major pixel order, so a linear head is a single GEMV.
struct FeatureStack {
  Index height = 0;
  Index width = 0;
  Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> data;

  Index channels() const { return data.rows(); }
  Index pixels() const { return height * width; }
};

struct GeoConfig {
  double meters_per_pixel = 375.0;
  Index crop_size = 128;

  void validate() const;
};

template <typename DerivedA, typename DerivedB>
bool same_shape(const Eigen::DenseBase<DerivedA>& a, const Eigen::DenseBase<DerivedB>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

template <typename DerivedA, typename DerivedB>
void require_same_shape(const Eigen::DenseBase<DerivedA>& a, const Eigen::DenseBase<DerivedB>& b,
                        const char* what) {
  if (!same_shape(a, b)) {
    throw ShapeError(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()) + ")");
  }
}

/// Centered crop_size x crop_size window. When the margin is odd the extra
/// pixel is dropped from the bottom/right: offset = floor((dim - crop) / 2).
template <typename Derived>
typename Derived::PlainObject center_crop(const Eigen::DenseBase<Derived>& grid, Index crop_size) {
  if (crop_size < 1) throw DimensionError("center_crop: crop size must be >= 1");
  if (crop_size > grid.rows()) {
    throw DimensionError("center_crop: crop " + std::to_string(crop_size) + " exceeds height " +
                         std::to_string(grid.rows()));
  }
  if (crop_size > grid.cols()) {
    throw DimensionError("center_crop: crop " + std::to_string(crop_size) + " exceeds width " +
                         std::to_string(grid.cols()));
  }
  const Index top = (grid.rows() - crop_size) / 2;
  const Index left = (grid.cols() - crop_size) / 2;
  return grid.block(top, left, crop_size, crop_size).eval();
}

FeatureStack center_crop(const FeatureStack& stack, Index crop_size);

/// Number of set pixels.
inline Index count(const BinaryMask& mask) { return mask.cast<Index>().sum(); }

void validate_probability(const ProbabilityMap& prob, const std::string& what = "probability map");
void validate_mask(const BinaryMask& mask, const std::string& what = "mask");
void validate_uncertainty(const UncertaintyMap& unc, const std::string& what = "uncertainty map");
void validate_features(const FeatureStack& stack, const std::string& what = "feature stack");

}  // namespace fcer
