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

#include <cstddef>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fcer/raster.hpp"

namespace fcer::npy {

enum class DType { kFloat32, kFloat64, kUInt8, kBool };

/// Descriptor string as written into the header ('<f4', '|u1', ...).
std::string_view descr(DType dtype);
std::size_t item_size(DType dtype);

template <typename T>
constexpr DType dtype_of();
template <>
constexpr DType dtype_of<float>() { return DType::kFloat32; }
template <>
constexpr DType dtype_of<double>() { return DType::kFloat64; }
template <>
constexpr DType dtype_of<std::uint8_t>() { return DType::kUInt8; }

/// Raw little-endian C-order array as stored in an NPY v1.0 file.
struct Array {
  DType dtype = DType::kFloat32;
  std::vector<std::size_t> shape;
  std::vector<char> bytes;

  std::size_t element_count() const;
};

/// Parses a complete NPY file image. Accepts format versions 1.0 and 2.0.
Array decode(std::string_view file);
/// Serialises to NPY v1.0 with the header padded to a 64-byte boundary.
std::string encode(const Array& array);

Array read(const std::filesystem::path& path);
void write(const std::filesystem::path& path, const Array& array);

template <typename T>
Array from_grid(const Grid<T>& grid) {
  Array out;
  out.dtype = dtype_of<T>();
  out.shape = {static_cast<std::size_t>(grid.rows()), static_cast<std::size_t>(grid.cols())};
  out.bytes.resize(sizeof(T) * static_cast<std::size_t>(grid.size()));
  std::memcpy(out.bytes.data(), grid.data(), out.bytes.size());
  return out;
}

/// Reinterprets a 2-D array of exactly dtype T; no conversion.
template <typename T>
Grid<T> to_grid(const Array& array) {
  if (array.shape.size() != 2) {
    throw ShapeError("expected a 2-D array, got " + std::to_string(array.shape.size()) + "-D");
  }
  if (array.dtype != dtype_of<T>()) {
    throw ParseError(std::string("dtype mismatch: file holds ") + std::string(descr(array.dtype)) +
                     ", expected " + std::string(descr(dtype_of<T>())));
  }
  Grid<T> grid(static_cast<Index>(array.shape[0]), static_cast<Index>(array.shape[1]));
  std::memcpy(grid.data(), array.bytes.data(), array.bytes.size());
  return grid;
}

template <typename T>
Grid<T> load_grid(const std::filesystem::path& path) {
  return to_grid<T>(read(path));
}

template <typename T>
void save_grid(const Grid<T>& grid, const std::filesystem::path& path) {
  write(path, from_grid(grid));
}

/// Validated loaders. float64 probability/uncertainty files are narrowed to
/// float32; masks may be stored as uint8, bool or floating point {0, 1}.
ProbabilityMap load_probability(const std::filesystem::path& path);
UncertaintyMap load_uncertainty(const std::filesystem::path& path);
BinaryMask load_mask(const std::filesystem::path& path);
FeatureStack load_features(const std::filesystem::path& path);
void save_features(const FeatureStack& stack, const std::filesystem::path& path);

}  // namespace fcer::npy
