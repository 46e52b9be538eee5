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

#include <vector>

#include "fcer/raster.hpp"

namespace fcer {

/// Disk structuring element: all integer offsets (dy, dx) with dy^2 + dx^2 <= r^2.
struct DiskElement {
  struct Offset {
    int dy;
    int dx;
    friend bool operator==(const Offset&, const Offset&) = default;
  };

  double radius_px = 0.0;
  std::vector<Offset> offsets;

  static DiskElement make(double radius_px);
};

/// Exact squared Euclidean distance (in pixel units) from every pixel to the
/// nearest foreground pixel. Values are integers stored as double.
/// Throws DegenerateError when the mask has no foreground.
Grid<double> squared_distance_transform(const BinaryMask& mask);

/// Exact Euclidean distance transform; zero on foreground.
Grid<double> euclidean_distance_transform(const BinaryMask& mask);

/// Binary dilation by a disk of radius radius_px, computed as EDT <= radius.
/// An empty mask dilates to an empty mask.
BinaryMask dilate(const BinaryMask& mask, double radius_px);

/// Reference dilation that stamps the structuring element over each foreground
/// pixel. Same result as dilate(); kept as an independent route.
BinaryMask dilate(const BinaryMask& mask, const DiskElement& element);

/// Foreground pixels with at least one 4-neighbour that is background or
/// outside the raster.
BinaryMask extract_boundary(const BinaryMask& mask);

}  // namespace fcer
