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
#include <span>
#include <vector>

#include "fcer/raster.hpp"

/// Brute-force reference implementations. Nothing here calls into the fast
/// code paths; every routine recomputes from definitions so that agreement
/// with the library is evidence rather than tautology. Inputs are size
/// limited and oversized instances throw ArgumentError.
namespace fcer::oracle {

inline constexpr std::size_t kMaxRankingSamples = 32 * 32;
inline constexpr Index kMaxRasterSide = 32;
inline constexpr std::size_t kMaxBoundaryPoints = 1000;
inline constexpr std::size_t kMaxWilcoxonPairs = 12;

/// Visits every distinct score as a threshold (descending), counting
/// positives at or above it directly. Returns sum (R_t - R_prev) * P_t.
double average_precision(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// (#pairs pos > neg + 0.5 #ties) / (P N) over all positive/negative pairs.
double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Minimum over all foreground pixels of the Euclidean distance.
Grid<double> distance_transform(const BinaryMask& mask);

/// Pixel set iff some foreground pixel lies within Euclidean distance radius.
BinaryMask dilate(const BinaryMask& mask, double radius_px);

/// Average surface distance in pixels, all-pairs over 4-connected boundaries.
double average_surface_distance_px(const BinaryMask& pred, const BinaryMask& gt);

struct WilcoxonOracle {
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_greater = 0.0;  // P(W+ >= observed) over all 2^n sign flips
  double p_less = 0.0;     // P(W+ <= observed)
};

/// Enumerates every sign assignment of the nonzero |differences|.
WilcoxonOracle wilcoxon(std::span<const double> diffs);

}  // namespace fcer::oracle
