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

#include <cmath>
#include <optional>
#include <vector>

#include "fcer/raster.hpp"

namespace fcer {

inline constexpr double kDefaultNllEpsilon = 1e-7;
inline constexpr double kDefaultErrorThreshold = 0.5;

/// Confusion counts when every sample with score >= threshold is called positive.
struct RankingCurvePoint {
  double threshold = 0.0;
  Index tp = 0;
  Index fp = 0;
  Index tn = 0;
  Index fn = 0;
};

struct ScoredSample {
  double score;
  bool positive;
};

/// One curve point per distinct score, in descending threshold order.
std::vector<RankingCurvePoint> ranking_curve(std::vector<ScoredSample> samples);

/// Step-wise sum of (R_n - R_{n-1}) * P_n, no interpolation.
/// Throws DegenerateError unless both classes are present.
double step_average_precision(const std::vector<RankingCurvePoint>& curve);

/// Trapezoidal ROC area; ties get half credit. Throws DegenerateError unless
/// both classes are present.
double trapezoid_auroc(const std::vector<RankingCurvePoint>& curve);

/// Collects (score, label) for every pixel where region is set.
template <typename Derived>
std::vector<ScoredSample> gather_samples(const Eigen::DenseBase<Derived>& scores,
                                         const BinaryMask& labels, const BinaryMask& region) {
  require_same_shape(scores, labels, "scores/labels");
  require_same_shape(labels, region, "labels/region");
  std::vector<ScoredSample> out;
  out.reserve(static_cast<std::size_t>(count(region)));
  for (Index y = 0; y < labels.rows(); ++y) {
    for (Index x = 0; x < labels.cols(); ++x) {
      if (region(y, x)) out.push_back({static_cast<double>(scores(y, x)), labels(y, x) != 0});
    }
  }
  return out;
}

inline BinaryMask full_region(Index rows, Index cols) { return BinaryMask::Ones(rows, cols); }

// ---------------------------------------------------------------------------
// Segmentation

struct PrecisionRecall {
  std::optional<double> precision;  // missing when TP + FP == 0
  std::optional<double> recall;     // missing when TP + FN == 0
};

PrecisionRecall precision_recall(const BinaryMask& pred, const BinaryMask& gt, const BinaryMask& region);
inline PrecisionRecall precision_recall(const BinaryMask& pred, const BinaryMask& gt) {
  return precision_recall(pred, gt, full_region(gt.rows(), gt.cols()));
}

/// Predicted-positive mask: score >= threshold.
template <typename Derived>
BinaryMask threshold_mask(const Eigen::ArrayBase<Derived>& scores, double threshold) {
  return (scores.template cast<double>() >= threshold).template cast<std::uint8_t>();
}

template <typename Derived>
double average_precision(const Eigen::DenseBase<Derived>& prob, const BinaryMask& gt,
                         const BinaryMask& region) {
  return step_average_precision(ranking_curve(gather_samples(prob, gt, region)));
}

template <typename Derived>
double average_precision(const Eigen::DenseBase<Derived>& prob, const BinaryMask& gt) {
  return average_precision(prob, gt, full_region(gt.rows(), gt.cols()));
}

/// Symmetric mean boundary-to-boundary distance in pixels (4-connected
/// boundaries). Throws DegenerateError if either mask is empty.
double average_surface_distance_px(const BinaryMask& pred, const BinaryMask& gt);

/// Average surface distance converted to meters.
double average_surface_distance(const BinaryMask& pred, const BinaryMask& gt, const GeoConfig& geo);

// ---------------------------------------------------------------------------
// Calibration

template <typename Derived>
double brier(const Eigen::ArrayBase<Derived>& prob, const BinaryMask& gt, const BinaryMask& region) {
  require_same_shape(prob, gt, "brier");
  require_same_shape(gt, region, "brier region");
  const Index n = count(region);
  if (n == 0) throw DegenerateError("brier: empty evaluation region");
  const auto sq = (prob.template cast<double>() - gt.template cast<double>()).square();
  return (sq * region.template cast<double>()).sum() / static_cast<double>(n);
}

template <typename Derived>
double nll(const Eigen::ArrayBase<Derived>& prob, const BinaryMask& gt, const BinaryMask& region,
           double epsilon = kDefaultNllEpsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ArgumentError("nll: epsilon must lie in (0, 0.5)");
  require_same_shape(prob, gt, "nll");
  require_same_shape(gt, region, "nll region");
  const Index n = count(region);
  if (n == 0) throw DegenerateError("nll: empty evaluation region");
  const auto p = prob.template cast<double>().max(epsilon).min(1.0 - epsilon);
  const auto y = gt.template cast<double>();
  const auto loss = -(y * p.log() + (1.0 - y) * (1.0 - p).log());
  return (loss * region.template cast<double>()).sum() / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Uncertainty ranking

/// e_i = 1 iff (reference_i >= threshold) != gt_i.
template <typename Derived>
BinaryMask error_map(const Eigen::ArrayBase<Derived>& reference, const BinaryMask& gt,
                     double threshold = kDefaultErrorThreshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ArgumentError("error_map: threshold must lie in (0, 1)");
  require_same_shape(reference, gt, "error_map");
  return (threshold_mask(reference, threshold) != gt).template cast<std::uint8_t>();
}

template <typename Derived>
double uq_auroc(const Eigen::DenseBase<Derived>& unc, const BinaryMask& errors, const BinaryMask& region) {
  return trapezoid_auroc(ranking_curve(gather_samples(unc, errors, region)));
}

struct AuprcResult {
  double auprc = 0.0;
  double prevalence = 0.0;  // random-ranking baseline
};

template <typename Derived>
AuprcResult uq_auprc(const Eigen::DenseBase<Derived>& unc, const BinaryMask& errors, const BinaryMask& region) {
  const auto curve = ranking_curve(gather_samples(unc, errors, region));
  AuprcResult out;
  out.auprc = step_average_precision(curve);
  const auto& last = curve.back();
  out.prevalence = static_cast<double>(last.tp + last.fn) /
                   static_cast<double>(last.tp + last.fp + last.tn + last.fn);
  return out;
}

/// Fraction of region pixels flagged in `errors`. Throws on empty region.
double error_prevalence(const BinaryMask& errors, const BinaryMask& region);

}  // namespace fcer
