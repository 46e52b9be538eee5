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

#include "fcer/metrics.hpp"

#include <algorithm>

#include "fcer/morphology.hpp"

namespace fcer {

std::vector<RankingCurvePoint> ranking_curve(std::vector<ScoredSample> samples) {
  std::sort(samples.begin(), samples.end(),
            [](const ScoredSample& a, const ScoredSample& b) { return a.score > b.score; });
  Index positives = 0;
  for (const auto& s : samples) positives += s.positive ? 1 : 0;
  const Index negatives = static_cast<Index>(samples.size()) - positives;

  std::vector<RankingCurvePoint> curve;
  Index tp = 0;
  Index fp = 0;
  std::size_t i = 0;
  while (i < samples.size()) {
    const double threshold = samples[i].score;
    while (i < samples.size() && samples[i].score == threshold) {
      (samples[i].positive ? tp : fp) += 1;
      ++i;
    }
    curve.push_back({threshold, tp, fp, negatives - fp, positives - tp});
  }
  return curve;
}

namespace {

void require_both_classes(const std::vector<RankingCurvePoint>& curve, const char* what) {
  if (curve.empty()) throw DegenerateError(std::string(what) + ": empty evaluation region");
  const auto& last = curve.back();
  if (last.tp + last.fn == 0) throw DegenerateError(std::string(what) + ": no positive samples in region");
  if (last.fp + last.tn == 0) throw DegenerateError(std::string(what) + ": no negative samples in region");
}

}  // namespace

double step_average_precision(const std::vector<RankingCurvePoint>& curve) {
  require_both_classes(curve, "average precision");
  const double positives = static_cast<double>(curve.back().tp + curve.back().fn);
  double ap = 0.0;
  Index prev_tp = 0;
  for (const auto& pt : curve) {
    if (pt.tp != prev_tp) {
      const double recall_step = static_cast<double>(pt.tp - prev_tp) / positives;
      const double precision = static_cast<double>(pt.tp) / static_cast<double>(pt.tp + pt.fp);
      ap += recall_step * precision;
    }
    prev_tp = pt.tp;
  }
  return ap;
}

double trapezoid_auroc(const std::vector<RankingCurvePoint>& curve) {
  require_both_classes(curve, "AUROC");
  const Index positives = curve.back().tp + curve.back().fn;
  const Index negatives = curve.back().fp + curve.back().tn;
  // Twice the area in units of (1/P)(1/N); integer until the final division.
  Index doubled = 0;
  Index prev_tp = 0;
  Index prev_fp = 0;
  for (const auto& pt : curve) {
    doubled += (pt.fp - prev_fp) * (pt.tp + prev_tp);
    prev_tp = pt.tp;
    prev_fp = pt.fp;
  }
  return static_cast<double>(doubled) / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

PrecisionRecall precision_recall(const BinaryMask& pred, const BinaryMask& gt, const BinaryMask& region) {
  require_same_shape(pred, gt, "precision_recall");
  require_same_shape(gt, region, "precision_recall region");
  const auto in = region.cast<bool>();
  const auto p = pred.cast<bool>();
  const auto g = gt.cast<bool>();
  const Index tp = (in && p && g).count();
  const Index fp = (in && p && !g).count();
  const Index fn = (in && !p && g).count();
  PrecisionRecall out;
  if (tp + fp > 0) out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return out;
}

namespace {

double mean_distance_to(const BinaryMask& from, const Grid<double>& distance_to_target) {
  double sum = 0.0;
  Index n = 0;
  for (Index y = 0; y < from.rows(); ++y) {
    for (Index x = 0; x < from.cols(); ++x) {
      if (!from(y, x)) continue;
      sum += distance_to_target(y, x);
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

}  // namespace

double average_surface_distance_px(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_shape(pred, gt, "average_surface_distance");
  if (count(pred) == 0) throw DegenerateError("ASD undefined: predicted mask is empty");
  if (count(gt) == 0) throw DegenerateError("ASD undefined: ground-truth mask is empty");
  const BinaryMask pred_boundary = extract_boundary(pred);
  const BinaryMask gt_boundary = extract_boundary(gt);
  const double pred_to_gt = mean_distance_to(pred_boundary, euclidean_distance_transform(gt_boundary));
  const double gt_to_pred = mean_distance_to(gt_boundary, euclidean_distance_transform(pred_boundary));
  return 0.5 * (pred_to_gt + gt_to_pred);
}

double average_surface_distance(const BinaryMask& pred, const BinaryMask& gt, const GeoConfig& geo) {
  return average_surface_distance_px(pred, gt) * geo.meters_per_pixel;
}

double error_prevalence(const BinaryMask& errors, const BinaryMask& region) {
  require_same_shape(errors, region, "error_prevalence");
  const Index n = count(region);
  if (n == 0) throw DegenerateError("error prevalence: empty evaluation region");
  const Index e = (errors.cast<bool>() && region.cast<bool>()).count();
  return static_cast<double>(e) / static_cast<double>(n);
}

}  // namespace fcer
