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

#include "fcer/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace fcer::oracle {

namespace {

void check_ranking(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw ArgumentError("oracle: scores and labels differ in length");
  if (scores.size() > kMaxRankingSamples) throw ArgumentError("oracle: ranking instance too large");
}

void check_raster(const BinaryMask& mask) {
  if (mask.rows() > kMaxRasterSide || mask.cols() > kMaxRasterSide) {
    throw ArgumentError("oracle: raster too large");
  }
}

struct Point {
  Index y;
  Index x;
};

std::vector<Point> boundary_points(const BinaryMask& mask) {
  std::vector<Point> pts;
  for (Index y = 0; y < mask.rows(); ++y) {
    for (Index x = 0; x < mask.cols(); ++x) {
      if (mask(y, x) != 1) continue;
      bool edge = false;
      const Index ny[4] = {y - 1, y + 1, y, y};
      const Index nx[4] = {x, x, x - 1, x + 1};
      for (int k = 0; k < 4; ++k) {
        const bool inside = ny[k] >= 0 && ny[k] < mask.rows() && nx[k] >= 0 && nx[k] < mask.cols();
        if (!inside || mask(ny[k], nx[k]) != 1) edge = true;
      }
      if (edge) pts.push_back({y, x});
    }
  }
  return pts;
}

double directed_mean(const std::vector<Point>& from, const std::vector<Point>& to) {
  double total = 0.0;
  for (const auto& a : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : to) {
      const double dy = static_cast<double>(a.y - b.y);
      const double dx = static_cast<double>(a.x - b.x);
      best = std::min(best, std::sqrt(dy * dy + dx * dx));
    }
    total += best;
  }
  return total / static_cast<double>(from.size());
}

}  // namespace

double average_precision(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_ranking(scores, labels);
  Index positives = 0;
  for (auto l : labels) positives += l ? 1 : 0;
  if (positives == 0 || positives == static_cast<Index>(labels.size())) {
    throw DegenerateError("oracle AP: need both classes");
  }
  const std::set<double, std::greater<>> thresholds(scores.begin(), scores.end());
  double ap = 0.0;
  double prev_recall = 0.0;
  for (const double t : thresholds) {
    Index tp = 0;
    Index called = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= t) {
        ++called;
        tp += labels[i] ? 1 : 0;
      }
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(positives);
    const double precision = static_cast<double>(tp) / static_cast<double>(called);
    if (recall != prev_recall) ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_ranking(scores, labels);
  std::int64_t twice_wins = 0;
  std::int64_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) {
        twice_wins += 2;
      } else if (scores[i] == scores[j]) {
        twice_wins += 1;
      }
    }
  }
  if (pairs == 0) throw DegenerateError("oracle AUROC: need both classes");
  return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(pairs));
}

Grid<double> distance_transform(const BinaryMask& mask) {
  check_raster(mask);
  Grid<double> out(mask.rows(), mask.cols());
  bool any = false;
  for (Index y = 0; y < mask.rows(); ++y) {
    for (Index x = 0; x < mask.cols(); ++x) {
      Index best = std::numeric_limits<Index>::max();
      for (Index v = 0; v < mask.rows(); ++v) {
        for (Index u = 0; u < mask.cols(); ++u) {
          if (!mask(v, u)) continue;
          any = true;
          best = std::min(best, (y - v) * (y - v) + (x - u) * (x - u));
        }
      }
      out(y, x) = std::sqrt(static_cast<double>(best));
    }
  }
  if (!any) throw DegenerateError("oracle EDT: no foreground");
  return out;
}

BinaryMask dilate(const BinaryMask& mask, double radius_px) {
  check_raster(mask);
  BinaryMask out = BinaryMask::Zero(mask.rows(), mask.cols());
  const double r2 = radius_px * radius_px;
  for (Index y = 0; y < mask.rows(); ++y) {
    for (Index x = 0; x < mask.cols(); ++x) {
      for (Index v = 0; v < mask.rows() && !out(y, x); ++v) {
        for (Index u = 0; u < mask.cols(); ++u) {
          if (mask(v, u) && static_cast<double>((y - v) * (y - v) + (x - u) * (x - u)) <= r2) {
            out(y, x) = 1;
            break;
          }
        }
      }
    }
  }
  return out;
}

double average_surface_distance_px(const BinaryMask& pred, const BinaryMask& gt) {
  const auto a = boundary_points(pred);
  const auto b = boundary_points(gt);
  if (a.empty() || b.empty()) throw DegenerateError("oracle ASD: empty boundary");
  if (a.size() > kMaxBoundaryPoints || b.size() > kMaxBoundaryPoints) {
    throw ArgumentError("oracle: boundary sets too large");
  }
  return 0.5 * (directed_mean(a, b) + directed_mean(b, a));
}

WilcoxonOracle wilcoxon(std::span<const double> diffs) {
  std::vector<double> d;
  for (const double v : diffs) {
    if (v != 0.0) d.push_back(v);
  }
  if (d.empty()) throw DegenerateError("oracle Wilcoxon: all differences zero");
  if (d.size() > kMaxWilcoxonPairs) throw ArgumentError("oracle: too many pairs for enumeration");
  const std::size_t n = d.size();
  // Average rank by counting: rank = 1 + #smaller + (#equal - 1) / 2.
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double smaller = 0.0;
    double equal = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) smaller += 1.0;
      if (std::abs(d[j]) == std::abs(d[i])) equal += 1.0;
    }
    rank[i] = 1.0 + smaller + (equal - 1.0) / 2.0;
  }
  WilcoxonOracle out;
  for (std::size_t i = 0; i < n; ++i) (d[i] > 0 ? out.w_plus : out.w_minus) += rank[i];

  std::uint64_t ge = 0;
  std::uint64_t le = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t signs = 0; signs < total; ++signs) {
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (signs & (std::uint64_t{1} << i)) w += rank[i];
    }
    if (w >= out.w_plus) ++ge;
    if (w <= out.w_plus) ++le;
  }
  out.p_greater = static_cast<double>(ge) / static_cast<double>(total);
  out.p_less = static_cast<double>(le) / static_cast<double>(total);
  return out;
}

}  // namespace fcer::oracle
