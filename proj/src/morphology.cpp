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

#include "fcer/morphology.hpp"

#include <cmath>
#include <limits>

namespace fcer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform of a sampled function (lower envelope of
// parabolas rooted at the finite samples). `f` and `out` have length n.
void distance_1d(const double* f, double* out, Index n, std::vector<Index>& v, std::vector<double>& z) {
  v.resize(static_cast<std::size_t>(n));
  z.resize(static_cast<std::size_t>(n) + 1);
  Index k = -1;
  for (Index q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    auto intersect = [&](Index p) {
      return ((f[q] + static_cast<double>(q * q)) - (f[p] + static_cast<double>(p * p))) /
             static_cast<double>(2 * (q - p));
    };
    // z[0] is -inf, so the pop loop always stops at k == 0.
    double s = intersect(v[static_cast<std::size_t>(k)]);
    while (s <= z[static_cast<std::size_t>(k)]) {
      --k;
      s = intersect(v[static_cast<std::size_t>(k)]);
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = kInf;
  }
  if (k < 0) {
    for (Index q = 0; q < n; ++q) out[q] = kInf;
    return;
  }
  Index j = 0;
  for (Index q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(j) + 1] < static_cast<double>(q)) ++j;
    const Index p = v[static_cast<std::size_t>(j)];
    out[q] = static_cast<double>((q - p) * (q - p)) + f[p];
  }
}

}  // namespace

DiskElement DiskElement::make(double radius_px) {
  if (!(radius_px >= 0.0) || !std::isfinite(radius_px)) {
    throw ArgumentError("disk radius must be finite and >= 0");
  }
  DiskElement element;
  element.radius_px = radius_px;
  const double r2 = radius_px * radius_px;
  const int reach = static_cast<int>(std::floor(radius_px));
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (static_cast<double>(dy * dy + dx * dx) <= r2) element.offsets.push_back({dy, dx});
    }
  }
  return element;
}

Grid<double> squared_distance_transform(const BinaryMask& mask) {
  if (count(mask) == 0) throw DegenerateError("distance transform: mask has no foreground");
  const Index h = mask.rows();
  const Index w = mask.cols();
  Grid<double> dist(h, w);
  std::vector<Index> v;
  std::vector<double> z;

  // Columns: exact 1-D distance to the nearest foreground pixel in the column.
  std::vector<double> column(static_cast<std::size_t>(h));
  std::vector<double> column_out(static_cast<std::size_t>(h));
  for (Index x = 0; x < w; ++x) {
    for (Index y = 0; y < h; ++y) column[static_cast<std::size_t>(y)] = mask(y, x) ? 0.0 : kInf;
    distance_1d(column.data(), column_out.data(), h, v, z);
    for (Index y = 0; y < h; ++y) dist(y, x) = column_out[static_cast<std::size_t>(y)];
  }
  // Rows: combine the column distances.
  std::vector<double> row(static_cast<std::size_t>(w));
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) row[static_cast<std::size_t>(x)] = dist(y, x);
    distance_1d(row.data(), &dist(y, 0), w, v, z);
  }
  return dist;
}

Grid<double> euclidean_distance_transform(const BinaryMask& mask) {
  return squared_distance_transform(mask).sqrt();
}

BinaryMask dilate(const BinaryMask& mask, double radius_px) {
  if (!(radius_px >= 0.0)) throw ArgumentError("dilate: radius must be >= 0");
  if (count(mask) == 0) return BinaryMask::Zero(mask.rows(), mask.cols());
  const double r2 = radius_px * radius_px;
  return (squared_distance_transform(mask) <= r2).cast<std::uint8_t>();
}

BinaryMask dilate(const BinaryMask& mask, const DiskElement& element) {
  BinaryMask out = BinaryMask::Zero(mask.rows(), mask.cols());
  for (Index y = 0; y < mask.rows(); ++y) {
    for (Index x = 0; x < mask.cols(); ++x) {
      if (!mask(y, x)) continue;
      for (const auto& o : element.offsets) {
        const Index yy = y + o.dy;
        const Index xx = x + o.dx;
        if (yy >= 0 && yy < mask.rows() && xx >= 0 && xx < mask.cols()) out(yy, xx) = 1;
      }
    }
  }
  return out;
}

BinaryMask extract_boundary(const BinaryMask& mask) {
  const Index h = mask.rows();
  const Index w = mask.cols();
  BinaryMask out = BinaryMask::Zero(h, w);
  auto background = [&](Index y, Index x) {
    return y < 0 || y >= h || x < 0 || x >= w || mask(y, x) == 0;
  };
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      if (!mask(y, x)) continue;
      if (background(y - 1, x) || background(y + 1, x) || background(y, x - 1) || background(y, x + 1)) {
        out(y, x) = 1;
      }
    }
  }
  return out;
}

}  // namespace fcer
