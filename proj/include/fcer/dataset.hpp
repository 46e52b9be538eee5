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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fcer/raster.hpp"

namespace fcer {

/// One evaluation sample: a fire image with its ensemble member forecasts.
struct FireEvent {
  std::string id;
  int year = 0;
  BinaryMask gt;
  std::vector<ProbabilityMap> members;  // ordered by member index
  std::optional<UncertaintyMap> student_uncertainty;
  std::optional<FeatureStack> features;

  Index height() const { return gt.rows(); }
  Index width() const { return gt.cols(); }

  /// Checks shared shapes, value ranges and member count; throws ValidationError.
  void validate() const;
};

struct LoadOptions {
  /// Crop every raster to the central crop_size window before anything else.
  bool crop = true;
  Index crop_size = 128;
  bool load_features = true;
  bool load_student = true;
  /// Require at least this many member_<k>.npy files per fire.
  std::size_t min_members = 1;
};

/// Reads `<root>/<year>/<fire_id>/{gt,member_<k>,features,student_unc}.npy`.
/// Fires are returned sorted by (year, id).
std::vector<FireEvent> load_dataset(const std::filesystem::path& root, const LoadOptions& options);

/// Writes one fire into the same layout under `root`.
void save_event(const FireEvent& event, const std::filesystem::path& root);

std::filesystem::path event_dir(const std::filesystem::path& root, const FireEvent& event);

}  // namespace fcer
