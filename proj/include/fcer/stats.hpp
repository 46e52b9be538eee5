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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcer/raster.hpp"

namespace fcer {

/// Per-fire paired scores; value_a is the challenger (student), value_b the
/// baseline (ensemble).
struct PairedSample {
  std::string fire_id;
  double value_a = 0.0;
  double value_b = 0.0;

  double diff() const { return value_a - value_b; }
};

/// H1 direction: kGreater tests value_a > value_b.
enum class Alternative { kGreater, kLess };

enum class WilcoxonMode { kAuto, kExact, kNormal };

std::string_view to_string(Alternative alternative);
std::string_view to_string(WilcoxonMode mode);

struct WilcoxonResult {
  Index n_pairs = 0;       // pairs supplied
  Index n_discarded = 0;   // zero differences dropped
  Index n_effective = 0;   // ranked differences
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_value = 1.0;
  WilcoxonMode mode = WilcoxonMode::kExact;  // kExact or kNormal, never kAuto
};

/// Largest n_effective handled by exact enumeration in kAuto mode.
inline constexpr Index kWilcoxonExactCutoff = 25;

/// One-sided Wilcoxon signed-rank test on paired differences. Zero
/// differences are discarded; tied |d| receive average ranks. Exact mode
/// counts sign assignments with a dynamic program over doubled rank sums;
/// normal mode uses the tie-corrected variance with a 0.5 continuity
/// correction. Throws DegenerateError if every difference is zero.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs, Alternative alternative = Alternative::kGreater,
                                    WilcoxonMode mode = WilcoxonMode::kAuto);

WilcoxonResult wilcoxon_one_sided(std::span<const PairedSample> pairs, Alternative alternative = Alternative::kGreater,
                                  WilcoxonMode mode = WilcoxonMode::kAuto);

/// (W+ - W-) / (W+ + W-).
double rank_biserial(double w_plus, double w_minus);

}  // namespace fcer
