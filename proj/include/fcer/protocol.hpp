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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcer/dataset.hpp"
#include "fcer/metrics.hpp"
#include "fcer/stats.hpp"

namespace fcer {

enum class Metric { kAp, kAsd, kBrier, kNll, kAuroc, kAuprc, kErrorPrevalence };
inline constexpr std::size_t kMetricCount = 7;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::kAp, Metric::kAsd, Metric::kBrier, Metric::kNll, Metric::kAuroc, Metric::kAuprc, Metric::kErrorPrevalence};

/// Column name used in CSV/JSON output ("ap", "asd_m", ...).
std::string_view metric_name(Metric metric);
std::optional<Metric> parse_metric(std::string_view name);

/// Marks a record computed over the whole crop rather than an FCER.
inline constexpr int kUnmaskedRadius = -1;

/// Metrics for one fire at one FCER radius. AP and ASD are computed over the
/// whole crop and repeated on every radius row of the fire.
struct MetricRecord {
  std::string fire_id;
  int year = 0;
  int radius_px = kUnmaskedRadius;
  std::array<std::optional<double>, kMetricCount> values{};
  Index n_eval_px = 0;

  std::optional<double>& operator[](Metric m) { return values[static_cast<std::size_t>(m)]; }
  const std::optional<double>& operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }
};

struct AnchorPolicy {
  enum class Kind { kFixed, kMeanAsd };
  Kind kind = Kind::kMeanAsd;
  int fixed_px = 0;

  static AnchorPolicy fixed(int px) { return {Kind::kFixed, px}; }
  static AnchorPolicy mean_asd() { return {Kind::kMeanAsd, 0}; }
};

std::vector<int> default_radii();

struct SweepConfig {
  std::vector<int> radii = default_radii();
  AnchorPolicy anchor = AnchorPolicy::mean_asd();
  double error_threshold = kDefaultErrorThreshold;
  double nll_epsilon = kDefaultNllEpsilon;

  void validate() const;
};

/// Probability and uncertainty produced by one model for one fire.
struct ModelOutput {
  ProbabilityMap prob;
  UncertaintyMap unc;
};

struct RadiusAggregate {
  int radius_px = 0;
  std::array<std::optional<double>, kMetricCount> mean{};
  std::array<Index, kMetricCount> count{};
};

struct SweepResult {
  std::vector<int> radii;  // evaluated radii, anchor included
  int anchor_radius_px = 0;
  std::vector<MetricRecord> records;  // fire-major, radius-minor
  std::vector<RadiusAggregate> aggregates;
  std::vector<std::string> skipped_fires;  // empty ground truth

  const RadiusAggregate& aggregate_at(int radius_px) const;
  std::vector<MetricRecord> records_at(int radius_px) const;
};

/// Evaluation region: ground truth dilated by a disk of radius_px.
/// Throws DegenerateError when the ground truth is empty.
BinaryMask build_fcer(const BinaryMask& gt, int radius_px);

/// mean_asd: round(mean(asd) / meters_per_pixel), at least 1 px.
int resolve_anchor(std::span<const double> asd_values_m, const GeoConfig& geo, const AnchorPolicy& policy);

/// Full FCER sweep for one model. `references` supplies the map whose
/// thresholded errors define the ranking targets (shared across models).
/// A mean_asd anchor averages the per-year mean ASDs.
SweepResult run_sweep(std::span<const FireEvent> events, std::span<const ModelOutput> outputs,
                      std::span<const ProbabilityMap> references, const SweepConfig& config,
                      const GeoConfig& geo, std::size_t jobs = 1);

struct PairedSweep {
  SweepResult a;
  SweepResult b;
};

/// Sweeps two models over the same fires with one anchor. Per-year mean ASD
/// pools the fires of both models before averaging across years.
PairedSweep run_paired_sweep(std::span<const FireEvent> events, std::span<const ModelOutput> outputs_a,
                             std::span<const ModelOutput> outputs_b, std::span<const ProbabilityMap> references,
                             const SweepConfig& config, const GeoConfig& geo, std::size_t jobs = 1);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population (divide by N)
};

MeanStd aggregate_mean_std(std::span<const double> values);

/// 100 * (value - baseline) / baseline.
double relative_to_baseline(double value, double baseline);
/// relative_to_baseline rounded to the nearest integer percent.
long rounded_percent(double value, double baseline);

/// Table layout: segmentation (AP, ASD in km) plus calibration and ranking at
/// the anchor radius.
inline constexpr std::array<Metric, 6> kTableMetrics = {Metric::kAp,  Metric::kAsd,   Metric::kBrier,
                                                        Metric::kNll, Metric::kAuroc, Metric::kAuprc};

struct YearRow {
  int year = 0;
  Index n_fires = 0;
  std::array<std::optional<double>, kTableMetrics.size()> values{};  // ASD reported in km
};

struct YearTable {
  int radius_px = 0;
  std::vector<YearRow> rows;
  std::array<std::optional<MeanStd>, kTableMetrics.size()> mean{};
};

/// Per-year means of fire records at `radius_px`, then mean/std across years.
YearTable year_table(const SweepResult& result, int radius_px);

struct PairedMetric {
  std::vector<PairedSample> pairs;
  Index n_missing = 0;  // fires missing the metric on either side
};

/// Matches records by (year, fire_id) at one radius.
PairedMetric pair_records(std::span<const MetricRecord> a, std::span<const MetricRecord> b, Metric metric,
                          int radius_px);

}  // namespace fcer
