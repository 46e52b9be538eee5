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

#include "fcer/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "fcer/morphology.hpp"
#include "fcer/parallel.hpp"

namespace fcer {

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::kAp: return "ap";
    case Metric::kAsd: return "asd_m";
    case Metric::kBrier: return "brier";
    case Metric::kNll: return "nll";
    case Metric::kAuroc: return "auroc";
    case Metric::kAuprc: return "auprc";
    case Metric::kErrorPrevalence: return "error_prevalence";
  }
  return "";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (const Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<int> default_radii() {
  std::vector<int> r(17);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

void SweepConfig::validate() const {
  if (radii.empty()) throw ArgumentError("sweep: at least one radius is required");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 0) throw ArgumentError("sweep: radii must be >= 0");
    if (i > 0 && radii[i] <= radii[i - 1]) throw ArgumentError("sweep: radii must be strictly increasing");
  }
  if (anchor.kind == AnchorPolicy::Kind::kFixed && anchor.fixed_px < 0) {
    throw ArgumentError("sweep: fixed anchor radius must be >= 0");
  }
  if (!(error_threshold > 0.0 && error_threshold < 1.0)) throw ArgumentError("sweep: threshold must lie in (0, 1)");
  if (!(nll_epsilon > 0.0 && nll_epsilon < 0.5)) throw ArgumentError("sweep: epsilon must lie in (0, 0.5)");
}

const RadiusAggregate& SweepResult::aggregate_at(int radius_px) const {
  for (const auto& agg : aggregates) {
    if (agg.radius_px == radius_px) return agg;
  }
  throw ArgumentError("sweep result has no radius " + std::to_string(radius_px));
}

std::vector<MetricRecord> SweepResult::records_at(int radius_px) const {
  std::vector<MetricRecord> out;
  for (const auto& r : records) {
    if (r.radius_px == radius_px) out.push_back(r);
  }
  return out;
}

BinaryMask build_fcer(const BinaryMask& gt, int radius_px) {
  if (radius_px < 0) throw ArgumentError("build_fcer: radius must be >= 0");
  if (count(gt) == 0) throw DegenerateError("build_fcer: ground truth has no fire pixels");
  return dilate(gt, static_cast<double>(radius_px));
}

int resolve_anchor(std::span<const double> asd_values_m, const GeoConfig& geo, const AnchorPolicy& policy) {
  if (policy.kind == AnchorPolicy::Kind::kFixed) {
    if (policy.fixed_px < 0) throw ArgumentError("anchor: fixed radius must be >= 0");
    return policy.fixed_px;
  }
  geo.validate();
  if (asd_values_m.empty()) throw DegenerateError("anchor: no ASD values to average");
  const double mean = std::accumulate(asd_values_m.begin(), asd_values_m.end(), 0.0) /
                      static_cast<double>(asd_values_m.size());
  return std::max(1, static_cast<int>(std::lround(mean / geo.meters_per_pixel)));
}

namespace {

struct FireSegmentation {
  bool skipped = false;
  std::optional<double> ap;
  std::optional<double> asd_m;
  BinaryMask errors;
};

void check_inputs(std::span<const FireEvent> events, std::span<const ModelOutput> outputs,
                  std::span<const ProbabilityMap> references) {
  if (outputs.size() != events.size() || references.size() != events.size()) {
    throw ArgumentError("sweep: events, model outputs and references must have equal length");
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string& id = events[i].id;
    require_same_shape(events[i].gt, outputs[i].prob, (id + ": probability").c_str());
    require_same_shape(events[i].gt, outputs[i].unc, (id + ": uncertainty").c_str());
    require_same_shape(events[i].gt, references[i], (id + ": reference").c_str());
  }
}

std::vector<FireSegmentation> segment_all(std::span<const FireEvent> events, std::span<const ModelOutput> outputs,
                                          std::span<const ProbabilityMap> references, const SweepConfig& config,
                                          const GeoConfig& geo, std::size_t jobs) {
  std::vector<FireSegmentation> seg(events.size());
  parallel_for(events.size(), jobs, [&](std::size_t i) {
    const FireEvent& ev = events[i];
    FireSegmentation& s = seg[i];
    if (count(ev.gt) == 0) {
      s.skipped = true;
      return;
    }
    try {
      s.ap = average_precision(outputs[i].prob, ev.gt);
    } catch (const DegenerateError&) {
    }
    try {
      s.asd_m = average_surface_distance(threshold_mask(outputs[i].prob, config.error_threshold), ev.gt, geo);
    } catch (const DegenerateError&) {
    }
    s.errors = error_map(references[i], ev.gt, config.error_threshold);
  });
  return seg;
}

std::vector<MetricRecord> evaluate_fire(const FireEvent& ev, const ModelOutput& out, const FireSegmentation& seg,
                                        const std::vector<int>& radii, const SweepConfig& config) {
  std::vector<MetricRecord> records;
  const Grid<double> sq = squared_distance_transform(ev.gt);
  for (const int r : radii) {
    // Same set as build_fcer(ev.gt, r); the distance field is shared across radii.
    const BinaryMask region = (sq <= static_cast<double>(r) * static_cast<double>(r)).cast<std::uint8_t>();
    MetricRecord rec;
    rec.fire_id = ev.id;
    rec.year = ev.year;
    rec.radius_px = r;
    rec.n_eval_px = count(region);
    rec[Metric::kAp] = seg.ap;
    rec[Metric::kAsd] = seg.asd_m;
    rec[Metric::kBrier] = brier(out.prob, ev.gt, region);
    rec[Metric::kNll] = nll(out.prob, ev.gt, region, config.nll_epsilon);
    rec[Metric::kErrorPrevalence] = error_prevalence(seg.errors, region);
    try {
      rec[Metric::kAuroc] = uq_auroc(out.unc, seg.errors, region);
      rec[Metric::kAuprc] = uq_auprc(out.unc, seg.errors, region).auprc;
    } catch (const DegenerateError&) {
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<int> radii_with_anchor(std::vector<int> radii, int anchor) {
  if (std::find(radii.begin(), radii.end(), anchor) == radii.end()) {
    radii.push_back(anchor);
    std::sort(radii.begin(), radii.end());
  }
  return radii;
}

SweepResult evaluate_radii(std::span<const FireEvent> events, std::span<const ModelOutput> outputs,
                           const std::vector<FireSegmentation>& seg, const std::vector<int>& radii, int anchor,
                           const SweepConfig& config, std::size_t jobs) {
  std::vector<std::vector<MetricRecord>> per_fire(events.size());
  parallel_for(events.size(), jobs, [&](std::size_t i) {
    if (!seg[i].skipped) per_fire[i] = evaluate_fire(events[i], outputs[i], seg[i], radii, config);
  });

  SweepResult result;
  result.radii = radii;
  result.anchor_radius_px = anchor;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (seg[i].skipped) result.skipped_fires.push_back(events[i].id);
    for (auto& rec : per_fire[i]) result.records.push_back(std::move(rec));
  }
  // Sum in (year, id) order so aggregates do not depend on input order.
  std::vector<std::size_t> fire_order(result.records.size() / std::max<std::size_t>(radii.size(), 1));
  std::iota(fire_order.begin(), fire_order.end(), std::size_t{0});
  std::sort(fire_order.begin(), fire_order.end(), [&](std::size_t x, std::size_t y) {
    const MetricRecord& a = result.records[x * radii.size()];
    const MetricRecord& b = result.records[y * radii.size()];
    return std::tie(a.year, a.fire_id) < std::tie(b.year, b.fire_id);
  });
  for (std::size_t k = 0; k < radii.size(); ++k) {
    RadiusAggregate agg;
    agg.radius_px = radii[k];
    std::array<double, kMetricCount> sum{};
    for (const std::size_t f : fire_order) {
      const MetricRecord& rec = result.records[f * radii.size() + k];
      for (std::size_t m = 0; m < kMetricCount; ++m) {
        if (rec.values[m]) {
          sum[m] += *rec.values[m];
          ++agg.count[m];
        }
      }
    }
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      if (agg.count[m] > 0) agg.mean[m] = sum[m] / static_cast<double>(agg.count[m]);
    }
    result.aggregates.push_back(agg);
  }
  return result;
}

// Per-year mean ASD over every fire of every listed model.
std::vector<double> year_mean_asd(std::span<const FireEvent> events,
                                  std::initializer_list<const std::vector<FireSegmentation>*> models) {
  std::map<int, std::pair<double, Index>> by_year;
  for (const auto* seg : models) {
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (const auto& asd = (*seg)[i].asd_m) {
        auto& [sum, n] = by_year[events[i].year];
        sum += *asd;
        ++n;
      }
    }
  }
  std::vector<double> out;
  for (const auto& [year, acc] : by_year) out.push_back(acc.first / static_cast<double>(acc.second));
  return out;
}

}  // namespace

SweepResult run_sweep(std::span<const FireEvent> events, std::span<const ModelOutput> outputs,
                      std::span<const ProbabilityMap> references, const SweepConfig& config, const GeoConfig& geo,
                      std::size_t jobs) {
  config.validate();
  geo.validate();
  check_inputs(events, outputs, references);
  const auto seg = segment_all(events, outputs, references, config, geo, jobs);
  const int anchor = resolve_anchor(year_mean_asd(events, {&seg}), geo, config.anchor);
  return evaluate_radii(events, outputs, seg, radii_with_anchor(config.radii, anchor), anchor, config, jobs);
}

PairedSweep run_paired_sweep(std::span<const FireEvent> events, std::span<const ModelOutput> outputs_a,
                             std::span<const ModelOutput> outputs_b, std::span<const ProbabilityMap> references,
                             const SweepConfig& config, const GeoConfig& geo, std::size_t jobs) {
  config.validate();
  geo.validate();
  check_inputs(events, outputs_a, references);
  check_inputs(events, outputs_b, references);
  const auto seg_a = segment_all(events, outputs_a, references, config, geo, jobs);
  const auto seg_b = segment_all(events, outputs_b, references, config, geo, jobs);
  const int anchor = resolve_anchor(year_mean_asd(events, {&seg_a, &seg_b}), geo, config.anchor);
  const auto radii = radii_with_anchor(config.radii, anchor);
  return {evaluate_radii(events, outputs_a, seg_a, radii, anchor, config, jobs),
          evaluate_radii(events, outputs_b, seg_b, radii, anchor, config, jobs)};
}

MeanStd aggregate_mean_std(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("aggregate_mean_std: empty list");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

double relative_to_baseline(double value, double baseline) {
  if (!(baseline > 0.0)) throw ArgumentError("relative_to_baseline: baseline must be positive");
  return 100.0 * (value - baseline) / baseline;
}

long rounded_percent(double value, double baseline) { return std::lround(relative_to_baseline(value, baseline)); }

YearTable year_table(const SweepResult& result, int radius_px) {
  YearTable table;
  table.radius_px = radius_px;
  std::map<int, std::vector<const MetricRecord*>> by_year;
  for (const auto& rec : result.records) {
    if (rec.radius_px == radius_px) by_year[rec.year].push_back(&rec);
  }
  for (const auto& [year, recs] : by_year) {
    YearRow row;
    row.year = year;
    row.n_fires = static_cast<Index>(recs.size());
    for (std::size_t m = 0; m < kTableMetrics.size(); ++m) {
      double sum = 0.0;
      Index n = 0;
      for (const MetricRecord* rec : recs) {
        if (const auto& v = (*rec)[kTableMetrics[m]]) {
          sum += *v;
          ++n;
        }
      }
      if (n > 0) {
        double mean = sum / static_cast<double>(n);
        if (kTableMetrics[m] == Metric::kAsd) mean /= 1000.0;
        row.values[m] = mean;
      }
    }
    table.rows.push_back(row);
  }
  for (std::size_t m = 0; m < kTableMetrics.size(); ++m) {
    std::vector<double> per_year;
    for (const auto& row : table.rows) {
      if (row.values[m]) per_year.push_back(*row.values[m]);
    }
    if (!per_year.empty()) table.mean[m] = aggregate_mean_std(per_year);
  }
  return table;
}

PairedMetric pair_records(std::span<const MetricRecord> a, std::span<const MetricRecord> b, Metric metric,
                          int radius_px) {
  std::map<std::pair<int, std::string>, const MetricRecord*> index_b;
  for (const auto& rec : b) {
    if (rec.radius_px == radius_px) index_b[{rec.year, rec.fire_id}] = &rec;
  }
  PairedMetric out;
  for (const auto& rec : a) {
    if (rec.radius_px != radius_px) continue;
    const auto it = index_b.find({rec.year, rec.fire_id});
    if (it == index_b.end() || !rec[metric] || !(*it->second)[metric]) {
      ++out.n_missing;
      continue;
    }
    out.pairs.push_back({rec.fire_id, *rec[metric], *(*it->second)[metric]});
  }
  return out;
}

}  // namespace fcer
