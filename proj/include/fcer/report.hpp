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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fcer/distill.hpp"
#include "fcer/protocol.hpp"
#include "fcer/stats.hpp"

namespace fcer {

/// Shortest decimal form that round-trips to the same double.
std::string format_number(double value);

/// Header row of the per-fire sweep CSV.
inline constexpr std::string_view kSweepCsvHeader =
    "fire_id,year,radius_px,ap,asd_m,brier,nll,auroc,auprc,error_prevalence,n_eval_px";

/// One row per (fire, radius); missing metrics are empty fields.
std::string sweep_csv(std::span<const MetricRecord> records);
std::vector<MetricRecord> parse_sweep_csv(std::string_view text);
std::vector<MetricRecord> read_sweep_csv(const std::filesystem::path& path);

/// Per-(fire, radius) differences a - b, matched by (year, fire_id). Rows
/// present on only one side are dropped.
std::string paired_diff_csv(const SweepResult& a, const SweepResult& b);

nlohmann::ordered_json aggregates_json(const SweepResult& result);

struct NamedTable {
  std::string method;
  YearTable table;
};

nlohmann::ordered_json year_table_json(const YearTable& table);
/// Rows per (year, method), then "mean" and "std" rows per method.
std::string year_table_csv(std::span<const NamedTable> tables);
/// Human table: AP and ASD to 2 decimals, the rest to 3, Mean as mean±std.
std::string year_table_markdown(std::span<const NamedTable> tables);

nlohmann::ordered_json wilcoxon_json(std::string_view metric, const PairedMetric& paired,
                                     const WilcoxonResult& result);

/// epoch,lr,train_rmsle,val_rmsle,val_auroc_at_anchor
std::string train_log_csv(const TrainResult& result);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace fcer
