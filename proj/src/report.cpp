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

#include "fcer/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace fcer {

namespace {

void append_optional(std::string& out, const std::optional<double>& v) {
  out += ',';
  if (v) out += format_number(*v);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line, std::string_view column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError("sweep csv line " + std::to_string(line) + ": bad " + std::string(column) + " '" +
                     std::string(field) + "'");
  }
  return value;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

int table_decimals(Metric m) { return m == Metric::kAp || m == Metric::kAsd ? 2 : 3; }

std::string table_column(Metric m) { return m == Metric::kAsd ? "asd_km" : std::string(metric_name(m)); }

}  // namespace

std::string format_number(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw ArgumentError("format_number: conversion failed");
  return std::string(buf, ptr);
}

std::string sweep_csv(std::span<const MetricRecord> records) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& rec : records) {
    if (rec.fire_id.find_first_of(",\n\r\"") != std::string::npos) {
      throw ValidationError("fire id '" + rec.fire_id + "' cannot be written to CSV");
    }
    out += rec.fire_id;
    out += ',' + std::to_string(rec.year) + ',' + std::to_string(rec.radius_px);
    for (const Metric m : kAllMetrics) append_optional(out, rec[m]);
    out += ',' + std::to_string(rec.n_eval_px) + '\n';
  }
  return out;
}

std::vector<MetricRecord> parse_sweep_csv(std::string_view text) {
  std::vector<MetricRecord> out;
  std::size_t line_no = 0;
  bool header = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      if (line != kSweepCsvHeader) throw ParseError("sweep csv: unexpected header '" + std::string(line) + "'");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 4 + kMetricCount) {
      throw ParseError("sweep csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(4 + kMetricCount) + " fields");
    }
    MetricRecord rec;
    rec.fire_id = std::string(f[0]);
    rec.year = parse_field<int>(f[1], line_no, "year");
    rec.radius_px = parse_field<int>(f[2], line_no, "radius_px");
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      if (!f[3 + m].empty()) rec.values[m] = parse_field<double>(f[3 + m], line_no, metric_name(kAllMetrics[m]));
    }
    rec.n_eval_px = parse_field<Index>(f[3 + kMetricCount], line_no, "n_eval_px");
    out.push_back(std::move(rec));
  }
  if (header) throw ParseError("sweep csv: empty file");
  return out;
}

std::vector<MetricRecord> read_sweep_csv(const std::filesystem::path& path) {
  try {
    return parse_sweep_csv(read_text(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string paired_diff_csv(const SweepResult& a, const SweepResult& b) {
  std::map<std::tuple<int, std::string, int>, const MetricRecord*> index_b;
  for (const auto& rec : b.records) index_b[{rec.year, rec.fire_id, rec.radius_px}] = &rec;
  std::string out = "fire_id,year,radius_px";
  for (const Metric m : kAllMetrics) out += ",d_" + std::string(metric_name(m));
  out += '\n';
  for (const auto& ra : a.records) {
    const auto it = index_b.find({ra.year, ra.fire_id, ra.radius_px});
    if (it == index_b.end()) continue;
    const MetricRecord& rb = *it->second;
    out += ra.fire_id + ',' + std::to_string(ra.year) + ',' + std::to_string(ra.radius_px);
    for (const Metric m : kAllMetrics) {
      append_optional(out, ra[m] && rb[m] ? std::optional<double>(*ra[m] - *rb[m]) : std::nullopt);
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json aggregates_json(const SweepResult& result) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& agg : result.aggregates) {
    nlohmann::ordered_json row;
    row["radius_px"] = agg.radius_px;
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      const std::string name(metric_name(kAllMetrics[m]));
      row[name] = agg.mean[m] ? nlohmann::ordered_json(*agg.mean[m]) : nlohmann::ordered_json(nullptr);
      row["n_" + name] = agg.count[m];
    }
    rows.push_back(row);
  }
  return rows;
}

nlohmann::ordered_json year_table_json(const YearTable& table) {
  nlohmann::ordered_json j;
  j["radius_px"] = table.radius_px;
  auto years = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json y;
    y["year"] = row.year;
    y["n_fires"] = row.n_fires;
    for (std::size_t m = 0; m < kTableMetrics.size(); ++m) {
      y[table_column(kTableMetrics[m])] =
          row.values[m] ? nlohmann::ordered_json(*row.values[m]) : nlohmann::ordered_json(nullptr);
    }
    years.push_back(y);
  }
  j["years"] = years;
  nlohmann::ordered_json mean;
  for (std::size_t m = 0; m < kTableMetrics.size(); ++m) {
    const auto& ms = table.mean[m];
    mean[table_column(kTableMetrics[m])] =
        ms ? nlohmann::ordered_json{{"mean", ms->mean}, {"std", ms->std}} : nlohmann::ordered_json(nullptr);
  }
  j["mean"] = mean;
  return j;
}

std::string year_table_csv(std::span<const NamedTable> tables) {
  std::string out = "year,method,n_fires";
  for (const Metric m : kTableMetrics) out += ',' + table_column(m);
  out += '\n';
  for (const auto& nt : tables) {
    for (const auto& row : nt.table.rows) {
      out += std::to_string(row.year) + ',' + nt.method + ',' + std::to_string(row.n_fires);
      for (const auto& v : row.values) append_optional(out, v);
      out += '\n';
    }
  }
  for (const char* stat : {"mean", "std"}) {
    for (const auto& nt : tables) {
      out += std::string(stat) + ',' + nt.method + ',' + std::to_string(nt.table.rows.size());
      for (const auto& ms : nt.table.mean) {
        append_optional(out, ms ? std::optional<double>(stat[0] == 'm' ? ms->mean : ms->std) : std::nullopt);
      }
      out += '\n';
    }
  }
  return out;
}

std::string year_table_markdown(std::span<const NamedTable> tables) {
  std::ostringstream md;
  md << "| Year | Method | AP | ASD [km] | Brier | NLL | AUROC | AUPRC |\n";
  md << "|---|---|---|---|---|---|---|---|\n";
  std::map<int, std::vector<std::pair<const NamedTable*, const YearRow*>>> by_year;
  for (const auto& nt : tables) {
    for (const auto& row : nt.table.rows) by_year[row.year].push_back({&nt, &row});
  }
  for (const auto& [year, entries] : by_year) {
    for (const auto& [nt, row] : entries) {
      md << "| " << year << " | " << nt->method;
      for (std::size_t m = 0; m < kTableMetrics.size(); ++m) {
        md << " | " << (row->values[m] ? fixed(*row->values[m], table_decimals(kTableMetrics[m])) : "-");
      }
      md << " |\n";
    }
  }
  for (const auto& nt : tables) {
    md << "| Mean | " << nt.method;
    for (std::size_t m = 0; m < kTableMetrics.size(); ++m) {
      const auto& ms = nt.table.mean[m];
      const int d = table_decimals(kTableMetrics[m]);
      md << " | " << (ms ? fixed(ms->mean, d) + "±" + fixed(ms->std, d) : "-");
    }
    md << " |\n";
  }
  return md.str();
}

nlohmann::ordered_json wilcoxon_json(std::string_view metric, const PairedMetric& paired,
                                     const WilcoxonResult& result) {
  nlohmann::ordered_json j;
  j["metric"] = metric;
  j["n_pairs"] = result.n_pairs;
  j["n_missing"] = paired.n_missing;
  j["n_discarded"] = result.n_discarded;
  j["w_plus"] = result.w_plus;
  j["w_minus"] = result.w_minus;
  j["p_value"] = result.p_value;
  j["rank_biserial"] = rank_biserial(result.w_plus, result.w_minus);
  j["mode"] = to_string(result.mode);
  return j;
}

std::string train_log_csv(const TrainResult& result) {
  std::string out = "epoch,lr,train_rmsle,val_rmsle,val_auroc_at_anchor\n";
  for (const auto& e : result.log) {
    out += std::to_string(e.epoch) + ',' + format_number(e.lr) + ',' + format_number(e.train_rmsle) + ',' +
           format_number(e.val_rmsle);
    append_optional(out, e.val_auroc_at_anchor);
    out += '\n';
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ValidationError("failed writing " + path.string());
}

}  // namespace fcer
