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

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fcer/dataset.hpp"
#include "fcer/distill.hpp"
#include "fcer/error.hpp"
#include "fcer/manifest.hpp"
#include "fcer/npy.hpp"
#include "fcer/parallel.hpp"
#include "fcer/protocol.hpp"
#include "fcer/report.hpp"
#include "fcer/stats.hpp"
#include "fcer/synth.hpp"
#include "model_spec.hpp"

#ifndef FCER_VERSION
#define FCER_VERSION "unknown"
#endif

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace fcer;

struct Shared {
  std::size_t jobs = 0;
  bool force = false;
  Index crop = 128;
  double mpp = 375.0;
  std::string radii = "0-16";
  std::string anchor = "auto";
  double epsilon = kDefaultNllEpsilon;
  double threshold = kDefaultErrorThreshold;
};

std::size_t worker_count(std::size_t jobs) {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

int parse_int(std::string_view text, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ArgumentError(std::string(what) + ": not an integer '" + std::string(text) + "'");
  }
  return v;
}

// "0-16", "0,2,4" or a mix such as "0,2,4-8".
std::vector<int> parse_radii(std::string_view text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(start, end - start);
    const std::size_t dash = item.find('-', 1);
    if (dash == std::string_view::npos) {
      out.push_back(parse_int(item, "--radii"));
    } else {
      const int lo = parse_int(item.substr(0, dash), "--radii");
      const int hi = parse_int(item.substr(dash + 1), "--radii");
      if (hi < lo) throw ArgumentError("--radii: empty range '" + std::string(item) + "'");
      for (int r = lo; r <= hi; ++r) out.push_back(r);
    }
    start = end + 1;
  }
  return out;
}

AnchorPolicy parse_anchor(std::string_view text) {
  if (text == "auto") return AnchorPolicy::mean_asd();
  return AnchorPolicy::fixed(parse_int(text, "--anchor"));
}

LoadOptions load_options(const Shared& s) {
  LoadOptions opts;
  opts.crop = s.crop > 0;
  opts.crop_size = s.crop > 0 ? s.crop : 1;
  opts.load_features = false;
  opts.load_student = false;
  return opts;
}

GeoConfig geo_config(const Shared& s) {
  GeoConfig geo;
  geo.meters_per_pixel = s.mpp;
  if (s.crop > 0) geo.crop_size = s.crop;
  geo.validate();
  return geo;
}

SweepConfig sweep_config(const Shared& s) {
  SweepConfig cfg;
  cfg.radii = parse_radii(s.radii);
  cfg.anchor = parse_anchor(s.anchor);
  cfg.nll_epsilon = s.epsilon;
  cfg.error_threshold = s.threshold;
  cfg.validate();
  return cfg;
}

json shared_json(const Shared& s) {
  return {{"crop", s.crop},       {"meters_per_pixel", s.mpp}, {"radii", s.radii},
          {"anchor", s.anchor},   {"epsilon", s.epsilon},      {"threshold", s.threshold}};
}

void finish(const fs::path& out, std::string command, json config, std::vector<InputSet> inputs) {
  RunManifest m;
  m.command = std::move(command);
  m.config = std::move(config);
  m.inputs = std::move(inputs);
  m.tool_version = FCER_VERSION;
  m.timestamp = utc_timestamp();
  write_manifest(out, m);
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::vector<FireEvent> load_events(const fs::path& root, const LoadOptions& opts) {
  std::vector<FireEvent> events = load_dataset(root, opts);
  if (events.empty()) throw ValidationError(root.string() + ": no fires found");
  return events;
}

// Mean over years of the per-year mean error prevalence at `radius`.
std::optional<double> prevalence_baseline(const SweepResult& sweep, int radius) {
  std::map<int, std::pair<double, int>> by_year;
  for (const auto& rec : sweep.records_at(radius)) {
    if (const auto& v = rec[Metric::kErrorPrevalence]) {
      auto& [sum, n] = by_year[rec.year];
      sum += *v;
      ++n;
    }
  }
  if (by_year.empty()) return std::nullopt;
  double total = 0.0;
  for (const auto& [year, acc] : by_year) total += acc.first / acc.second;
  return total / static_cast<double>(by_year.size());
}

std::string method_label(const cli::ModelSpec& spec) {
  return spec.kind == cli::ModelSpec::Kind::kEnsemble ? "Ensemble" : "Student";
}

json sweep_header(const SweepResult& sweep, const GeoConfig& geo) {
  json j;
  j["anchor_radius_px"] = sweep.anchor_radius_px;
  j["anchor_m"] = sweep.anchor_radius_px * geo.meters_per_pixel;
  j["radii"] = sweep.radii;
  j["skipped_fires"] = sweep.skipped_fires;
  return j;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  fs::path out;
  ScenarioSpec spec;
  std::vector<int> blob_count{1, 4};
  std::vector<double> blob_radius{3.0, 12.0};
};

void cmd_synth(SynthArgs& a, const Shared& s) {
  a.spec.blob_count_range = {a.blob_count.at(0), a.blob_count.at(1)};
  a.spec.blob_radius_range_px = {a.blob_radius.at(0), a.blob_radius.at(1)};
  a.spec.validate();
  prepare_output_dir(a.out, s.force);
  const std::size_t jobs = worker_count(s.jobs);
  const std::vector<FireEvent> events = generate_scenario(a.spec, jobs);
  parallel_for(events.size(), jobs, [&](std::size_t i) { save_event(events[i], a.out); });
  finish(a.out, "synth", {{"scenario", to_json(a.spec)}}, {});
  std::printf("wrote %zu fires to %s\n", events.size(), a.out.string().c_str());
}

void cmd_validate(const fs::path& root, const Shared& s) {
  LoadOptions opts = load_options(s);
  opts.load_features = true;
  opts.load_student = true;
  const std::vector<FireEvent> events = load_events(root, opts);
  std::set<int> years;
  std::size_t with_features = 0, with_student = 0, empty_gt = 0;
  for (const auto& ev : events) {
    ev.validate();
    years.insert(ev.year);
    with_features += ev.features.has_value();
    with_student += ev.student_uncertainty.has_value();
    empty_gt += !ev.gt.any();
  }
  std::printf("fires: %zu\nyears:", events.size());
  for (const int y : years) std::printf(" %d", y);
  std::printf("\nshape: %ldx%ld\nmembers: %zu\nwith features: %zu\nwith student maps: %zu\nempty ground truth: %zu\n",
              static_cast<long>(events.front().height()), static_cast<long>(events.front().width()),
              events.front().members.size(), with_features, with_student, empty_gt);
}

void cmd_eval(const fs::path& root, const std::vector<std::string>& specs, const fs::path& out, const Shared& s) {
  if (specs.empty() || specs.size() > 2) throw ArgumentError("eval takes one or two --model specs");
  std::vector<cli::ModelSpec> models;
  for (const auto& text : specs) models.push_back(cli::parse_model_spec(text));
  const SweepConfig cfg = sweep_config(s);
  const GeoConfig geo = geo_config(s);
  const LoadOptions opts = load_options(s);
  const std::size_t jobs = worker_count(s.jobs);
  prepare_output_dir(out, s.force);

  const std::vector<FireEvent> events = load_events(root, opts);
  std::vector<InputSet> inputs{digest_inputs("dataset", root, ".npy")};
  const auto references = cli::middle_member_maps(events);
  std::vector<std::vector<ModelOutput>> outputs;
  for (const auto& m : models) outputs.push_back(cli::resolve_model(m, events, references, opts, jobs, inputs));

  std::vector<SweepResult> sweeps;
  if (models.size() == 1) {
    sweeps.push_back(run_sweep(events, outputs[0], references, cfg, geo, jobs));
  } else {
    PairedSweep p = run_paired_sweep(events, outputs[0], outputs[1], references, cfg, geo, jobs);
    sweeps.push_back(std::move(p.a));
    sweeps.push_back(std::move(p.b));
  }
  const int anchor = sweeps[0].anchor_radius_px;

  std::vector<NamedTable> tables;
  json summary = sweep_header(sweeps[0], geo);
  json model_json = json::array();
  for (std::size_t k = 0; k < models.size(); ++k) {
    std::string label = method_label(models[k]);
    if (k == 1 && label == tables[0].method) label += " (2)";
    tables.push_back({label, year_table(sweeps[k], anchor)});
    const YearTable& t = tables.back().table;
    const auto auroc = t.mean[4];
    const auto auprc = t.mean[5];
    const auto prevalence = prevalence_baseline(sweeps[k], anchor);
    json j;
    j["method"] = label;
    j["spec"] = models[k].text;
    j["year_table"] = year_table_json(t);
    j["baselines"] = {{"auroc", 0.5}, {"auprc", prevalence ? json(*prevalence) : json(nullptr)}};
    json rel;
    rel["auroc"] = auroc ? json(relative_to_baseline(auroc->mean, 0.5)) : json(nullptr);
    rel["auprc"] = auprc && prevalence && *prevalence > 0.0 ? json(relative_to_baseline(auprc->mean, *prevalence))
                                                             : json(nullptr);
    j["relative_percent"] = rel;
    model_json.push_back(j);
  }
  summary["models"] = model_json;

  write_text(out / "table.csv", year_table_csv(tables));
  write_text(out / "table.md", year_table_markdown(tables));
  write_json(out / "summary.json", summary);
  json config = shared_json(s);
  config["models"] = specs;
  finish(out, "eval", config, std::move(inputs));
  std::printf("anchor %d px; wrote %s\n", anchor, out.string().c_str());
}

void cmd_sweep(const fs::path& root, const std::string& spec_a, const std::string& spec_b, const fs::path& out,
               const Shared& s) {
  const cli::ModelSpec a = cli::parse_model_spec(spec_a);
  const cli::ModelSpec b = cli::parse_model_spec(spec_b);
  const SweepConfig cfg = sweep_config(s);
  const GeoConfig geo = geo_config(s);
  const LoadOptions opts = load_options(s);
  const std::size_t jobs = worker_count(s.jobs);
  prepare_output_dir(out, s.force);

  const std::vector<FireEvent> events = load_events(root, opts);
  std::vector<InputSet> inputs{digest_inputs("dataset", root, ".npy")};
  const auto references = cli::middle_member_maps(events);
  const auto out_a = cli::resolve_model(a, events, references, opts, jobs, inputs);
  const auto out_b = cli::resolve_model(b, events, references, opts, jobs, inputs);
  const PairedSweep p = run_paired_sweep(events, out_a, out_b, references, cfg, geo, jobs);

  write_text(out / "sweep_a.csv", sweep_csv(p.a.records));
  write_text(out / "sweep_b.csv", sweep_csv(p.b.records));
  write_text(out / "paired_diff.csv", paired_diff_csv(p.a, p.b));
  json summary = sweep_header(p.a, geo);
  const auto model = [&](const cli::ModelSpec& spec, const SweepResult& r) {
    return json{{"spec", spec.text},
                {"aggregates", aggregates_json(r)},
                {"year_table", year_table_json(year_table(r, r.anchor_radius_px))}};
  };
  summary["model_a"] = model(a, p.a);
  summary["model_b"] = model(b, p.b);
  write_json(out / "summary.json", summary);
  json config = shared_json(s);
  config["model_a"] = spec_a;
  config["model_b"] = spec_b;
  finish(out, "sweep", config, std::move(inputs));
  std::printf("anchor %d px; wrote %s\n", p.a.anchor_radius_px, out.string().c_str());
}

struct StatsArgs {
  fs::path sweep_dir;
  fs::path out;
  std::string anchor = "auto";
  std::string alternative = "greater";
  std::string mode = "auto";
  std::vector<std::string> metrics{"auroc", "auprc"};
};

void cmd_stats(const StatsArgs& a, const Shared& s) {
  Alternative alt;
  if (a.alternative == "greater") {
    alt = Alternative::kGreater;
  } else if (a.alternative == "less") {
    alt = Alternative::kLess;
  } else {
    throw ArgumentError("--alternative must be greater or less");
  }
  WilcoxonMode mode;
  if (a.mode == "auto") {
    mode = WilcoxonMode::kAuto;
  } else if (a.mode == "exact") {
    mode = WilcoxonMode::kExact;
  } else if (a.mode == "normal") {
    mode = WilcoxonMode::kNormal;
  } else {
    throw ArgumentError("--mode must be auto, exact or normal");
  }
  std::vector<Metric> metrics;
  for (const auto& name : a.metrics) {
    const auto m = parse_metric(name);
    if (!m) throw ArgumentError("unknown metric '" + name + "'");
    metrics.push_back(*m);
  }
  prepare_output_dir(a.out, s.force);

  const json summary = json::parse(read_text(a.sweep_dir / "summary.json"), nullptr, false);
  if (summary.is_discarded() || !summary.is_object()) {
    throw ParseError((a.sweep_dir / "summary.json").string() + ": invalid JSON");
  }
  int anchor = 0;
  if (a.anchor == "auto") {
    if (!summary.contains("anchor_radius_px") || !summary["anchor_radius_px"].is_number_integer()) {
      throw ParseError((a.sweep_dir / "summary.json").string() + ": missing anchor_radius_px");
    }
    anchor = summary["anchor_radius_px"].get<int>();
  } else {
    anchor = parse_int(a.anchor, "--anchor");
  }
  const auto rec_a = read_sweep_csv(a.sweep_dir / "sweep_a.csv");
  const auto rec_b = read_sweep_csv(a.sweep_dir / "sweep_b.csv");
  const auto has_radius = [anchor](const MetricRecord& r) { return r.radius_px == anchor; };
  if (std::none_of(rec_a.begin(), rec_a.end(), has_radius)) {
    throw ArgumentError("radius " + std::to_string(anchor) + " px is not part of the sweep");
  }

  json out;
  out["anchor_radius_px"] = anchor;
  out["alternative"] = to_string(alt);
  out["model_a"] = summary.value("model_a", json::object()).value("spec", "");
  out["model_b"] = summary.value("model_b", json::object()).value("spec", "");
  json tests = json::array();
  for (const Metric m : metrics) {
    const PairedMetric paired = pair_records(rec_a, rec_b, m, anchor);
    tests.push_back(wilcoxon_json(metric_name(m), paired, wilcoxon_one_sided(paired.pairs, alt, mode)));
  }
  out["tests"] = tests;
  write_json(a.out / "stats.json", out);
  finish(a.out, "stats",
         {{"anchor", a.anchor}, {"alternative", a.alternative}, {"mode", a.mode}, {"metrics", a.metrics}},
         {digest_inputs("sweep", a.sweep_dir, ".csv"), digest_inputs("sweep_summary", a.sweep_dir / "summary.json")});
  for (const auto& t : tests) {
    std::printf("%s: W+=%g p=%.6g r=%.4f\n", t["metric"].get<std::string>().c_str(), t["w_plus"].get<double>(),
                t["p_value"].get<double>(), t["rank_biserial"].get<double>());
  }
}

struct DistillArgs {
  fs::path root;
  fs::path out;
  TrainConfig train;
  std::vector<int> val_years;
};

void cmd_distill(DistillArgs& a, const Shared& s) {
  a.train.validate();
  LoadOptions opts = load_options(s);
  opts.load_features = true;
  opts.min_members = 2;
  const std::size_t jobs = worker_count(s.jobs);
  prepare_output_dir(a.out, s.force);

  const std::vector<FireEvent> events = load_events(a.root, opts);
  for (const auto& ev : events) {
    if (!ev.features) throw ValidationError(ev.id + ": distillation needs cached features.npy");
  }
  const auto references = cli::middle_member_maps(events);
  std::vector<UncertaintyMap> teacher(events.size());
  parallel_for(events.size(), jobs, [&](std::size_t i) { teacher[i] = fuse_ensemble(events[i].members).uncertainty; });

  std::set<int> val_years(a.val_years.begin(), a.val_years.end());
  if (val_years.empty()) val_years.insert(events.back().year);
  std::vector<DistillSample> train, val;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const FireEvent& ev = events[i];
    if (!val_years.contains(ev.year)) {
      train.push_back({*ev.features, teacher[i], std::nullopt});
    } else if (ev.gt.any()) {
      val.push_back({*ev.features, teacher[i],
                     make_selection_target(ev.gt, references[i], a.train.selection_anchor_px, s.threshold)});
    }
  }
  if (train.empty()) throw ArgumentError("no training fires outside the validation years");
  if (val.empty()) throw ArgumentError("no validation fires with nonempty ground truth");

  const TrainResult result = train_head(train, val, a.train);
  save_checkpoint(result, a.train, a.out / "head.json");
  write_text(a.out / "train_log.csv", train_log_csv(result));
  parallel_for(events.size(), jobs, [&](std::size_t i) {
    const fs::path dir = event_dir(a.out, events[i]);
    fs::create_directories(dir);
    npy::save_grid(teacher[i], dir / "teacher_unc.npy");
    npy::save_grid(apply_head(result.head, *events[i].features), dir / "student_unc.npy");
  });

  json config = {{"crop", s.crop},
                 {"threshold", s.threshold},
                 {"lr0", a.train.lr0},
                 {"momentum", a.train.momentum},
                 {"weight_decay", a.train.weight_decay},
                 {"batch_size", a.train.batch_size},
                 {"poly_power", a.train.poly_power},
                 {"max_epochs", a.train.max_epochs},
                 {"patience", a.train.patience},
                 {"selection_anchor_px", a.train.selection_anchor_px},
                 {"seed", a.train.rng_seed},
                 {"val_years", std::vector<int>(val_years.begin(), val_years.end())},
                 {"n_train", train.size()},
                 {"n_val", val.size()}};
  finish(a.out, "distill", config, {digest_inputs("dataset", a.root, ".npy")});
  std::printf("selected epoch %d (%s = %.6f); wrote %s\n", result.selected_epoch, result.selection_metric.c_str(),
              result.selection_value, a.out.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fire-centered error region evaluation of segmentation uncertainty"};
  app.set_version_flag("--version", FCER_VERSION);
  app.require_subcommand(1);

  Shared shared;
  std::function<void()> run;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--jobs", shared.jobs, "Worker threads (0: all cores)")->capture_default_str();
    cmd->add_flag("--force", shared.force, "Overwrite an output directory holding a manifest");
  };
  const auto add_load = [&](CLI::App* cmd) {
    cmd->add_option("--crop", shared.crop, "Central crop size in pixels (0: none)")->capture_default_str();
  };
  const auto add_sweep = [&](CLI::App* cmd) {
    cmd->add_option("--mpp", shared.mpp, "Meters per pixel")->capture_default_str();
    cmd->add_option("--radii", shared.radii, "FCER radii, e.g. 0-16 or 0,2,4-8")->capture_default_str();
    cmd->add_option("--anchor", shared.anchor, "auto (mean ASD) or a radius in pixels")->capture_default_str();
    cmd->add_option("--epsilon", shared.epsilon, "NLL probability clip")->capture_default_str();
    cmd->add_option("--threshold", shared.threshold, "Error threshold on the reference map")
        ->capture_default_str();
  };

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic dataset pack");
  c_synth->add_option("--out", synth.out, "Output directory")->required();
  c_synth->add_option("--seed", synth.spec.rng_seed)->capture_default_str();
  c_synth->add_option("--fires", synth.spec.n_fires)->capture_default_str();
  c_synth->add_option("--grid", synth.spec.grid_size)->capture_default_str();
  c_synth->add_option("--members", synth.spec.n_members)->capture_default_str();
  c_synth->add_option("--channels", synth.spec.feature_channels)->capture_default_str();
  c_synth->add_option("--noise", synth.spec.member_noise_sigma, "Member perturbation sigma")->capture_default_str();
  c_synth->add_option("--noise-floor", synth.spec.member_noise_floor, "Noise scale far from the fire front")
      ->capture_default_str();
  c_synth->add_option("--bias", synth.spec.member_bias, "Member probability bias")->capture_default_str();
  c_synth->add_option("--feature-noise", synth.spec.feature_noise_sigma)->capture_default_str();
  c_synth->add_option("--smoothing", synth.spec.smoothing_sigma_px, "Blur sigma in pixels")->capture_default_str();
  c_synth->add_option("--blob-count", synth.blob_count, "MIN MAX")->expected(2)->capture_default_str();
  c_synth->add_option("--blob-radius", synth.blob_radius, "MIN MAX (pixels)")->expected(2)->capture_default_str();
  c_synth->add_option("--years", synth.spec.years)->capture_default_str();
  add_common(c_synth);
  c_synth->callback([&] { run = [&] { cmd_synth(synth, shared); }; });

  fs::path validate_root;
  auto* c_validate = app.add_subcommand("validate", "Check a dataset layout");
  c_validate->add_option("DATA", validate_root)->required();
  add_load(c_validate);
  c_validate->callback([&] { run = [&] { cmd_validate(validate_root, shared); }; });

  fs::path eval_root, eval_out;
  std::vector<std::string> eval_models;
  auto* c_eval = app.add_subcommand("eval", "Per-year and mean tables at the anchor radius");
  c_eval->add_option("DATA", eval_root)->required();
  c_eval->add_option("--model", eval_models, "ensemble[:<dir>] | student:<dir>[:<head.json>]")
      ->default_val(std::vector<std::string>{"ensemble"});
  c_eval->add_option("--out", eval_out)->required();
  add_common(c_eval);
  add_load(c_eval);
  add_sweep(c_eval);
  c_eval->callback([&] { run = [&] { cmd_eval(eval_root, eval_models, eval_out, shared); }; });

  fs::path sweep_root, sweep_out;
  std::string sweep_a, sweep_b = "ensemble";
  auto* c_sweep = app.add_subcommand("sweep", "Radius sweep of two models");
  c_sweep->add_option("DATA", sweep_root)->required();
  c_sweep->add_option("--model-a", sweep_a, "Challenger model spec")->required();
  c_sweep->add_option("--model-b", sweep_b, "Baseline model spec")->capture_default_str();
  c_sweep->add_option("--out", sweep_out)->required();
  add_common(c_sweep);
  add_load(c_sweep);
  add_sweep(c_sweep);
  c_sweep->callback([&] { run = [&] { cmd_sweep(sweep_root, sweep_a, sweep_b, sweep_out, shared); }; });

  StatsArgs stats;
  auto* c_stats = app.add_subcommand("stats", "Paired Wilcoxon tests at the anchor");
  c_stats->add_option("SWEEP_DIR", stats.sweep_dir)->required();
  c_stats->add_option("--out", stats.out)->required();
  c_stats->add_option("--anchor", stats.anchor, "auto (from the sweep) or a radius in pixels")
      ->capture_default_str();
  c_stats->add_option("--alternative", stats.alternative, "greater: model A > model B")->capture_default_str();
  c_stats->add_option("--mode", stats.mode, "auto, exact or normal")->capture_default_str();
  c_stats->add_option("--metrics", stats.metrics)->delimiter(',')->capture_default_str();
  add_common(c_stats);
  c_stats->callback([&] { run = [&] { cmd_stats(stats, shared); }; });

  DistillArgs distill;
  auto* c_distill = app.add_subcommand("distill", "Train the uncertainty head on cached features");
  c_distill->add_option("DATA", distill.root)->required();
  c_distill->add_option("--out", distill.out)->required();
  c_distill->add_option("--lr", distill.train.lr0)->capture_default_str();
  c_distill->add_option("--momentum", distill.train.momentum)->capture_default_str();
  c_distill->add_option("--weight-decay", distill.train.weight_decay)->capture_default_str();
  c_distill->add_option("--batch", distill.train.batch_size)->capture_default_str();
  c_distill->add_option("--epochs", distill.train.max_epochs)->capture_default_str();
  c_distill->add_option("--patience", distill.train.patience)->capture_default_str();
  c_distill->add_option("--poly-power", distill.train.poly_power)->capture_default_str();
  c_distill->add_option("--selection-anchor", distill.train.selection_anchor_px)->capture_default_str();
  c_distill->add_option("--seed", distill.train.rng_seed)->capture_default_str();
  c_distill->add_option("--val-years", distill.val_years, "Validation years (default: the latest)");
  c_distill->add_option("--threshold", shared.threshold, "Error threshold on the reference map")
      ->capture_default_str();
  add_common(c_distill);
  add_load(c_distill);
  c_distill->callback([&] { run = [&] { cmd_distill(distill, shared); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    run();
    return 0;
  } catch (const DegenerateError& e) {
    std::fprintf(stderr, "fcer: degenerate data: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fcer: error: %s\n", e.what());
    return 1;
  }
}
