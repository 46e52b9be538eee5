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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "fcer/distill.hpp"
#include "fcer/metrics.hpp"
#include "fcer/morphology.hpp"
#include "fcer/oracle.hpp"
#include "fcer/protocol.hpp"
#include "fcer/report.hpp"
#include "fcer/stats.hpp"
#include "fcer/synth.hpp"
#include "test_support.hpp"

using namespace fcer;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Published per-year values -> printed Mean rows

struct TableRow {
  const char* method;
  const char* metric;
  std::array<double, 4> years;
  double mean;
  double std;
  int decimals;
};

const std::vector<TableRow>& table_rows() {
  static const std::vector<TableRow> rows = {
      {"Ensemble", "AP", {0.53, 0.37, 0.51, 0.60}, 0.50, 0.08, 2},
      {"Ensemble", "ASD", {1.21, 1.13, 1.52, 1.68}, 1.39, 0.22, 2},
      {"Ensemble", "Brier", {0.159, 0.163, 0.173, 0.150}, 0.161, 0.008, 3},
      {"Ensemble", "NLL", {0.505, 0.517, 0.549, 0.476}, 0.512, 0.026, 3},
      {"Ensemble", "AUROC", {0.562, 0.527, 0.568, 0.577}, 0.558, 0.019, 3},
      {"Ensemble", "AUPRC", {0.251, 0.233, 0.270, 0.243}, 0.249, 0.014, 3},
      {"DUDES", "AP", {0.51, 0.35, 0.50, 0.58}, 0.49, 0.09, 2},
      {"DUDES", "ASD", {1.22, 1.22, 1.71, 1.51}, 1.41, 0.21, 2},
      {"DUDES", "Brier", {0.160, 0.169, 0.172, 0.151}, 0.163, 0.008, 3},
      {"DUDES", "NLL", {0.510, 0.541, 0.548, 0.481}, 0.520, 0.027, 3},
      {"DUDES", "AUROC", {0.603, 0.619, 0.605, 0.689}, 0.629, 0.035, 3},
      {"DUDES", "AUPRC", {0.281, 0.318, 0.291, 0.339}, 0.307, 0.023, 3},
  };
  return rows;
}

// Printed values carry `decimals` digits; a computed value reproduces the
// print when it lies within half a unit of the last digit.
bool reproduces(double computed, double printed, int decimals) {
  return std::abs(computed - printed) <= 0.5 * std::pow(10.0, -decimals) + 1e-12;
}

Outcome table_aggregation() {
  int ok = 0;
  std::string misses;
  for (const auto& row : table_rows()) {
    const MeanStd ms = aggregate_mean_std(row.years);
    if (reproduces(ms.mean, row.mean, row.decimals) && reproduces(ms.std, row.std, row.decimals)) {
      ++ok;
    } else {
      misses += std::string(" ") + row.method + " " + row.metric + " got " + fmt("%.4f", ms.mean) + "±" +
                fmt("%.4f", ms.std) + " printed " + fmt("%.3f", row.mean) + "±" + fmt("%.3f", row.std) + ";";
    }
  }
  return {ok == 12, std::to_string(ok) + "/12 rows reproduce" + (misses.empty() ? "" : ":" + misses)};
}

// ---------------------------------------------------------------------------
// 2. Baseline-relative percentages

Outcome baseline_percentages() {
  struct Case {
    const char* label;
    double value, baseline;
    long printed;
  };
  const Case cases[] = {{"DUDES AUROC", 0.629, 0.5, 26},
                        {"Ensemble AUROC", 0.558, 0.5, 12},
                        {"DUDES AUPRC", 0.307, 0.205, 50},
                        {"Ensemble AUPRC", 0.249, 0.205, 23}};
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    const long got = rounded_percent(c.value, c.baseline);
    pass = pass && got == c.printed;
    detail += std::string(detail.empty() ? "" : ", ") + c.label + " " + (got >= 0 ? "+" : "") + std::to_string(got) +
              "%" + (got == c.printed ? "" : " (printed +" + std::to_string(c.printed) + "%)");
  }
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 3. Oracle equivalence

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<Index> small(1, 16);
  std::uniform_int_distribution<Index> large(1, 32);
  std::uniform_int_distribution<int> levels(2, 40);
  std::uniform_real_distribution<double> radius(0.0, 6.0);
  int n_ap = 0, n_auroc = 0, n_auprc = 0, n_asd = 0, n_edt = 0, n_dil = 0;
  double worst = 0.0;
  bool sets_ok = true;
  std::vector<double> s;
  std::vector<std::uint8_t> l;
  while (n_ap < 200 || n_auroc < 200 || n_auprc < 200) {
    const Index h = large(rng), w = large(rng);
    const auto scores = testing::random_scores(rng, h, w, levels(rng));
    const auto labels = testing::random_mask(rng, h, w, 0.3);
    const auto region = testing::random_mask(rng, h, w, 0.7);
    s.clear();
    l.clear();
    for (Index i = 0; i < scores.size(); ++i) {
      if (!region.data()[i]) continue;
      s.push_back(scores.data()[i]);
      l.push_back(labels.data()[i]);
    }
    const auto pos = std::count(l.begin(), l.end(), 1);
    if (pos == 0 || pos == static_cast<long>(l.size())) continue;
    const double ap_ref = oracle::average_precision(s, l);
    worst = std::max(worst, std::abs(average_precision(scores, labels, region) - ap_ref));
    ++n_ap;
    worst = std::max(worst, std::abs(uq_auroc(scores, labels, region) - oracle::auroc(s, l)));
    ++n_auroc;
    worst = std::max(worst, std::abs(uq_auprc(scores, labels, region).auprc - ap_ref));
    ++n_auprc;
  }
  for (int t = 0; t < 200; ++t) {
    const Index h = small(rng), w = small(rng);
    const auto a = testing::random_nonempty_mask(rng, h, w, 0.25);
    const auto b = testing::random_nonempty_mask(rng, h, w, 0.25);
    worst = std::max(worst, std::abs(average_surface_distance_px(a, b) - oracle::average_surface_distance_px(a, b)));
    ++n_asd;
    const Grid<double> edt = euclidean_distance_transform(a);
    const Grid<double> edt_ref = oracle::distance_transform(a);
    worst = std::max(worst, (edt - edt_ref).abs().maxCoeff());
    ++n_edt;
    const double r = t % 2 ? radius(rng) : std::floor(radius(rng));
    sets_ok = sets_ok && (dilate(a, r) == oracle::dilate(a, r)).all();
    ++n_dil;
  }
  const bool pass = sets_ok && worst <= 1e-12;
  return {pass, "AP/AUROC/AUPRC " + std::to_string(n_ap) + " each (<=32x32), ASD/EDT/dilation " +
                    std::to_string(n_asd) + " each (<=16x16); max |diff| " + fmt("%.2e", worst) +
                    (sets_ok ? ", dilation sets identical" : ", dilation MISMATCH")};
}

// ---------------------------------------------------------------------------
// 4. Wilcoxon

Outcome wilcoxon_exactness() {
  std::mt19937_64 rng(424242);
  std::normal_distribution<double> g(0.3, 1.0);
  int samples = 0;
  double worst_p = 0.0;
  bool w_ok = true, rb_ok = true;
  for (int n = 1; n <= 12; ++n) {
    for (int t = 0; t < 100; ++t) {
      std::vector<double> d(static_cast<std::size_t>(n));
      // Every third sample rounds to quarters to exercise ties and zeros.
      for (auto& v : d) v = t % 3 == 0 ? std::round(g(rng) * 4.0) / 4.0 : g(rng);
      if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) d[0] = 1.0;
      const oracle::WilcoxonOracle ref = oracle::wilcoxon(d);
      const WilcoxonResult gt = wilcoxon_signed_rank(d, Alternative::kGreater, WilcoxonMode::kExact);
      const WilcoxonResult lt = wilcoxon_signed_rank(d, Alternative::kLess, WilcoxonMode::kExact);
      worst_p = std::max({worst_p, std::abs(gt.p_value - ref.p_greater), std::abs(lt.p_value - ref.p_less)});
      w_ok = w_ok && gt.w_plus == ref.w_plus && gt.w_minus == ref.w_minus;
      rb_ok = rb_ok && rank_biserial(gt.w_plus, gt.w_minus) == (gt.w_plus - gt.w_minus) / (gt.w_plus + gt.w_minus);
      ++samples;
    }
  }
  double worst_normal = 0.0;
  int normal_samples = 0;
  for (int n = 20; n <= 25; ++n) {
    for (int t = 0; t < 100; ++t) {
      std::vector<double> d(static_cast<std::size_t>(n));
      for (auto& v : d) v = g(rng);
      const double exact = wilcoxon_signed_rank(d, Alternative::kGreater, WilcoxonMode::kExact).p_value;
      const double normal = wilcoxon_signed_rank(d, Alternative::kGreater, WilcoxonMode::kNormal).p_value;
      worst_normal = std::max(worst_normal, std::abs(exact - normal));
      ++normal_samples;
    }
  }
  const bool pass = worst_p <= 1e-12 && w_ok && rb_ok && worst_normal <= 0.01;
  return {pass, std::to_string(samples) + " samples n<=12, max |p - enum| " + fmt("%.1e", worst_p) +
                    (w_ok ? ", W+/W- equal" : ", W MISMATCH") + (rb_ok ? ", r identical" : ", r MISMATCH") + "; " +
                    std::to_string(normal_samples) + " samples n=20..25, max |normal - exact| " +
                    fmt("%.4f", worst_normal)};
}

// ---------------------------------------------------------------------------
// 5. Anchor

Outcome anchor_resolution() {
  const std::vector<double> asd{1390.0};
  const int px = resolve_anchor(asd, GeoConfig{375.0, 128}, AnchorPolicy::mean_asd());
  return {px == 4, "1390 m / 375 m/px = " + fmt("%.3f", 1390.0 / 375.0) + " -> " + std::to_string(px) + " px"};
}

// ---------------------------------------------------------------------------
// 6. FCER structure

struct Pack {
  std::vector<FireEvent> events;
  std::vector<ModelOutput> outputs;
  std::vector<ProbabilityMap> references;
};

Pack synth_pack(std::uint64_t seed, Index grid, int fires) {
  ScenarioSpec spec;
  spec.rng_seed = seed;
  spec.grid_size = grid;
  spec.n_fires = fires;
  spec.member_noise_sigma = 0.25;
  Pack p;
  p.events = generate_scenario(spec);
  const auto middle = middle_member_by_year(p.events);
  for (const auto& ev : p.events) {
    TeacherOutput t = fuse_ensemble(ev.members);
    p.outputs.push_back({std::move(t.mean_prob), std::move(t.uncertainty)});
    p.references.push_back(ev.members[middle.at(ev.year)]);
  }
  return p;
}

Outcome fcer_structure() {
  const Index g = 48;
  const Pack p = synth_pack(606, g, 16);
  const int saturation = static_cast<int>(2 * g);
  bool subset = true;
  for (const auto& ev : p.events) {
    BinaryMask prev = build_fcer(ev.gt, 0);
    for (int r = 1; r <= saturation; ++r) {
      const BinaryMask next = build_fcer(ev.gt, r);
      subset = subset && ((prev != 0) <= (next != 0)).all();
      prev = next;
    }
    subset = subset && (prev == 1).all();
  }

  SweepConfig sat_cfg;
  sat_cfg.radii = {0, 4};
  sat_cfg.anchor = AnchorPolicy::fixed(saturation);
  const SweepResult sat = run_sweep(p.events, p.outputs, p.references, sat_cfg, GeoConfig{});
  bool saturates = true;
  const auto sat_records = sat.records_at(saturation);
  for (std::size_t i = 0; i < p.events.size(); ++i) {
    const BinaryMask all = full_region(g, g);
    const BinaryMask errors = error_map(p.references[i], p.events[i].gt);
    const MetricRecord& r = sat_records[i];
    saturates = saturates && *r[Metric::kBrier] == brier(p.outputs[i].prob, p.events[i].gt, all) &&
                *r[Metric::kNll] == nll(p.outputs[i].prob, p.events[i].gt, all) &&
                *r[Metric::kAuroc] == uq_auroc(p.outputs[i].unc, errors, all) &&
                *r[Metric::kAuprc] == uq_auprc(p.outputs[i].unc, errors, all).auprc &&
                *r[Metric::kErrorPrevalence] == error_prevalence(errors, all) && r.n_eval_px == g * g;
  }

  SweepConfig cfg;
  cfg.radii = {0, 1, 2, 4, 8};
  const SweepResult base = run_sweep(p.events, p.outputs, p.references, cfg, GeoConfig{});
  const int anchor = base.anchor_radius_px;
  const auto base_rec = base.records_at(anchor);
  std::vector<BinaryMask> regions;
  for (const auto& ev : p.events) regions.push_back(build_fcer(ev.gt, anchor));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  bool invariant = true;
  for (int trial = 0; trial < 50; ++trial) {
    Pack q = p;
    for (std::size_t i = 0; i < q.events.size(); ++i) {
      for (Index j = 0; j < regions[i].size(); ++j) {
        if (regions[i].data()[j]) continue;
        q.outputs[i].prob.data()[j] = u(rng);
        q.outputs[i].unc.data()[j] = u(rng);
        q.references[i].data()[j] = u(rng);
      }
    }
    SweepConfig fixed = cfg;
    fixed.anchor = AnchorPolicy::fixed(anchor);
    const auto rec = run_sweep(q.events, q.outputs, q.references, fixed, GeoConfig{}).records_at(anchor);
    for (std::size_t i = 0; i < rec.size(); ++i) {
      for (const Metric m : {Metric::kBrier, Metric::kNll, Metric::kAuroc, Metric::kAuprc, Metric::kErrorPrevalence}) {
        invariant = invariant && rec[i][m] == base_rec[i][m];
      }
    }
  }
  return {subset && saturates && invariant,
          std::to_string(p.events.size()) + " fires; nested r=0.." + std::to_string(saturation) +
              (subset ? " ok" : " FAILED") + "; saturation equality" + (saturates ? " ok" : " FAILED") +
              "; 50 outside-region fuzz trials at anchor " + std::to_string(anchor) + " px" +
              (invariant ? " ok" : " FAILED")};
}

// ---------------------------------------------------------------------------
// 7. Teacher normalization

Outcome teacher_normalization() {
  const Index rows = 100, cols = 1000;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::uniform_int_distribution<int> kind(0, 3);
  std::vector<ProbabilityMap> members(3, ProbabilityMap(rows, cols));
  for (auto& m : members) {
    for (Index i = 0; i < m.size(); ++i) {
      const int k = kind(rng);
      m.data()[i] = k == 0 ? 0.0f : k == 1 ? 1.0f : u(rng);
    }
  }
  const UncertaintyMap unc = fuse_ensemble(members).uncertainty;
  const bool in_range = (unc >= 0.0f).all() && (unc <= 1.0f).all();

  std::vector<ProbabilityMap> extreme{ProbabilityMap::Zero(1, 1), ProbabilityMap::Zero(1, 1),
                                      ProbabilityMap::Ones(1, 1)};
  const float peak = fuse_ensemble(extreme).uncertainty(0, 0);

  double best = 0.0;
  for (int a = 0; a <= 100; ++a) {
    for (int b = 0; b <= 100; ++b) {
      for (int c = 0; c <= 100; ++c) {
        const double x[3] = {a / 100.0, b / 100.0, c / 100.0};
        const double mean = (x[0] + x[1] + x[2]) / 3.0;
        double ss = 0.0;
        for (const double v : x) ss += (v - mean) * (v - mean);
        best = std::max(best, std::sqrt(ss / 2.0));
      }
    }
  }
  const double expected = std::sqrt(1.0 / 3.0);
  const bool sigma_ok = std::abs(best - expected) <= 1e-12 && std::abs(max_sample_std(3) - expected) <= 1e-12;
  return {in_range && peak == 1.0f && sigma_ok,
          std::string("1e5 triples in [0,1]: ") + (in_range ? "yes" : "NO") + "; (0,0,1) -> " + fmt("%.9g", peak) +
              "; lattice max std " + fmt("%.15f", best) + " vs sqrt(1/3) " + fmt("%.15f", expected)};
}

// ---------------------------------------------------------------------------
// 8. Distillation

UncertaintyHead generating_head() {
  UncertaintyHead h{Eigen::VectorXd(6), -1.0};
  h.weights << 1.5, -0.8, 0.6, 0.3, -0.4, 0.2;
  return h;
}

Outcome distillation() {
  // (a) gradient check
  std::mt19937_64 rng(88);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<float> uf(0.0f, 1.0f);
  std::vector<DistillSample> samples;
  for (int k = 0; k < 3; ++k) {
    DistillSample s;
    s.features.height = 6;
    s.features.width = 5;
    s.features.data.resize(4, 30);
    for (Index i = 0; i < s.features.data.size(); ++i) s.features.data.data()[i] = static_cast<float>(g(rng));
    s.teacher = UncertaintyMap(6, 5);
    for (Index i = 0; i < s.teacher.size(); ++i) s.teacher.data()[i] = uf(rng);
    samples.push_back(std::move(s));
  }
  double worst_rel = 0.0;
  for (int point = 0; point < 20; ++point) {
    UncertaintyHead head{Eigen::VectorXd(4), g(rng)};
    for (Index c = 0; c < 4; ++c) head.weights(c) = g(rng);
    const LossGradient an = rmsle_loss_gradient(head, samples);
    const double h = 1e-5;
    for (Index c = 0; c <= 4; ++c) {
      UncertaintyHead up = head, dn = head;
      (c < 4 ? up.weights(c) : up.bias) += h;
      (c < 4 ? dn.weights(c) : dn.bias) -= h;
      const double fd = (rmsle_loss_gradient(up, samples).loss - rmsle_loss_gradient(dn, samples).loss) / (2.0 * h);
      const double a = c < 4 ? an.grad_weights(c) : an.grad_bias;
      worst_rel = std::max(worst_rel, std::abs(a - fd) / std::max(std::abs(fd), 1e-8));
    }
  }
  const bool grad_ok = worst_rel <= 1e-4;

  // (b) recovery of a generating head
  ScenarioSpec spec;
  spec.rng_seed = 7;
  spec.grid_size = 64;
  spec.n_fires = 40;
  const auto events = generate_scenario(spec);
  const UncertaintyHead truth = generating_head();
  std::vector<DistillSample> tr, va;
  for (std::size_t i = 0; i < events.size(); ++i) {
    DistillSample s{*events[i].features, apply_head(truth, *events[i].features),
                    make_selection_target(events[i].gt, events[i].members[0], 4)};
    (i % 4 == 3 ? va : tr).push_back(std::move(s));
  }
  TrainConfig cfg;
  cfg.lr0 = 0.02;
  const TrainResult fit = train_head(tr, va, cfg);
  const double val_rmsle = mean_rmsle(fit.head, va);
  const double auroc_fit = mean_selection_auroc(fit.head, va).value_or(0.0);
  const double auroc_truth = mean_selection_auroc(truth, va).value_or(0.0);
  const bool recover_ok = val_rmsle < 1e-2 && std::abs(auroc_fit - auroc_truth) <= 0.02;

  // (c) student trained on the ensemble teacher, scored on a held-out year
  ScenarioSpec held;
  held.rng_seed = 2024;
  held.grid_size = 64;
  held.n_fires = 32;
  const auto fires = generate_scenario(held);
  const auto middle = middle_member_by_year(fires);
  std::vector<DistillSample> train, val;
  std::vector<FireEvent> test_events;
  std::vector<ProbabilityMap> test_refs;
  for (const auto& ev : fires) {
    const ProbabilityMap& ref = ev.members[middle.at(ev.year)];
    const UncertaintyMap teacher = fuse_ensemble(ev.members).uncertainty;
    if (ev.year <= 2019) {
      train.push_back({*ev.features, teacher, std::nullopt});
    } else if (ev.year == 2020) {
      val.push_back({*ev.features, teacher, make_selection_target(ev.gt, ref, cfg.selection_anchor_px)});
    } else {
      test_events.push_back(ev);
      test_refs.push_back(ref);
    }
  }
  TrainConfig long_cfg = cfg;
  long_cfg.max_epochs = 1000;
  const TrainResult student = train_head(train, val, long_cfg);
  std::vector<ModelOutput> outs;
  for (std::size_t i = 0; i < test_events.size(); ++i) {
    outs.push_back({test_refs[i], apply_head(student.head, *test_events[i].features)});
  }
  SweepConfig sc;
  sc.radii = {cfg.selection_anchor_px};
  sc.anchor = AnchorPolicy::fixed(cfg.selection_anchor_px);
  const SweepResult sr = run_sweep(test_events, outs, test_refs, sc, GeoConfig{});
  const auto& held_auroc = sr.aggregate_at(cfg.selection_anchor_px).mean[static_cast<std::size_t>(Metric::kAuroc)];
  const double student_auroc = held_auroc.value_or(0.0);
  const bool held_ok = student_auroc >= 0.6;

  return {grad_ok && recover_ok && held_ok,
          "(a) max rel err " + fmt("%.2e", worst_rel) + "; (b) val RMSLE " + fmt("%.2e", val_rmsle) + ", AUROC " +
              fmt("%.4f", auroc_fit) + " vs generating " + fmt("%.4f", auroc_truth) + "; (c) held-out " +
              std::to_string(test_events.size()) + " fires AUROC@" + std::to_string(cfg.selection_anchor_px) +
              "px " + fmt("%.4f", student_auroc)};
}

// ---------------------------------------------------------------------------
// 9. End-to-end CLI determinism

bool sh(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

// Paths are relative to `dir` because summaries echo the model specs.
bool pipeline(const fs::path& dir, int jobs) {
  fs::create_directories(dir);
  const std::string f = "cd '" + dir.string() + "' && " + FCER_CLI_PATH;
  const std::string j = " --jobs " + std::to_string(jobs);
  return sh(f + " synth --out data --seed 5 --fires 16 --grid 48" + j) &&
         sh(f + " distill data --out distill --crop 0 --lr 0.02 --epochs 40" + j) &&
         sh(f + " sweep data --model-a student:distill --model-b ensemble --crop 0 --out sweep" + j) &&
         sh(f + " stats sweep --out stats" + j);
}

std::vector<std::string> relative_files(const fs::path& root) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome end_to_end_determinism() {
  testing::TempDir tmp("acceptance");
  const fs::path a = tmp.path() / "run1", b = tmp.path() / "run2", c = tmp.path() / "run3";
  if (!pipeline(a, 1) || !pipeline(b, 1) || !pipeline(c, 4)) return {false, "a CLI step failed"};
  const auto files = relative_files(a);
  if (files != relative_files(b) || files != relative_files(c)) return {false, "output file sets differ"};
  std::size_t compared = 0, manifests = 0;
  for (const auto& rel : files) {
    if (fs::path(rel).filename() == "manifest.json") {
      ++manifests;
      continue;
    }
    const std::string x = read_text(a / rel);
    if (x != read_text(b / rel)) return {false, rel + " differs between identical runs"};
    if (x != read_text(c / rel)) return {false, rel + " differs with --jobs 4"};
    ++compared;
  }
  const bool has_outputs = std::count(files.begin(), files.end(), "stats/stats.json") == 1 &&
                           std::count(files.begin(), files.end(), "sweep/sweep_a.csv") == 1;
  return {has_outputs && manifests == 4,
          std::to_string(compared) + " files byte-identical across 2 runs and --jobs 1/4 (" +
              std::to_string(manifests) + " manifests excluded: they record timestamps)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "per-year mean aggregation", 1.0, table_aggregation},
      {2, "Baseline percentages", 1.0, baseline_percentages},
      {3, "Oracle equivalence", 60.0, oracle_equivalence},
      {4, "Wilcoxon exactness", 0.0, wilcoxon_exactness},
      {5, "Anchor resolution", 0.0, anchor_resolution},
      {6, "FCER structure", 0.0, fcer_structure},
      {7, "Teacher normalization", 0.0, teacher_normalization},
      {8, "Distillation correctness", 300.0, distillation},
      {9, "End-to-end determinism", 0.0, end_to_end_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt("%g", c.budget_s) + " s budget";
    }
    failures += !o.pass;
    std::printf("%s %d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
