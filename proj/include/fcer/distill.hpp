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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fcer/dataset.hpp"

namespace fcer {

// ---------------------------------------------------------------------------
// Teacher

struct TeacherOutput {
  ProbabilityMap mean_prob;
  UncertaintyMap uncertainty;  // sample std / max_sample_std(n), in [0, 1]
  int n_members = 0;
};

/// Largest sample standard deviation (divisor n - 1) attainable by n values
/// in [0, 1]: floor(n/2) zeros and ceil(n/2) ones.
double max_sample_std(int n);

/// Per-pixel member mean and normalized sample standard deviation.
TeacherOutput fuse_ensemble(std::span<const ProbabilityMap> members);

/// Index of the member whose AP is the median; ties resolve to the lowest
/// index holding the median value. Requires an odd member count.
std::size_t select_middle_member(std::span<const double> per_member_ap);

/// Middle-AP member per year, ranking members by their mean per-fire AP
/// over that year's fires.
std::map<int, std::size_t> middle_member_by_year(std::span<const FireEvent> events);

// ---------------------------------------------------------------------------
// Student head

/// Pixel-wise linear layer followed by a sigmoid.
struct UncertaintyHead {
  Eigen::VectorXd weights;
  double bias = 0.0;

  Index channels() const { return weights.size(); }
};

/// sigmoid(w . f_i + b) at every pixel.
UncertaintyMap apply_head(const UncertaintyHead& head, const FeatureStack& features);

template <typename DerivedS, typename DerivedT>
double rmsle(const Eigen::ArrayBase<DerivedS>& student, const Eigen::ArrayBase<DerivedT>& teacher) {
  require_same_shape(student, teacher, "rmsle");
  if (student.size() == 0) throw ShapeError("rmsle: empty input");
  if ((student < 0).any() || (teacher < 0).any()) throw ArgumentError("rmsle: values must be >= 0");
  const auto d = teacher.template cast<double>().log1p() - student.template cast<double>().log1p();
  return std::sqrt(d.square().mean());
}

struct TrainConfig {
  double lr0 = 1e-3;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  int batch_size = 4;
  double poly_power = 0.9;
  int max_epochs = 200;
  int patience = 20;
  int selection_anchor_px = 4;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Evaluation targets for checkpoint selection on a validation image.
struct SelectionTarget {
  BinaryMask errors;  // reference errors
  BinaryMask region;  // FCER at the selection anchor
};

SelectionTarget make_selection_target(const BinaryMask& gt, const ProbabilityMap& reference, int anchor_px,
                                      double threshold = 0.5);

struct DistillSample {
  FeatureStack features;
  UncertaintyMap teacher;
  std::optional<SelectionTarget> selection;
};

struct LossGradient {
  double loss = 0.0;  // mean of per-image RMSLE
  Eigen::VectorXd grad_weights;
  double grad_bias = 0.0;
};

/// Batch loss and its analytic gradient with respect to (weights, bias).
/// No weight decay term.
LossGradient rmsle_loss_gradient(const UncertaintyHead& head, std::span<const DistillSample> samples,
                                 std::span<const std::size_t> batch);
LossGradient rmsle_loss_gradient(const UncertaintyHead& head, std::span<const DistillSample> samples);

struct EpochLog {
  int epoch = 0;
  double lr = 0.0;
  double train_rmsle = 0.0;
  double val_rmsle = 0.0;
  std::optional<double> val_auroc_at_anchor;
};

struct TrainResult {
  UncertaintyHead head;
  int selected_epoch = -1;
  std::string selection_metric;  // "val_auroc_at_anchor" or "val_rmsle"
  double selection_value = 0.0;
  std::vector<EpochLog> log;
};

/// Zero weights and bias = logit of the mean training teacher value.
UncertaintyHead initial_head(std::span<const DistillSample> train);

/// SGD with momentum, coupled weight decay and per-epoch polynomial decay on
/// cached features. The retained head maximises mean validation AUROC at the
/// selection anchor when every validation sample carries a SelectionTarget,
/// otherwise it minimises validation RMSLE; training stops after `patience`
/// epochs without improvement of that criterion.
TrainResult train_head(std::span<const DistillSample> train, std::span<const DistillSample> val,
                       const TrainConfig& config, std::optional<UncertaintyHead> init = std::nullopt);

/// Mean per-image AUROC of the head's output inside each selection region;
/// images with a single-class region are skipped. nullopt if none remain.
std::optional<double> mean_selection_auroc(const UncertaintyHead& head, std::span<const DistillSample> samples);

double mean_rmsle(const UncertaintyHead& head, std::span<const DistillSample> samples);

// ---------------------------------------------------------------------------
// Checkpoint I/O

void save_checkpoint(const TrainResult& result, const TrainConfig& config, const std::filesystem::path& path);
UncertaintyHead load_checkpoint(const std::filesystem::path& path);

}  // namespace fcer
