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

#include "fcer/distill.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include <json.hpp>

#include "fcer/metrics.hpp"
#include "fcer/morphology.hpp"

namespace fcer {

double max_sample_std(int n) {
  if (n < 2) throw ArgumentError("max_sample_std: need at least 2 values");
  const double lo = n / 2;
  const double hi = n - n / 2;
  return std::sqrt(lo * hi / (static_cast<double>(n) * static_cast<double>(n - 1)));
}

TeacherOutput fuse_ensemble(std::span<const ProbabilityMap> members) {
  if (members.size() < 2) throw ArgumentError("fuse_ensemble: need at least 2 members");
  for (std::size_t k = 1; k < members.size(); ++k) require_same_shape(members[0], members[k], "fuse_ensemble");
  const auto n = static_cast<double>(members.size());
  Grid<double> sum = Grid<double>::Zero(members[0].rows(), members[0].cols());
  for (const auto& m : members) sum += m.cast<double>();
  const Grid<double> mean = sum / n;
  Grid<double> ss = Grid<double>::Zero(mean.rows(), mean.cols());
  for (const auto& m : members) ss += (m.cast<double>() - mean).square();
  const double scale = max_sample_std(static_cast<int>(members.size()));

  TeacherOutput out;
  out.n_members = static_cast<int>(members.size());
  out.mean_prob = mean.cast<float>().max(0.0f).min(1.0f);
  out.uncertainty = ((ss / (n - 1.0)).sqrt() / scale).min(1.0).cast<float>();
  return out;
}

std::size_t select_middle_member(std::span<const double> per_member_ap) {
  if (per_member_ap.empty() || per_member_ap.size() % 2 == 0) {
    throw ArgumentError("select_middle_member: requires an odd number of members");
  }
  std::vector<double> sorted(per_member_ap.begin(), per_member_ap.end());
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  for (std::size_t k = 0; k < per_member_ap.size(); ++k) {
    if (per_member_ap[k] == median) return k;
  }
  return 0;  // unreachable
}

std::map<int, std::size_t> middle_member_by_year(std::span<const FireEvent> events) {
  std::map<int, std::vector<std::pair<double, Index>>> sums;  // year -> per member (sum, n)
  for (const auto& ev : events) {
    auto& acc = sums[ev.year];
    if (acc.empty()) acc.resize(ev.members.size(), {0.0, 0});
    if (acc.size() != ev.members.size()) {
      throw ValidationError("fires in year " + std::to_string(ev.year) + " have differing member counts");
    }
    for (std::size_t k = 0; k < ev.members.size(); ++k) {
      try {
        acc[k].first += average_precision(ev.members[k], ev.gt);
        acc[k].second += 1;
      } catch (const DegenerateError&) {
      }
    }
  }
  std::map<int, std::size_t> out;
  for (const auto& [year, acc] : sums) {
    std::vector<double> ap;
    for (const auto& [s, n] : acc) ap.push_back(n > 0 ? s / static_cast<double>(n) : 0.0);
    out[year] = select_middle_member(ap);
  }
  return out;
}

UncertaintyMap apply_head(const UncertaintyHead& head, const FeatureStack& features) {
  if (features.channels() != head.channels()) {
    throw ShapeError("apply_head: feature channels (" + std::to_string(features.channels()) +
                     ") do not match head (" + std::to_string(head.channels()) + ")");
  }
  const Eigen::ArrayXd z = (features.data.cast<double>().transpose() * head.weights).array() + head.bias;
  const Eigen::ArrayXd s = 1.0 / (1.0 + (-z).exp());
  UncertaintyMap out(features.height, features.width);
  // Keep the float output strictly inside (0, 1).
  constexpr float lo = std::numeric_limits<float>::min();
  const float hi = std::nextafter(1.0f, 0.0f);
  Eigen::Map<Eigen::ArrayXf>(out.data(), out.size()) = s.cast<float>().max(lo).min(hi);
  return out;
}

void TrainConfig::validate() const {
  if (lr0 < 0.0) throw ArgumentError("train: learning rate must be >= 0");
  if (momentum < 0.0 || momentum >= 1.0) throw ArgumentError("train: momentum must lie in [0, 1)");
  if (weight_decay < 0.0) throw ArgumentError("train: weight decay must be >= 0");
  if (batch_size < 1) throw ArgumentError("train: batch size must be >= 1");
  if (poly_power < 0.0) throw ArgumentError("train: poly power must be >= 0");
  if (max_epochs < 1) throw ArgumentError("train: max_epochs must be >= 1");
  if (patience < 1) throw ArgumentError("train: patience must be >= 1");
  if (selection_anchor_px < 0) throw ArgumentError("train: selection anchor must be >= 0");
}

SelectionTarget make_selection_target(const BinaryMask& gt, const ProbabilityMap& reference, int anchor_px,
                                      double threshold) {
  if (count(gt) == 0) throw DegenerateError("selection target: ground truth has no fire pixels");
  return {error_map(reference, gt, threshold), dilate(gt, static_cast<double>(anchor_px))};
}

namespace {

// Features and log1p(teacher) in double precision, built once per image.
struct CachedImage {
  Eigen::MatrixXd features;  // C x P
  Eigen::ArrayXd log_teacher;
};

std::vector<CachedImage> cache(std::span<const DistillSample> samples, Index channels) {
  std::vector<CachedImage> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.features.channels() != channels) throw ShapeError("train: inconsistent feature channel count");
    if (s.features.height != s.teacher.rows() || s.features.width != s.teacher.cols()) {
      throw ShapeError("train: features and teacher target differ in shape");
    }
    if ((s.teacher < 0.0f).any()) throw ArgumentError("train: teacher targets must be >= 0");
    CachedImage img;
    img.features = s.features.data.cast<double>();
    img.log_teacher = Eigen::Map<const Eigen::ArrayXf>(s.teacher.data(), s.teacher.size()).cast<double>().log1p();
    out.push_back(std::move(img));
  }
  return out;
}

// Adds the gradient of one image's RMSLE into (gw, gb) and returns the loss.
double accumulate_image(const UncertaintyHead& head, const CachedImage& img, Eigen::VectorXd& gw, double& gb,
                        double scale) {
  const Eigen::ArrayXd z = (img.features.transpose() * head.weights).array() + head.bias;
  const Eigen::ArrayXd s = 1.0 / (1.0 + (-z).exp());
  const Eigen::ArrayXd d = img.log_teacher - s.log1p();
  const auto n = static_cast<double>(d.size());
  const double loss = std::sqrt(d.square().sum() / n);
  if (loss > 0.0) {
    // dL/dz_i = -d_i / (N L (1 + s_i)) * s_i (1 - s_i)
    const Eigen::ArrayXd gz = -d / (n * loss * (1.0 + s)) * s * (1.0 - s);
    gw.noalias() += scale * (img.features * gz.matrix());
    gb += scale * gz.sum();
  }
  return loss;
}

LossGradient batch_gradient(const UncertaintyHead& head, const std::vector<CachedImage>& images,
                            std::span<const std::size_t> batch) {
  LossGradient out;
  out.grad_weights = Eigen::VectorXd::Zero(head.channels());
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const std::size_t i : batch) {
    out.loss += scale * accumulate_image(head, images[i], out.grad_weights, out.grad_bias, scale);
  }
  return out;
}

double mean_loss(const UncertaintyHead& head, const std::vector<CachedImage>& images) {
  if (images.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& img : images) {
    const Eigen::ArrayXd z = (img.features.transpose() * head.weights).array() + head.bias;
    const Eigen::ArrayXd s = 1.0 / (1.0 + (-z).exp());
    sum += std::sqrt((img.log_teacher - s.log1p()).square().mean());
  }
  return sum / static_cast<double>(images.size());
}

}  // namespace

LossGradient rmsle_loss_gradient(const UncertaintyHead& head, std::span<const DistillSample> samples,
                                 std::span<const std::size_t> batch) {
  if (batch.empty()) throw ArgumentError("rmsle_loss_gradient: empty batch");
  return batch_gradient(head, cache(samples, head.channels()), batch);
}

LossGradient rmsle_loss_gradient(const UncertaintyHead& head, std::span<const DistillSample> samples) {
  std::vector<std::size_t> all(samples.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return rmsle_loss_gradient(head, samples, all);
}

double mean_rmsle(const UncertaintyHead& head, std::span<const DistillSample> samples) {
  return mean_loss(head, cache(samples, head.channels()));
}

std::optional<double> mean_selection_auroc(const UncertaintyHead& head, std::span<const DistillSample> samples) {
  double sum = 0.0;
  Index n = 0;
  for (const auto& s : samples) {
    if (!s.selection) continue;
    try {
      sum += uq_auroc(apply_head(head, s.features), s.selection->errors, s.selection->region);
      ++n;
    } catch (const DegenerateError&) {
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

UncertaintyHead initial_head(std::span<const DistillSample> train) {
  if (train.empty()) throw ArgumentError("train: empty training set");
  double sum = 0.0;
  double n = 0.0;
  for (const auto& s : train) {
    sum += s.teacher.cast<double>().sum();
    n += static_cast<double>(s.teacher.size());
  }
  const double mean = std::clamp(sum / n, 1e-6, 1.0 - 1e-6);
  UncertaintyHead head;
  head.weights = Eigen::VectorXd::Zero(train.front().features.channels());
  head.bias = std::log(mean / (1.0 - mean));
  return head;
}

TrainResult train_head(std::span<const DistillSample> train, std::span<const DistillSample> val,
                       const TrainConfig& config, std::optional<UncertaintyHead> init) {
  config.validate();
  if (train.empty()) throw ArgumentError("train: empty training set");
  UncertaintyHead head = init ? *init : initial_head(train);
  const Index channels = train.front().features.channels();
  if (head.channels() != channels) throw ShapeError("train: initial head does not match feature channels");
  const auto train_cache = cache(train, channels);
  const auto val_cache = cache(val, channels);
  const bool select_by_auroc =
      !val.empty() && std::all_of(val.begin(), val.end(), [](const DistillSample& s) { return s.selection.has_value(); });

  TrainResult result;
  result.selection_metric = select_by_auroc ? "val_auroc_at_anchor" : "val_rmsle";
  result.head = head;

  std::mt19937_64 rng(config.rng_seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Eigen::VectorXd velocity_w = Eigen::VectorXd::Zero(channels);
  double velocity_b = 0.0;
  std::optional<double> best;
  int since_best = 0;

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const double progress = static_cast<double>(epoch) / static_cast<double>(config.max_epochs);
    const double lr = config.lr0 * std::pow(1.0 - progress, config.poly_power);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const std::span<const std::size_t> batch(order.data() + start, stop - start);
      LossGradient g = batch_gradient(head, train_cache, batch);
      g.grad_weights += config.weight_decay * head.weights;
      g.grad_bias += config.weight_decay * head.bias;
      velocity_w = config.momentum * velocity_w + g.grad_weights;
      velocity_b = config.momentum * velocity_b + g.grad_bias;
      head.weights -= lr * velocity_w;
      head.bias -= lr * velocity_b;
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.lr = lr;
    entry.train_rmsle = mean_loss(head, train_cache);
    entry.val_rmsle = val_cache.empty() ? entry.train_rmsle : mean_loss(head, val_cache);
    if (select_by_auroc) entry.val_auroc_at_anchor = mean_selection_auroc(head, val);
    result.log.push_back(entry);

    // Larger is better for both criteria once RMSLE is negated.
    std::optional<double> score;
    if (!select_by_auroc) {
      score = -entry.val_rmsle;
    } else if (entry.val_auroc_at_anchor) {
      score = *entry.val_auroc_at_anchor;
    }
    if (score && (!best || *score > *best)) {
      best = score;
      since_best = 0;
      result.head = head;
      result.selected_epoch = epoch;
      result.selection_value = select_by_auroc ? *score : entry.val_rmsle;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

void save_checkpoint(const TrainResult& result, const TrainConfig& config, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["channels"] = result.head.channels();
  j["weights"] = std::vector<double>(result.head.weights.data(), result.head.weights.data() + result.head.channels());
  j["bias"] = result.head.bias;
  j["train_config"] = {{"lr0", config.lr0},
                       {"momentum", config.momentum},
                       {"weight_decay", config.weight_decay},
                       {"batch_size", config.batch_size},
                       {"poly_power", config.poly_power},
                       {"max_epochs", config.max_epochs},
                       {"patience", config.patience},
                       {"selection_anchor_px", config.selection_anchor_px},
                       {"rng_seed", config.rng_seed}};
  j["selection_metric"] = result.selection_metric;
  j["selection_value"] = result.selection_value;
  j["epoch"] = result.selected_epoch;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

UncertaintyHead load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    const auto weights = j.at("weights").get<std::vector<double>>();
    if (j.at("channels").get<std::size_t>() != weights.size()) {
      throw ParseError(path.string() + ": channels does not match weights length");
    }
    UncertaintyHead head;
    head.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Index>(weights.size()));
    head.bias = j.at("bias").get<double>();
    if (!head.weights.allFinite() || !std::isfinite(head.bias)) {
      throw ValidationError(path.string() + ": non-finite head parameters");
    }
    return head;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace fcer
