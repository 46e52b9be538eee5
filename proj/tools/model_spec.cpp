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

#include "model_spec.hpp"

#include <tuple>

#include "fcer/distill.hpp"
#include "fcer/npy.hpp"
#include "fcer/parallel.hpp"

namespace fcer::cli {

namespace fs = std::filesystem;

ModelSpec parse_model_spec(std::string_view text) {
  ModelSpec spec;
  spec.text = std::string(text);
  const std::size_t colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (kind == "ensemble") {
    spec.kind = ModelSpec::Kind::kEnsemble;
    if (colon != std::string_view::npos && rest.empty()) throw ArgumentError("model spec '" + spec.text + "': empty directory");
    spec.dir = fs::path(rest);
    return spec;
  }
  if (kind == "student") {
    if (rest.empty()) throw ArgumentError("model spec '" + spec.text + "': student needs a directory");
    const std::size_t last = rest.rfind(':');
    if (last != std::string_view::npos && rest.substr(last + 1).ends_with(".json")) {
      spec.kind = ModelSpec::Kind::kStudentHead;
      spec.dir = fs::path(rest.substr(0, last));
      spec.head = fs::path(rest.substr(last + 1));
      if (spec.dir.empty()) throw ArgumentError("model spec '" + spec.text + "': student needs a directory");
    } else {
      spec.kind = ModelSpec::Kind::kStudentMaps;
      spec.dir = fs::path(rest);
    }
    return spec;
  }
  throw ArgumentError("model spec '" + spec.text + "': expected ensemble[:<dir>], student:<dir> or student:<dir>:<head.json>");
}

std::vector<ProbabilityMap> middle_member_maps(std::span<const FireEvent> events) {
  const auto middle = middle_member_by_year(events);
  std::vector<ProbabilityMap> out;
  out.reserve(events.size());
  for (const auto& ev : events) out.push_back(ev.members[middle.at(ev.year)]);
  return out;
}

namespace {

// Fires of `other` aligned to `events` by (year, id).
std::vector<const FireEvent*> align(std::span<const FireEvent> events, std::span<const FireEvent> other,
                                    const fs::path& dir) {
  std::map<std::pair<int, std::string>, const FireEvent*> index;
  for (const auto& ev : other) index[{ev.year, ev.id}] = &ev;
  std::vector<const FireEvent*> out;
  for (const auto& ev : events) {
    const auto it = index.find({ev.year, ev.id});
    if (it == index.end()) {
      throw ValidationError(dir.string() + ": missing fire " + std::to_string(ev.year) + "/" + ev.id);
    }
    require_same_shape(ev.gt, it->second->gt, (dir.string() + ": " + ev.id).c_str());
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

std::vector<ModelOutput> resolve_model(const ModelSpec& spec, std::span<const FireEvent> events,
                                       std::span<const ProbabilityMap> middle, const LoadOptions& load,
                                       std::size_t jobs, std::vector<InputSet>& inputs) {
  std::vector<ModelOutput> out(events.size());
  switch (spec.kind) {
    case ModelSpec::Kind::kEnsemble: {
      std::vector<FireEvent> other;
      std::vector<const FireEvent*> source;
      if (spec.dir.empty()) {
        for (const auto& ev : events) source.push_back(&ev);
      } else {
        LoadOptions opts = load;
        opts.load_features = false;
        opts.load_student = false;
        other = load_dataset(spec.dir, opts);
        source = align(events, other, spec.dir);
        inputs.push_back(digest_inputs("model:" + spec.text, spec.dir, ".npy"));
      }
      parallel_for(events.size(), jobs, [&](std::size_t i) {
        if (source[i]->members.size() < 2) {
          throw ValidationError(events[i].id + ": an ensemble needs at least 2 members");
        }
        TeacherOutput t = fuse_ensemble(source[i]->members);
        out[i] = {std::move(t.mean_prob), std::move(t.uncertainty)};
      });
      break;
    }
    case ModelSpec::Kind::kStudentMaps: {
      parallel_for(events.size(), jobs, [&](std::size_t i) {
        const fs::path file = event_dir(spec.dir, events[i]) / "student_unc.npy";
        UncertaintyMap unc = npy::load_uncertainty(file);
        if (load.crop) unc = center_crop(unc, load.crop_size);
        require_same_shape(events[i].gt, unc, file.string().c_str());
        out[i] = {middle[i], std::move(unc)};
      });
      inputs.push_back(digest_inputs("model:" + spec.text, spec.dir, ".npy"));
      break;
    }
    case ModelSpec::Kind::kStudentHead: {
      const UncertaintyHead head = load_checkpoint(spec.head);
      LoadOptions opts = load;
      opts.load_features = true;
      opts.load_student = false;
      opts.min_members = 0;
      const std::vector<FireEvent> other = load_dataset(spec.dir, opts);
      const auto source = align(events, other, spec.dir);
      parallel_for(events.size(), jobs, [&](std::size_t i) {
        if (!source[i]->features) throw ValidationError(events[i].id + ": no cached features");
        out[i] = {middle[i], apply_head(head, *source[i]->features)};
      });
      inputs.push_back(digest_inputs("model:" + spec.text, spec.dir, ".npy"));
      inputs.push_back(digest_inputs("checkpoint", spec.head));
      break;
    }
  }
  return out;
}

}  // namespace fcer::cli
