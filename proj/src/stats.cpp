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

#include "fcer/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace fcer {

std::string_view to_string(Alternative alternative) {
  return alternative == Alternative::kGreater ? "greater" : "less";
}

std::string_view to_string(WilcoxonMode mode) {
  switch (mode) {
    case WilcoxonMode::kAuto: return "auto";
    case WilcoxonMode::kExact: return "exact";
    case WilcoxonMode::kNormal: return "normal";
  }
  return "";
}

namespace {

struct RankedDiffs {
  std::vector<std::int64_t> doubled_ranks;  // 2 * average rank, aligned with `positive`
  std::vector<bool> positive;
  std::vector<Index> tie_sizes;
};

RankedDiffs rank_abs(const std::vector<double>& nonzero) {
  const std::size_t n = nonzero.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(nonzero[a]) < std::abs(nonzero[b]); });
  RankedDiffs out;
  out.doubled_ranks.resize(n);
  out.positive.resize(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(nonzero[order[j + 1]]) == std::abs(nonzero[order[i]])) ++j;
    // Positions i..j (0-based) share the average of ranks i+1..j+1.
    const auto doubled = static_cast<std::int64_t>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) {
      out.doubled_ranks[order[k]] = doubled;
      out.positive[order[k]] = nonzero[order[k]] > 0.0;
    }
    out.tie_sizes.push_back(static_cast<Index>(j - i + 1));
    i = j + 1;
  }
  return out;
}

double exact_p(const RankedDiffs& ranked, std::int64_t observed_doubled, Alternative alternative) {
  const std::int64_t total = std::accumulate(ranked.doubled_ranks.begin(), ranked.doubled_ranks.end(),
                                             std::int64_t{0});
  // counts[s]: sign assignments whose positive doubled rank sum equals s.
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(total) + 1, 0);
  counts[0] = 1;
  std::int64_t reach = 0;
  for (const std::int64_t r : ranked.doubled_ranks) {
    for (std::int64_t s = reach; s >= 0; --s) {
      if (counts[static_cast<std::size_t>(s)]) counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
    }
    reach += r;
  }
  std::uint64_t tail = 0;
  for (std::int64_t s = 0; s <= total; ++s) {
    const bool in_tail = alternative == Alternative::kGreater ? s >= observed_doubled : s <= observed_doubled;
    if (in_tail) tail += counts[static_cast<std::size_t>(s)];
  }
  return static_cast<double>(tail) / std::ldexp(1.0, static_cast<int>(ranked.doubled_ranks.size()));
}

double normal_p(const RankedDiffs& ranked, double w_plus, Alternative alternative) {
  const auto n = static_cast<double>(ranked.doubled_ranks.size());
  const double mean = n * (n + 1.0) / 4.0;
  double tie_term = 0.0;
  for (const Index t : ranked.tie_sizes) {
    const auto tt = static_cast<double>(t);
    tie_term += tt * tt * tt - tt;
  }
  const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  const double sd = std::sqrt(variance);
  if (alternative == Alternative::kGreater) {
    const double z = (w_plus - mean - 0.5) / sd;
    return 0.5 * std::erfc(z / std::sqrt(2.0));
  }
  const double z = (w_plus - mean + 0.5) / sd;
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs, Alternative alternative, WilcoxonMode mode) {
  WilcoxonResult out;
  out.n_pairs = static_cast<Index>(diffs.size());
  std::vector<double> nonzero;
  for (const double d : diffs) {
    if (!std::isfinite(d)) throw ValidationError("wilcoxon: non-finite difference");
    if (d == 0.0) {
      ++out.n_discarded;
    } else {
      nonzero.push_back(d);
    }
  }
  if (nonzero.empty()) throw DegenerateError("wilcoxon: all paired differences are zero");
  out.n_effective = static_cast<Index>(nonzero.size());

  const RankedDiffs ranked = rank_abs(nonzero);
  std::int64_t plus2 = 0;
  std::int64_t minus2 = 0;
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    (ranked.positive[i] ? plus2 : minus2) += ranked.doubled_ranks[i];
  }
  out.w_plus = static_cast<double>(plus2) / 2.0;
  out.w_minus = static_cast<double>(minus2) / 2.0;

  const bool exact = mode == WilcoxonMode::kExact ||
                     (mode == WilcoxonMode::kAuto && out.n_effective <= kWilcoxonExactCutoff);
  if (exact && out.n_effective > 62) throw ArgumentError("wilcoxon: exact mode supports at most 62 differences");
  out.mode = exact ? WilcoxonMode::kExact : WilcoxonMode::kNormal;
  out.p_value = exact ? exact_p(ranked, plus2, alternative) : normal_p(ranked, out.w_plus, alternative);
  out.p_value = std::clamp(out.p_value, 0.0, 1.0);
  return out;
}

WilcoxonResult wilcoxon_one_sided(std::span<const PairedSample> pairs, Alternative alternative, WilcoxonMode mode) {
  std::vector<double> diffs;
  diffs.reserve(pairs.size());
  for (const auto& p : pairs) diffs.push_back(p.diff());
  return wilcoxon_signed_rank(diffs, alternative, mode);
}

double rank_biserial(double w_plus, double w_minus) {
  if (w_plus < 0.0 || w_minus < 0.0) throw ArgumentError("rank_biserial: rank sums must be >= 0");
  if (w_plus + w_minus == 0.0) throw DegenerateError("rank_biserial: both rank sums are zero");
  return (w_plus - w_minus) / (w_plus + w_minus);
}

}  // namespace fcer
