// Copyright 2026 The eelab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eelab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "eelab/metrics.hpp"
#include "eelab/parallel.hpp"

namespace eelab {

namespace {
constexpr int64_t kUnreachable = std::numeric_limits<int64_t>::max() / 4;
constexpr double kPlateauTolerance = 1e-6;

std::vector<const LayerErrorProfile*> filter_profiles(
    std::span<const LayerErrorProfile> profiles, int length_filter) {
  std::vector<const LayerErrorProfile*> kept;
  for (const auto& p : profiles) {
    if (p.ref_len > length_filter) kept.push_back(&p);
  }
  return kept;
}

const ExitDecision& decision_for(
    const std::unordered_map<std::string, const ExitDecision*>& by_id,
    const std::string& utterance_id) {
  auto it = by_id.find(utterance_id);
  if (it == by_id.end()) {
    throw std::invalid_argument("no exit decision for utterance " +
                                utterance_id);
  }
  return *it->second;
}

std::unordered_map<std::string, const ExitDecision*> index_decisions(
    std::span<const ExitDecision> decisions) {
  std::unordered_map<std::string, const ExitDecision*> by_id;
  by_id.reserve(decisions.size());
  for (const auto& d : decisions) by_id[d.utterance_id] = &d;
  return by_id;
}

}  // namespace

int LayerErrorProfile::min_errors() const {
  return *std::min_element(errors.begin(), errors.end());
}

LayerErrorProfile profile(const UtteranceTrace& trace) {
  LayerErrorProfile result;
  result.utterance_id = trace.id;
  result.i_min = trace.i_min;
  result.errors.reserve(trace.exit_layer_count());
  int ref_len = 0;
  for (int i = trace.i_min; i <= trace.n_layers; ++i) {
    WordErrorCount count = word_errors(hypothesis_for_layer(trace, i),
                                       trace.reference);
    result.errors.push_back(count.errors);
    ref_len = count.ref_len;
  }
  result.ref_len = ref_len;
  return result;
}

std::vector<LayerErrorProfile> corpus_profiles(const Corpus& corpus) {
  std::vector<LayerErrorProfile> profiles(corpus.traces.size());
  parallel_for(corpus.traces.size(),
               [&](size_t i) { profiles[i] = profile(corpus.traces[i]); });
  return profiles;
}

bool overthinks(const LayerErrorProfile& profile) {
  const int last = profile.errors.back();
  for (size_t k = 0; k + 1 < profile.errors.size(); ++k) {
    if (profile.errors[k] <= last) return true;
  }
  return false;
}

int first_best_layer(const LayerErrorProfile& profile) {
  const int best = profile.min_errors();
  for (size_t k = 0; k < profile.errors.size(); ++k) {
    if (profile.errors[k] == best) return profile.i_min + static_cast<int>(k);
  }
  return profile.n_layers();
}

double overthinking_fraction(std::span<const LayerErrorProfile> profiles) {
  if (profiles.empty()) {
    throw std::invalid_argument("overthinking_fraction: empty corpus");
  }
  int64_t count = 0;
  for (const auto& p : profiles) count += overthinks(p) ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(profiles.size());
}

std::optional<double> degradation_rate(
    std::span<const LayerErrorProfile> profiles) {
  int64_t early_best = 0;
  int64_t degraded = 0;
  for (const auto& p : profiles) {
    if (first_best_layer(p) < p.n_layers()) {
      ++early_best;
      if (p.errors.back() > p.min_errors()) ++degraded;
    }
  }
  if (early_best == 0) return std::nullopt;
  return static_cast<double>(degraded) / static_cast<double>(early_best);
}

std::optional<double> degradation_rate(const Corpus& corpus) {
  const auto profiles = corpus_profiles(corpus);
  return degradation_rate(profiles);
}

OracleCurve dp_optimal_bound(std::span<const LayerErrorProfile> profiles,
                             int n_layers, int i_min, int length_filter) {
  const auto kept = filter_profiles(profiles, length_filter);
  if (kept.empty()) {
    throw std::invalid_argument(
        "dp_optimal_bound: no utterances left after length filter " +
        std::to_string(length_filter));
  }
  const int choices = n_layers - i_min + 1;  // skip counts 0..choices-1
  const int64_t max_budget =
      static_cast<int64_t>(kept.size()) * (choices - 1);
  int64_t total_ref_len = 0;
  for (const auto* p : kept) total_ref_len += p->ref_len;

  // dp[s] = minimal total errors over the utterances seen so far whose
  // skipped-layer counts sum to exactly s. Exit at layer N - w skips w.
  std::vector<int64_t> dp(max_budget + 1, kUnreachable);
  std::vector<int64_t> next(max_budget + 1, kUnreachable);
  dp[0] = 0;
  int64_t reach = 0;  // largest reachable budget so far
  for (const auto* p : kept) {
    std::fill(next.begin(), next.begin() + reach + choices, kUnreachable);
    for (int64_t s = 0; s <= reach; ++s) {
      if (dp[s] == kUnreachable) continue;
      for (int w = 0; w < choices; ++w) {
        const int64_t cost = dp[s] + p->errors_at(n_layers - w);
        int64_t& slot = next[s + w];
        if (cost < slot) slot = cost;
      }
    }
    reach += choices - 1;
    dp.swap(next);
  }

  OracleCurve curve;
  curve.points.reserve(max_budget + 1);
  const double denom_layers =
      static_cast<double>(kept.size()) * static_cast<double>(n_layers);
  for (int64_t s = 0; s <= max_budget; ++s) {
    OracleCurve::Point point;
    point.budget = s;
    point.min_total_errors = dp[s];
    point.wer = static_cast<double>(dp[s]) /
                static_cast<double>(std::max<int64_t>(total_ref_len, 1));
    point.saved_fraction = static_cast<double>(s) / denom_layers;
    curve.points.push_back(point);
  }
  return curve;
}

OracleCurve dp_optimal_bound(const Corpus& corpus, int length_filter) {
  const auto profiles = corpus_profiles(corpus);
  return dp_optimal_bound(profiles, corpus.n_layers, corpus.i_min,
                          length_filter);
}

CurvePhases annotate_phases(const OracleCurve& curve) {
  CurvePhases phases;
  const auto& pts = curve.points;
  if (pts.empty()) return phases;

  size_t k = 0;
  while (k + 1 < pts.size() && pts[k + 1].wer < pts[k].wer) ++k;
  phases.decrease_end = k;

  double min_wer = pts[0].wer;
  for (const auto& p : pts) min_wer = std::min(min_wer, p.wer);
  size_t begin = 0;
  size_t end = 0;
  size_t best_begin = 0, best_end = 0;
  bool in_run = false;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].wer - min_wer <= kPlateauTolerance) {
      if (!in_run) {
        begin = i;
        in_run = true;
      }
      end = i;
      if (end - begin >= best_end - best_begin) {
        best_begin = begin;
        best_end = end;
      }
    } else {
      in_run = false;
    }
  }
  phases.plateau_begin = best_begin;
  phases.plateau_end = best_end;
  return phases;
}

double strategy_overthinking_rate(std::span<const LayerErrorProfile> profiles,
                                  std::span<const ExitDecision> decisions) {
  if (profiles.empty()) {
    throw std::invalid_argument("strategy_overthinking_rate: empty corpus");
  }
  const auto by_id = index_decisions(decisions);
  int64_t count = 0;
  for (const auto& p : profiles) {
    const ExitDecision& decision = decision_for(by_id, p.utterance_id);
    const int exit_errors = p.errors_at(decision.exit_layer);
    for (int i = p.i_min; i < decision.exit_layer; ++i) {
      if (p.errors_at(i) <= exit_errors) {
        ++count;
        break;
      }
    }
  }
  return static_cast<double>(count) / static_cast<double>(profiles.size());
}

double strategy_overthinking_rate(const Corpus& corpus,
                                  std::span<const ExitDecision> decisions) {
  const auto profiles = corpus_profiles(corpus);
  return strategy_overthinking_rate(profiles, decisions);
}

TradeoffPoint tradeoff_point(std::span<const LayerErrorProfile> profiles,
                             std::span<const ExitDecision> decisions,
                             int n_layers, int length_filter) {
  const auto kept = filter_profiles(profiles, length_filter);
  if (kept.empty()) {
    throw std::invalid_argument(
        "tradeoff_point: no utterances left after length filter " +
        std::to_string(length_filter));
  }
  const auto by_id = index_decisions(decisions);
  int64_t total_skipped = 0;
  int64_t total_errors = 0;
  int64_t total_ref_len = 0;
  for (const auto* p : kept) {
    const ExitDecision& decision = decision_for(by_id, p->utterance_id);
    total_skipped += n_layers - decision.exit_layer;
    total_errors += p->errors_at(decision.exit_layer);
    total_ref_len += p->ref_len;
  }
  TradeoffPoint point;
  point.saved_fraction =
      static_cast<double>(total_skipped) /
      (static_cast<double>(kept.size()) * static_cast<double>(n_layers));
  point.wer = static_cast<double>(total_errors) /
              static_cast<double>(std::max<int64_t>(total_ref_len, 1));
  return point;
}

TradeoffPoint tradeoff_point(const Corpus& corpus,
                             std::span<const ExitDecision> decisions,
                             int length_filter) {
  const auto profiles = corpus_profiles(corpus);
  return tradeoff_point(profiles, decisions, corpus.n_layers, length_filter);
}

}  // namespace eelab
