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

#ifndef EELAB_CRITERIA_HPP
#define EELAB_CRITERIA_HPP

#include <string>
#include <string_view>
#include <vector>

#include "eelab/model.hpp"

namespace eelab {

enum class StrategyKind {
  kConfidenceEntropy,
  kConfidenceMaxProb,
  kPatienceCe,
  kPatienceLev,
  kOverlang,
  kFixedLayer,
  kCombinedMax,
};

std::string to_string(StrategyKind kind);
StrategyKind strategy_kind_from_string(std::string_view name);

// A fully parameterized exit criterion. tau applies to every kind except
// fixed_layer and combined_max; rho to the patience kinds and overlang.
struct StrategyConfig {
  StrategyKind kind = StrategyKind::kFixedLayer;
  double tau = 0.0;
  int rho = 1;
  int fixed_layer = 0;
  std::vector<StrategyConfig> children;  // combined_max only
  // patience_ce only: swap which distribution acts as the weights and which
  // sits inside the log.
  bool ce_swap_direction = false;
};

// The layer a strategy picked for one utterance.
struct ExitDecision {
  std::string utterance_id;
  int exit_layer = 0;
  std::string hypothesis;
  double saved_fraction = 0.0;  // (N - exit_layer) / N
};

// Mean per-entry entropy of the posterior grid, natural log, with
// 0*log(0) := 0. Bounded by ln(C)/C.
double entropy_score(const LayerOutput& layer);

// Mean over frames of the per-frame maximum probability; in [1/C, 1].
double maxprob_score(const LayerOutput& layer);

// Cross-entropy between consecutive layers' posteriors: the previous layer's
// distribution weighs the log of the current one (swap flips the roles), a
// small epsilon keeps the log finite. Averaged over frames.
double ce_distance(const PosteriorMatrix& curr, const PosteriorMatrix& prev,
                   bool swap_direction = false);

// Character-level edit distance normalized by the longer string (1 when one
// side is empty and the other is not; 0 for two empty strings).
double lev_distance_norm(std::string_view hyp_curr, std::string_view hyp_prev);

// Fraction of the hypothesis' words found in the vocabulary; empty -> 0.
double in_vocab_ratio(std::string_view hyp, const Vocabulary& vocab);

// Per-layer values a strategy decision reads. Fields are filled on demand:
// building them fails only when a needed input (posteriors or hypotheses) is
// missing from the trace.
struct LayerScores {
  int i_min = 0;
  int n_layers = 0;
  std::vector<double> entropy;          // layer i_min + k
  std::vector<double> maxprob;          // layer i_min + k
  std::vector<double> ce_dist;          // d(i_min+1+k, i_min+k)
  std::vector<double> ce_dist_swapped;  // same, roles flipped
  std::vector<double> lev_dist;         // d(i_min+1+k, i_min+k)
  std::vector<double> vocab_ratio;      // layer i_min + k
};

// Which score arrays a config (recursively) needs.
struct ScoreNeeds {
  bool entropy = false;
  bool maxprob = false;
  bool ce_dist = false;
  bool ce_dist_swapped = false;
  bool lev_dist = false;
  bool vocab_ratio = false;
};

ScoreNeeds score_needs(const StrategyConfig& config);

LayerScores compute_layer_scores(const UtteranceTrace& trace,
                                 const ScoreNeeds& needs,
                                 const Vocabulary* vocab);

// True iff the criterion allows exit at `layer`. Layers whose patience or
// constancy window would reach below i_min are ineligible for those clauses.
bool criterion_fires(const LayerScores& scores, const StrategyConfig& config,
                     int layer);

// Smallest layer where the criterion fires; N when it never does.
int exit_layer_from_scores(const LayerScores& scores,
                           const StrategyConfig& config);

// Full per-utterance decision. vocab may be null for strategies that do not
// consult one.
ExitDecision decide_exit(const UtteranceTrace& trace,
                         const StrategyConfig& config,
                         const Vocabulary* vocab = nullptr);

ExitDecision confidence_exit(const UtteranceTrace& trace,
                             const StrategyConfig& config);
ExitDecision patience_exit(const UtteranceTrace& trace,
                           const StrategyConfig& config);
ExitDecision overlang_exit(const UtteranceTrace& trace,
                           const StrategyConfig& config,
                           const Vocabulary& vocab);
ExitDecision fixed_layer_exit(const UtteranceTrace& trace, int layer);

// Exit as soon as any child criterion allows it.
ExitDecision combined_exit(const UtteranceTrace& trace,
                           std::span<const StrategyConfig> children,
                           const Vocabulary* vocab = nullptr);

double saved_fraction_for(int n_layers, int exit_layer);

}  // namespace eelab

#endif  // EELAB_CRITERIA_HPP
