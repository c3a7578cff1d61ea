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

#include "eelab/criteria.hpp"

#include <cmath>
#include <stdexcept>

#include "eelab/metrics.hpp"

namespace eelab {

namespace {
constexpr double kLogEpsilon = 1e-12;      // keeps log() finite
constexpr double kRatioEquality = 1e-9;    // constancy of in-vocab ratios

const PosteriorMatrix& require_posteriors(const UtteranceTrace& trace,
                                          int layer_index) {
  const LayerOutput& layer = trace.layer_at(layer_index);
  if (!layer.posteriors) {
    throw std::runtime_error("layer " + std::to_string(layer_index) +
                             " of utterance " + trace.id +
                             " has no posteriors");
  }
  return *layer.posteriors;
}
}  // namespace

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kConfidenceEntropy: return "confidence_entropy";
    case StrategyKind::kConfidenceMaxProb: return "confidence_maxprob";
    case StrategyKind::kPatienceCe: return "patience_ce";
    case StrategyKind::kPatienceLev: return "patience_lev";
    case StrategyKind::kOverlang: return "overlang";
    case StrategyKind::kFixedLayer: return "fixed_layer";
    case StrategyKind::kCombinedMax: return "combined_max";
  }
  throw std::logic_error("unknown strategy kind");
}

StrategyKind strategy_kind_from_string(std::string_view name) {
  if (name == "confidence_entropy") return StrategyKind::kConfidenceEntropy;
  if (name == "confidence_maxprob") return StrategyKind::kConfidenceMaxProb;
  if (name == "patience_ce") return StrategyKind::kPatienceCe;
  if (name == "patience_lev") return StrategyKind::kPatienceLev;
  if (name == "overlang") return StrategyKind::kOverlang;
  if (name == "fixed_layer") return StrategyKind::kFixedLayer;
  if (name == "combined_max") return StrategyKind::kCombinedMax;
  throw std::invalid_argument("unknown strategy kind: " + std::string(name));
}

double entropy_score(const LayerOutput& layer) {
  if (!layer.posteriors) {
    throw std::runtime_error("layer " + std::to_string(layer.layer_index) +
                             " has no posteriors");
  }
  const PosteriorMatrix& m = *layer.posteriors;
  double sum = 0.0;
  for (double f : m.values) {
    if (f > 0.0) sum += f * std::log(f);
  }
  return -sum / (static_cast<double>(m.num_frames) * m.num_tokens);
}

double maxprob_score(const LayerOutput& layer) {
  if (!layer.posteriors) {
    throw std::runtime_error("layer " + std::to_string(layer.layer_index) +
                             " has no posteriors");
  }
  const PosteriorMatrix& m = *layer.posteriors;
  double sum = 0.0;
  for (int t = 0; t < m.num_frames; ++t) {
    double best = m.at(t, 0);
    for (int c = 1; c < m.num_tokens; ++c) best = std::max(best, m.at(t, c));
    sum += best;
  }
  return sum / m.num_frames;
}

double ce_distance(const PosteriorMatrix& curr, const PosteriorMatrix& prev,
                   bool swap_direction) {
  if (curr.num_frames != prev.num_frames ||
      curr.num_tokens != prev.num_tokens) {
    throw std::invalid_argument("ce_distance: posterior shapes differ");
  }
  const PosteriorMatrix& weights = swap_direction ? curr : prev;
  const PosteriorMatrix& inside = swap_direction ? prev : curr;
  double sum = 0.0;
  for (size_t k = 0; k < weights.values.size(); ++k) {
    sum += weights.values[k] * std::log(inside.values[k] + kLogEpsilon);
  }
  return -sum / weights.num_frames;
}

double lev_distance_norm(std::string_view hyp_curr, std::string_view hyp_prev) {
  const int dist = levenshtein_chars(hyp_curr, hyp_prev);
  const size_t longest = std::max(hyp_curr.size(), hyp_prev.size());
  return static_cast<double>(dist) /
         static_cast<double>(std::max<size_t>(longest, 1));
}

double in_vocab_ratio(std::string_view hyp, const Vocabulary& vocab) {
  const std::vector<std::string> words = split_words(hyp);
  if (words.empty()) return 0.0;
  int in_vocab = 0;
  for (const auto& word : words) {
    if (vocab.contains(word)) ++in_vocab;
  }
  return static_cast<double>(in_vocab) / static_cast<double>(words.size());
}

ScoreNeeds score_needs(const StrategyConfig& config) {
  ScoreNeeds needs;
  switch (config.kind) {
    case StrategyKind::kConfidenceEntropy: needs.entropy = true; break;
    case StrategyKind::kConfidenceMaxProb: needs.maxprob = true; break;
    case StrategyKind::kPatienceCe:
      (config.ce_swap_direction ? needs.ce_dist_swapped : needs.ce_dist) = true;
      break;
    case StrategyKind::kPatienceLev: needs.lev_dist = true; break;
    case StrategyKind::kOverlang: needs.vocab_ratio = true; break;
    case StrategyKind::kFixedLayer: break;
    case StrategyKind::kCombinedMax:
      for (const auto& child : config.children) {
        ScoreNeeds sub = score_needs(child);
        needs.entropy |= sub.entropy;
        needs.maxprob |= sub.maxprob;
        needs.ce_dist |= sub.ce_dist;
        needs.ce_dist_swapped |= sub.ce_dist_swapped;
        needs.lev_dist |= sub.lev_dist;
        needs.vocab_ratio |= sub.vocab_ratio;
      }
      break;
  }
  return needs;
}

LayerScores compute_layer_scores(const UtteranceTrace& trace,
                                 const ScoreNeeds& needs,
                                 const Vocabulary* vocab) {
  LayerScores scores;
  scores.i_min = trace.i_min;
  scores.n_layers = trace.n_layers;
  const int count = trace.exit_layer_count();

  if (needs.entropy || needs.maxprob) {
    for (int i = trace.i_min; i <= trace.n_layers; ++i) {
      const LayerOutput& layer = trace.layer_at(i);
      if (!layer.posteriors) {
        throw std::runtime_error("layer " + std::to_string(i) +
                                 " of utterance " + trace.id +
                                 " has no posteriors");
      }
      if (needs.entropy) scores.entropy.push_back(entropy_score(layer));
      if (needs.maxprob) scores.maxprob.push_back(maxprob_score(layer));
    }
  }
  if (needs.ce_dist || needs.ce_dist_swapped) {
    for (int i = trace.i_min + 1; i <= trace.n_layers; ++i) {
      const PosteriorMatrix& curr = require_posteriors(trace, i);
      const PosteriorMatrix& prev = require_posteriors(trace, i - 1);
      if (needs.ce_dist)
        scores.ce_dist.push_back(ce_distance(curr, prev, false));
      if (needs.ce_dist_swapped)
        scores.ce_dist_swapped.push_back(ce_distance(curr, prev, true));
    }
  }
  if (needs.lev_dist || needs.vocab_ratio) {
    std::vector<std::string> hyps;
    hyps.reserve(count);
    for (int i = trace.i_min; i <= trace.n_layers; ++i) {
      hyps.push_back(hypothesis_for_layer(trace, i));
    }
    if (needs.vocab_ratio) {
      if (vocab == nullptr) {
        throw std::invalid_argument(
            "overlang strategy requires a vocabulary");
      }
      for (const auto& hyp : hyps) {
        scores.vocab_ratio.push_back(in_vocab_ratio(hyp, *vocab));
      }
    }
    if (needs.lev_dist) {
      for (int k = 1; k < count; ++k) {
        scores.lev_dist.push_back(lev_distance_norm(hyps[k], hyps[k - 1]));
      }
    }
  }
  return scores;
}

namespace {

// d(layer j, layer j-1) lives at j - i_min - 1.
bool patience_fires(const std::vector<double>& dist, int i_min, int layer,
                    double tau, int rho) {
  if (layer - rho - 1 < i_min) return false;  // window reaches below i_min
  for (int j = layer - rho; j <= layer; ++j) {
    if (!(dist[j - i_min - 1] < tau)) return false;
  }
  return true;
}

bool overlang_fires(const std::vector<double>& ratio, int i_min, int layer,
                    double tau, int rho) {
  const double w = ratio[layer - i_min];
  if (w >= tau) return true;
  if (layer - rho < i_min) return false;
  double lo = w, hi = w;
  for (int j = layer - rho; j < layer; ++j) {
    lo = std::min(lo, ratio[j - i_min]);
    hi = std::max(hi, ratio[j - i_min]);
  }
  return hi - lo <= kRatioEquality;
}

}  // namespace

bool criterion_fires(const LayerScores& scores, const StrategyConfig& config,
                     int layer) {
  const int k = layer - scores.i_min;
  switch (config.kind) {
    case StrategyKind::kConfidenceEntropy:
      return scores.entropy[k] < config.tau;
    case StrategyKind::kConfidenceMaxProb:
      return scores.maxprob[k] > config.tau;
    case StrategyKind::kPatienceCe:
      return patience_fires(config.ce_swap_direction ? scores.ce_dist_swapped
                                                     : scores.ce_dist,
                            scores.i_min, layer, config.tau, config.rho);
    case StrategyKind::kPatienceLev:
      return patience_fires(scores.lev_dist, scores.i_min, layer, config.tau,
                            config.rho);
    case StrategyKind::kOverlang:
      return overlang_fires(scores.vocab_ratio, scores.i_min, layer,
                            config.tau, config.rho);
    case StrategyKind::kFixedLayer:
      return layer == config.fixed_layer;
    case StrategyKind::kCombinedMax:
      for (const auto& child : config.children) {
        if (criterion_fires(scores, child, layer)) return true;
      }
      return false;
  }
  throw std::logic_error("unknown strategy kind");
}

int exit_layer_from_scores(const LayerScores& scores,
                           const StrategyConfig& config) {
  for (int i = scores.i_min; i <= scores.n_layers; ++i) {
    if (criterion_fires(scores, config, i)) return i;
  }
  return scores.n_layers;  // no layer satisfied the criterion
}

double saved_fraction_for(int n_layers, int exit_layer) {
  return static_cast<double>(n_layers - exit_layer) /
         static_cast<double>(n_layers);
}

namespace {

void check_config(const UtteranceTrace& trace, const StrategyConfig& config) {
  if (config.kind == StrategyKind::kFixedLayer &&
      (config.fixed_layer < trace.i_min ||
       config.fixed_layer > trace.n_layers)) {
    throw std::invalid_argument(
        "fixed_layer " + std::to_string(config.fixed_layer) +
        " outside [" + std::to_string(trace.i_min) + ", " +
        std::to_string(trace.n_layers) + "]");
  }
  if (config.kind == StrategyKind::kCombinedMax) {
    if (config.children.size() < 2) {
      throw std::invalid_argument(
          "combined_max requires at least 2 child strategies");
    }
    for (const auto& child : config.children) check_config(trace, child);
  }
  if ((config.kind == StrategyKind::kPatienceCe ||
       config.kind == StrategyKind::kPatienceLev ||
       config.kind == StrategyKind::kOverlang) &&
      config.rho < 1) {
    throw std::invalid_argument("patience rho must be at least 1");
  }
}

}  // namespace

ExitDecision decide_exit(const UtteranceTrace& trace,
                         const StrategyConfig& config,
                         const Vocabulary* vocab) {
  check_config(trace, config);
  const LayerScores scores =
      compute_layer_scores(trace, score_needs(config), vocab);
  const int exit_layer = exit_layer_from_scores(scores, config);
  return ExitDecision{trace.id, exit_layer,
                      hypothesis_for_layer(trace, exit_layer),
                      saved_fraction_for(trace.n_layers, exit_layer)};
}

ExitDecision confidence_exit(const UtteranceTrace& trace,
                             const StrategyConfig& config) {
  if (config.kind != StrategyKind::kConfidenceEntropy &&
      config.kind != StrategyKind::kConfidenceMaxProb) {
    throw std::invalid_argument("confidence_exit: not a confidence strategy");
  }
  return decide_exit(trace, config);
}

ExitDecision patience_exit(const UtteranceTrace& trace,
                           const StrategyConfig& config) {
  if (config.kind != StrategyKind::kPatienceCe &&
      config.kind != StrategyKind::kPatienceLev) {
    throw std::invalid_argument("patience_exit: not a patience strategy");
  }
  return decide_exit(trace, config);
}

ExitDecision overlang_exit(const UtteranceTrace& trace,
                           const StrategyConfig& config,
                           const Vocabulary& vocab) {
  if (config.kind != StrategyKind::kOverlang) {
    throw std::invalid_argument("overlang_exit: not an overlang strategy");
  }
  return decide_exit(trace, config, &vocab);
}

ExitDecision fixed_layer_exit(const UtteranceTrace& trace, int layer) {
  StrategyConfig config;
  config.kind = StrategyKind::kFixedLayer;
  config.fixed_layer = layer;
  return decide_exit(trace, config);
}

ExitDecision combined_exit(const UtteranceTrace& trace,
                           std::span<const StrategyConfig> children,
                           const Vocabulary* vocab) {
  StrategyConfig config;
  config.kind = StrategyKind::kCombinedMax;
  config.children.assign(children.begin(), children.end());
  return decide_exit(trace, config, vocab);
}

}  // namespace eelab
