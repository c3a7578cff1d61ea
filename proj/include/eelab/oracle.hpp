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

#ifndef EELAB_ORACLE_HPP
#define EELAB_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eelab/criteria.hpp"
#include "eelab/model.hpp"

namespace eelab {

// Word edit errors of every exit layer's hypothesis for one utterance.
struct LayerErrorProfile {
  std::string utterance_id;
  int ref_len = 0;
  int i_min = 0;
  std::vector<int> errors;  // errors[k] is layer i_min + k

  int n_layers() const { return i_min + static_cast<int>(errors.size()) - 1; }
  int errors_at(int layer) const { return errors[layer - i_min]; }
  int min_errors() const;
};

LayerErrorProfile profile(const UtteranceTrace& trace);
std::vector<LayerErrorProfile> corpus_profiles(const Corpus& corpus);

// Some layer before the last is at least as good as the last.
bool overthinks(const LayerErrorProfile& profile);

// Smallest layer achieving the minimum error count.
int first_best_layer(const LayerErrorProfile& profile);

// Fraction of utterances that overthink.
double overthinking_fraction(std::span<const LayerErrorProfile> profiles);

// Among utterances reaching their best prediction before the last layer, the
// fraction whose last layer is strictly worse than that best. Undefined
// (nullopt) when no utterance reaches its best early.
std::optional<double> degradation_rate(
    std::span<const LayerErrorProfile> profiles);
std::optional<double> degradation_rate(const Corpus& corpus);

// Best reachable speed/quality trade-offs: for every total budget of skipped
// layers, the minimum total word errors any exit assignment can achieve.
struct OracleCurve {
  struct Point {
    int64_t budget = 0;            // total layers skipped across utterances
    int64_t min_total_errors = 0;  // optimal total word edit errors
    double wer = 0.0;              // min_total_errors / total reference words
    double saved_fraction = 0.0;   // budget / (M * N)
  };
  std::vector<Point> points;  // one per budget 0..M*(N-i_min)
};

// Multiple-choice knapsack DP over utterances x cumulative skipped layers.
// Each utterance independently picks an exit layer in [i_min, N]; budgets are
// exact totals of skipped layers. Only references longer than length_filter
// words participate; an empty filtered corpus is an error.
OracleCurve dp_optimal_bound(const Corpus& corpus, int length_filter = 10);
OracleCurve dp_optimal_bound(std::span<const LayerErrorProfile> profiles,
                             int n_layers, int i_min, int length_filter);

// Budget indices [0, decrease_end] form the strictly-decreasing WER prefix
// (empty when decrease_end == 0 and the curve does not drop at all);
// [plateau_begin, plateau_end] is the maximal run of points within 1e-6 of
// the curve's minimum WER. Derived annotations, not asserted properties.
struct CurvePhases {
  size_t decrease_end = 0;
  size_t plateau_begin = 0;
  size_t plateau_end = 0;
};

CurvePhases annotate_phases(const OracleCurve& curve);

// Fraction of utterances for which some layer before the chosen exit was at
// least as good as the exit layer itself. Decisions must cover every profile.
double strategy_overthinking_rate(std::span<const LayerErrorProfile> profiles,
                                  std::span<const ExitDecision> decisions);
double strategy_overthinking_rate(const Corpus& corpus,
                                  std::span<const ExitDecision> decisions);

struct TradeoffPoint {
  double saved_fraction = 0.0;
  double wer = 0.0;
};

// Mean saved fraction and micro WER of the chosen exits over the filtered
// corpus.
TradeoffPoint tradeoff_point(std::span<const LayerErrorProfile> profiles,
                             std::span<const ExitDecision> decisions,
                             int n_layers, int length_filter);
TradeoffPoint tradeoff_point(const Corpus& corpus,
                             std::span<const ExitDecision> decisions,
                             int length_filter = 10);

}  // namespace eelab

#endif  // EELAB_ORACLE_HPP
