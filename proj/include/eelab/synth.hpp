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

#ifndef EELAB_SYNTH_HPP
#define EELAB_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "eelab/model.hpp"

namespace eelab {

// Controls the deterministic trace generator. References are sampled from
// the vocabulary; layer i's hypothesis is the reference corrupted at
// per-character rate base_error_rate * (1 - improvement_rate)^(i - i_min),
// re-corrupted at degrade_rate above degrade_after. Posterior sharpness per
// layer comes from the schedule (0 = flat rows, 1 = near one-hot).
struct SynthParams {
  uint64_t seed = 0;
  int n_utterances = 0;
  int n_layers = 24;
  int i_min = 10;
  Vocabulary vocab;
  std::pair<int, int> ref_len_range{4, 12};
  double base_error_rate = 0.35;
  double improvement_rate = 0.30;
  std::optional<int> degrade_after;
  double degrade_rate = 0.0;
  std::vector<double> sharpness_schedule;  // empty -> default schedule
};

// Geometric approach towards one-hot rows: 1 - 0.5 * 0.72^(i - i_min).
// Spreads confidence scores across the deeper half of the stack.
std::vector<double> default_sharpness_schedule(int i_min, int n_layers);

// Throws std::invalid_argument describing the first inconsistency.
void validate_params(const SynthParams& params);

// Deterministic per (params.seed, index); generate_corpus is the
// concatenation of these for index 0..n_utterances-1.
UtteranceTrace generate_utterance(const SynthParams& params, int index);

Corpus generate_corpus(const SynthParams& params);

}  // namespace eelab

#endif  // EELAB_SYNTH_HPP
