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

#ifndef EELAB_METRICS_HPP
#define EELAB_METRICS_HPP

#include <algorithm>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eelab/model.hpp"

namespace eelab {

// Best-path CTC decode: per-frame argmax, collapse consecutive repeats,
// drop blanks, map delimiter tokens to single spaces, trim. Ties in a frame
// resolve to the lowest token index.
std::string ctc_greedy_decode(const PosteriorMatrix& posteriors,
                              const TokenTable& tokens);

// Minimal number of unit-cost insertions, deletions and substitutions
// transforming a into b. Two-row DP; units compared with ==.
template <typename Seq>
int levenshtein(const Seq& a, const Seq& b) {
  const size_t len_a = a.size(), len_b = b.size();
  std::vector<int> prev(len_b + 1), curr(len_b + 1);
  for (size_t j = 0; j <= len_b; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 0; i < len_a; ++i) {
    curr[0] = static_cast<int>(i) + 1;
    for (size_t j = 0; j < len_b; ++j) {
      curr[j + 1] = std::min({curr[j] + 1, prev[j + 1] + 1,
                              prev[j] + (a[i] == b[j] ? 0 : 1)});
    }
    std::swap(prev, curr);
  }
  return prev[len_b];
}

int levenshtein_chars(std::string_view a, std::string_view b);
int levenshtein_words(std::span<const std::string> a,
                      std::span<const std::string> b);

struct WordErrorCount {
  int errors = 0;
  int ref_len = 0;

  bool operator==(const WordErrorCount&) const = default;
};

// Word-level edit errors between hypothesis and reference; both texts must
// already be normalized.
WordErrorCount word_errors(std::string_view hyp, std::string_view ref);

// errors / max(ref_len, 1); an empty reference with an empty hypothesis
// scores 0, with a non-empty hypothesis the insertions count against 1.
double utterance_wer(const WordErrorCount& count);

// Micro-average: total errors / total reference words over (hyp, ref) pairs.
// Throws std::invalid_argument on an empty list.
double corpus_wer(std::span<const std::pair<std::string, std::string>> pairs);
double corpus_wer(std::span<const WordErrorCount> counts);

// Mean of per-utterance WERs, offered as a report alternative.
double corpus_wer_macro(std::span<const WordErrorCount> counts);

// Stored hypothesis if present, else the greedy decode of the layer's
// posteriors. Throws std::runtime_error when the layer carries neither.
std::string hypothesis_for_layer(const UtteranceTrace& trace, int layer_index);

}  // namespace eelab

#endif  // EELAB_METRICS_HPP
