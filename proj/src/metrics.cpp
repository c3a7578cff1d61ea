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

#include "eelab/metrics.hpp"

#include <stdexcept>

namespace eelab {

std::string ctc_greedy_decode(const PosteriorMatrix& posteriors,
                              const TokenTable& tokens) {
  std::vector<int> path;
  path.reserve(posteriors.num_frames);
  for (int t = 0; t < posteriors.num_frames; ++t) {
    int best = 0;
    double best_p = posteriors.at(t, 0);
    for (int c = 1; c < posteriors.num_tokens; ++c) {
      double p = posteriors.at(t, c);
      if (p > best_p) {
        best_p = p;
        best = c;
      }
    }
    path.push_back(best);
  }

  // Collapse repeats, then drop blanks.
  std::string out;
  int prev = -1;
  for (int token : path) {
    if (token == prev) continue;
    prev = token;
    if (token == tokens.blank_index) continue;
    if (token == tokens.delimiter_index) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
      continue;
    }
    out += tokens.symbols[token];
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

int levenshtein_chars(std::string_view a, std::string_view b) {
  return levenshtein(a, b);
}

int levenshtein_words(std::span<const std::string> a,
                      std::span<const std::string> b) {
  return levenshtein(a, b);
}

WordErrorCount word_errors(std::string_view hyp, std::string_view ref) {
  const std::vector<std::string> hyp_words = split_words(hyp);
  const std::vector<std::string> ref_words = split_words(ref);
  return {levenshtein(hyp_words, ref_words),
          static_cast<int>(ref_words.size())};
}

double utterance_wer(const WordErrorCount& count) {
  return static_cast<double>(count.errors) / std::max(count.ref_len, 1);
}

double corpus_wer(std::span<const WordErrorCount> counts) {
  if (counts.empty()) {
    throw std::invalid_argument("corpus_wer: no utterances to score");
  }
  int64_t total_errors = 0;
  int64_t total_ref = 0;
  for (const auto& c : counts) {
    total_errors += c.errors;
    total_ref += c.ref_len;
  }
  return static_cast<double>(total_errors) /
         static_cast<double>(std::max<int64_t>(total_ref, 1));
}

double corpus_wer(std::span<const std::pair<std::string, std::string>> pairs) {
  if (pairs.empty()) {
    throw std::invalid_argument("corpus_wer: no utterances to score");
  }
  std::vector<WordErrorCount> counts;
  counts.reserve(pairs.size());
  for (const auto& [hyp, ref] : pairs) counts.push_back(word_errors(hyp, ref));
  return corpus_wer(counts);
}

double corpus_wer_macro(std::span<const WordErrorCount> counts) {
  if (counts.empty()) {
    throw std::invalid_argument("corpus_wer_macro: no utterances to score");
  }
  double sum = 0.0;
  for (const auto& c : counts) sum += utterance_wer(c);
  return sum / static_cast<double>(counts.size());
}

std::string hypothesis_for_layer(const UtteranceTrace& trace,
                                 int layer_index) {
  const LayerOutput& layer = trace.layer_at(layer_index);
  if (layer.hypothesis) return *layer.hypothesis;
  if (layer.posteriors) return ctc_greedy_decode(*layer.posteriors, trace.tokens);
  throw std::runtime_error("layer " + std::to_string(layer_index) +
                           " of utterance " + trace.id +
                           " carries neither posteriors nor a hypothesis");
}

}  // namespace eelab
