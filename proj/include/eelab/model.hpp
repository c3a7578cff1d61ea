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

#ifndef EELAB_MODEL_HPP
#define EELAB_MODEL_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace eelab {

// Character token set used by the per-frame posteriors. Contains one blank
// symbol (CTC) and one word-delimiter symbol that decodes to a space.
struct TokenTable {
  std::vector<std::string> symbols;
  int blank_index = 0;
  int delimiter_index = 0;

  int num_tokens() const { return static_cast<int>(symbols.size()); }

  bool operator==(const TokenTable&) const = default;

  // Blank + delimiter + lowercase a..z.
  static TokenTable default_char_table();
};

// T x C grid of per-frame token probabilities, row-major. Each row is a
// distribution over the token set of the owning trace.
struct PosteriorMatrix {
  int num_frames = 0;  // T
  int num_tokens = 0;  // C
  std::vector<double> values;

  PosteriorMatrix() = default;
  PosteriorMatrix(int frames, int tokens)
      : num_frames(frames),
        num_tokens(tokens),
        values(static_cast<size_t>(frames) * tokens, 0.0) {}

  double at(int t, int c) const {
    return values[static_cast<size_t>(t) * num_tokens + c];
  }
  double& at(int t, int c) {
    return values[static_cast<size_t>(t) * num_tokens + c];
  }
  std::span<const double> row(int t) const {
    return {values.data() + static_cast<size_t>(t) * num_tokens,
            static_cast<size_t>(num_tokens)};
  }

  bool operator==(const PosteriorMatrix&) const = default;
};

// What one exit head produced for one utterance. At least one of
// {posteriors, hypothesis} must be present.
struct LayerOutput {
  int layer_index = 0;
  std::optional<PosteriorMatrix> posteriors;
  std::optional<std::string> hypothesis;

  bool operator==(const LayerOutput&) const = default;
};

// One utterance's reference transcription plus the outputs of every exit
// layer i_min..n_layers. The unit of all analysis.
struct UtteranceTrace {
  std::string id;
  std::string reference;  // lowercase, space-separated words
  int n_layers = 0;       // N
  int i_min = 0;
  TokenTable tokens;
  std::vector<LayerOutput> layers;  // sorted, contiguous i_min..N

  // Lookup by layer index; throws std::out_of_range outside [i_min, N].
  const LayerOutput& layer_at(int layer_index) const;

  int exit_layer_count() const { return n_layers - i_min + 1; }

  bool operator==(const UtteranceTrace&) const = default;
};

// Lowercased word set used by the vocabulary-based exit criterion.
class Vocabulary {
 public:
  // Words are lowercased on construction; throws std::invalid_argument if
  // the resulting set is empty.
  explicit Vocabulary(const std::vector<std::string>& words);

  bool contains(std::string_view word) const;
  size_t size() const { return words_.size(); }

  // Deterministically ordered view of the word set.
  std::vector<std::string> sorted_words() const;

 private:
  std::unordered_set<std::string> words_;
};

struct Corpus {
  int n_layers = 0;
  int i_min = 0;
  std::vector<UtteranceTrace> traces;

  bool operator==(const Corpus&) const = default;
};

// Lowercase ASCII, collapse whitespace runs to single spaces, trim.
std::string normalize_text(std::string_view text);
std::vector<std::string> split_words(std::string_view normalized);
int count_words(std::string_view normalized);

enum class ValidationMode { kStrict, kLenient };

// One broken invariant: which field, and the rule it failed.
struct Violation {
  std::string field;
  std::string message;
};

// Checks every data-model invariant; returns an empty list iff the trace is
// well formed. Strict mode additionally requires that a stored hypothesis
// matches the greedy CTC decode of the stored posteriors.
std::vector<Violation> validate_trace(
    const UtteranceTrace& trace, ValidationMode mode = ValidationMode::kStrict);

}  // namespace eelab

#endif  // EELAB_MODEL_HPP
