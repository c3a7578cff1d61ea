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

#include "eelab/model.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "eelab/metrics.hpp"

namespace eelab {

namespace {
constexpr double kRowSumTolerance = 1e-4;  // absorbs float32 serialization
}

TokenTable TokenTable::default_char_table() {
  TokenTable table;
  table.symbols.push_back("<blank>");
  table.symbols.push_back("|");
  for (char c = 'a'; c <= 'z'; ++c) table.symbols.push_back(std::string(1, c));
  table.blank_index = 0;
  table.delimiter_index = 1;
  return table;
}

const LayerOutput& UtteranceTrace::layer_at(int layer_index) const {
  if (layer_index < i_min || layer_index > n_layers) {
    throw std::out_of_range("layer " + std::to_string(layer_index) +
                            " outside [" + std::to_string(i_min) + ", " +
                            std::to_string(n_layers) + "] for utterance " +
                            id);
  }
  return layers[layer_index - i_min];
}

Vocabulary::Vocabulary(const std::vector<std::string>& words) {
  for (const auto& word : words) {
    std::string normalized = normalize_text(word);
    if (!normalized.empty()) words_.insert(std::move(normalized));
  }
  if (words_.empty()) {
    throw std::invalid_argument("vocabulary is empty");
  }
}

bool Vocabulary::contains(std::string_view word) const {
  return words_.find(std::string(word)) != words_.end();
}

std::vector<std::string> Vocabulary::sorted_words() const {
  std::vector<std::string> out(words_.begin(), words_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char raw : text) {
    unsigned char c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::vector<std::string> split_words(std::string_view normalized) {
  std::vector<std::string> words;
  size_t start = 0;
  while (start < normalized.size()) {
    size_t space = normalized.find(' ', start);
    if (space == std::string_view::npos) space = normalized.size();
    if (space > start) words.emplace_back(normalized.substr(start, space - start));
    start = space + 1;
  }
  return words;
}

int count_words(std::string_view normalized) {
  if (normalized.empty()) return 0;
  int count = 1;
  for (char c : normalized)
    if (c == ' ') ++count;
  return count;
}

namespace {

void check_token_table(const TokenTable& tokens,
                       std::vector<Violation>& violations) {
  if (tokens.num_tokens() < 2) {
    violations.push_back({"tokens.symbols", "token set must contain at least 2 symbols"});
  }
  std::set<std::string> seen(tokens.symbols.begin(), tokens.symbols.end());
  if (seen.size() != tokens.symbols.size()) {
    violations.push_back({"tokens.symbols", "symbols are not unique"});
  }
  if (tokens.blank_index < 0 || tokens.blank_index >= tokens.num_tokens()) {
    violations.push_back({"tokens.blank_index", "blank index out of range"});
  }
  if (tokens.delimiter_index < 0 ||
      tokens.delimiter_index >= tokens.num_tokens()) {
    violations.push_back({"tokens.delimiter_index", "delimiter index out of range"});
  }
  if (tokens.blank_index == tokens.delimiter_index) {
    violations.push_back({"tokens", "blank and delimiter must be distinct symbols"});
  }
}

bool check_posteriors(const PosteriorMatrix& m, const std::string& field,
                      int expected_tokens, std::vector<Violation>& violations) {
  bool usable = true;
  if (m.num_frames < 1) {
    violations.push_back({field, "posterior matrix must have at least one frame"});
    usable = false;
  }
  if (expected_tokens > 0 && m.num_tokens != expected_tokens) {
    violations.push_back(
        {field, "posterior width " + std::to_string(m.num_tokens) +
                    " does not match token set size " +
                    std::to_string(expected_tokens)});
    usable = false;
  }
  if (m.values.size() !=
      static_cast<size_t>(m.num_frames) * static_cast<size_t>(m.num_tokens)) {
    violations.push_back({field, "posterior storage size does not match T x C"});
    return false;
  }
  for (int t = 0; t < m.num_frames; ++t) {
    double sum = 0.0;
    bool row_ok = true;
    for (int c = 0; c < m.num_tokens; ++c) {
      double v = m.at(t, c);
      if (!(v >= 0.0 && v <= 1.0)) {
        violations.push_back({field + ".row[" + std::to_string(t) + "]",
                              "probability outside [0, 1]"});
        row_ok = false;
        usable = false;
        break;
      }
      sum += v;
    }
    if (row_ok && std::abs(sum - 1.0) > kRowSumTolerance) {
      std::ostringstream msg;
      msg << "row sums to " << sum << ", expected 1 within " << kRowSumTolerance;
      violations.push_back({field + ".row[" + std::to_string(t) + "]", msg.str()});
      usable = false;
    }
  }
  return usable;
}

}  // namespace

std::vector<Violation> validate_trace(const UtteranceTrace& trace,
                                      ValidationMode mode) {
  std::vector<Violation> violations;
  check_token_table(trace.tokens, violations);

  if (trace.i_min < 1) {
    violations.push_back({"i_min", "i_min must be at least 1"});
  }
  if (trace.i_min > trace.n_layers) {
    violations.push_back({"i_min", "i_min exceeds n_layers"});
  }
  if (trace.reference != normalize_text(trace.reference)) {
    violations.push_back({"reference", "reference is not normalized text"});
  }

  const int expected = trace.n_layers - trace.i_min + 1;
  if (static_cast<int>(trace.layers.size()) != expected) {
    violations.push_back(
        {"layers", "expected " + std::to_string(expected) + " layers (" +
                       std::to_string(trace.i_min) + ".." +
                       std::to_string(trace.n_layers) + "), found " +
                       std::to_string(trace.layers.size())});
  }
  for (size_t k = 0; k < trace.layers.size(); ++k) {
    int want = trace.i_min + static_cast<int>(k);
    if (trace.layers[k].layer_index != want) {
      violations.push_back(
          {"layers[" + std::to_string(k) + "].layer_index",
           "expected contiguous index " + std::to_string(want) + ", found " +
               std::to_string(trace.layers[k].layer_index)});
    }
  }

  int shared_frames = -1;
  int shared_tokens = -1;
  for (size_t k = 0; k < trace.layers.size(); ++k) {
    const LayerOutput& layer = trace.layers[k];
    const std::string field = "layers[" + std::to_string(k) + "]";
    if (!layer.posteriors && !layer.hypothesis) {
      violations.push_back(
          {field, "layer carries neither posteriors nor a hypothesis"});
      continue;
    }
    if (layer.hypothesis &&
        *layer.hypothesis != normalize_text(*layer.hypothesis)) {
      violations.push_back({field + ".hypothesis", "hypothesis is not normalized text"});
    }
    if (!layer.posteriors) continue;

    bool usable = check_posteriors(*layer.posteriors, field + ".posteriors",
                                   trace.tokens.num_tokens(), violations);
    if (shared_frames == -1) {
      shared_frames = layer.posteriors->num_frames;
      shared_tokens = layer.posteriors->num_tokens;
    } else if (layer.posteriors->num_frames != shared_frames ||
               layer.posteriors->num_tokens != shared_tokens) {
      violations.push_back(
          {field + ".posteriors",
           "shape differs from other layers of the same trace"});
      usable = false;
    }
    if (usable && layer.hypothesis && mode == ValidationMode::kStrict) {
      std::string decoded = ctc_greedy_decode(*layer.posteriors, trace.tokens);
      if (decoded != *layer.hypothesis) {
        violations.push_back(
            {field + ".hypothesis",
             "hypothesis \"" + *layer.hypothesis +
                 "\" does not match greedy decode \"" + decoded + "\""});
      }
    }
  }
  return violations;
}

}  // namespace eelab
