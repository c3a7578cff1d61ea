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

#ifndef EELAB_TRACE_IO_HPP
#define EELAB_TRACE_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "eelab/model.hpp"

namespace eelab {

// Reads a whole file; gzip-compressed inputs are decompressed transparently.
std::string read_file(const std::filesystem::path& path);

// Trace JSONL: one utterance per line,
//   {"id": str, "reference": str, "n_layers": int, "i_min": int,
//    "tokens": {"symbols": [str], "blank": int, "delimiter": int},
//    "layers": [{"i": int, "hyp": str|null, "posteriors": [[num]]|null}]}
// Reference and hypothesis text is normalized on load. Parse errors report
// the line number. Strict mode rejects the file on any validation failure;
// lenient mode drops offending traces with a warning on stderr.
Corpus load_corpus(const std::filesystem::path& path,
                   ValidationMode mode = ValidationMode::kStrict);

// Parse only, no validation or corpus-level checks; for diagnostic tools.
std::vector<UtteranceTrace> parse_trace_jsonl(const std::string& content);

std::string trace_to_json_line(const UtteranceTrace& trace);

// Plain JSONL, one line per trace, in corpus order. Deterministic: equal
// corpora serialize to identical bytes.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// One word per line, UTF-8, lowercased; blank lines ignored.
Vocabulary load_vocabulary(const std::filesystem::path& path);

}  // namespace eelab

#endif  // EELAB_TRACE_IO_HPP
