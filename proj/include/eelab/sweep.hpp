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

#ifndef EELAB_SWEEP_HPP
#define EELAB_SWEEP_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eelab/criteria.hpp"
#include "eelab/model.hpp"
#include "eelab/oracle.hpp"

namespace eelab {

// One strategy family plus its hyperparameter grid. Combined strategies are
// listed as single fully-specified points (children set, grids empty).
struct GridStrategy {
  StrategyKind kind = StrategyKind::kConfidenceEntropy;
  std::vector<double> taus;
  std::vector<int> rhos;
  std::vector<StrategyConfig> children;  // combined_max only
  bool ce_swap_direction = false;
};

struct SweepSpec {
  std::vector<GridStrategy> strategies;
  int length_filter = 10;
  std::string vocab_path;
  std::string output_path;
};

// The stock grids: entropy tau 0.002..0.006 step 0.0005; max-prob tau
// 0.93..0.97 step 0.005; patience-CE tau {0.1..0.5} x rho {1..5};
// patience-Lev tau {0.05,0.07,0.1,0.15,0.2} x rho {1..5}; overlang tau
// 0.6..0.95 step 0.025 with rho 2. 83 grid points in total.
SweepSpec default_sweep_spec();

SweepSpec parse_sweep_spec(const std::string& json_text);

struct TradeoffRecord {
  std::string strategy;
  std::optional<double> tau;
  std::optional<int> rho;
  double saved_fraction = 0.0;
  double wer = 0.0;
  double mean_exit_layer = 0.0;
  double overthinking_rate = 0.0;
};

struct SweepResult {
  std::vector<TradeoffRecord> records;  // grid points + naive fixed layers
  OracleCurve oracle;
};

// Evaluates every grid point plus the fixed-layer baseline for each layer in
// [i_min, N] on the length-filtered corpus, and computes the optimal bound.
// Records are ordered by (strategy, tau, rho, mean exit layer).
SweepResult run_sweep(const Corpus& corpus, const SweepSpec& spec,
                      const Vocabulary& vocab);

std::string records_to_csv(std::span<const TradeoffRecord> records);
std::string oracle_to_csv(const OracleCurve& curve);

// Writes sweep.csv and oracle.csv into out_dir (created if missing).
// Reruns on identical inputs produce byte-identical files.
void write_report(std::span<const TradeoffRecord> records,
                  const OracleCurve& curve,
                  const std::filesystem::path& out_dir);

// Shortest decimal form that parses back to the same value.
std::string format_double(double value);

}  // namespace eelab

#endif  // EELAB_SWEEP_HPP
