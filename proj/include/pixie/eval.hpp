/*
 * Copyright 2026 The Pixie Walk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pixie/synth.hpp"
#include "pixie/walk.hpp"

namespace pixie {

// One experiment's output: a table with one row per grid point plus named
// scalar results.
struct EvalReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> summary;
  double runtime_seconds = 0.0;

  // Header line `columns`, then one line per row.
  std::string to_csv() const;
  std::string to_json() const;

  // Throws Error(kEval) when absent.
  double summary_value(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// Statistics

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares; needs at least two distinct x values.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct PairedTest {
  double mean_difference = 0.0;  // mean(b - a)
  double t = 0.0;
  double p_one_sided = 1.0;      // H1: mean(b - a) > 0
};

// Paired Student t-test over equal-length samples (n >= 2).
PairedTest paired_t_test(std::span<const double> a, std::span<const double> b);

struct LinkScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// |R ∩ X| / |R|, |R ∩ X| / |X| and their harmonic mean (0 when both are 0).
LinkScores link_scores(std::span<const NodeId> recommended, std::span<const NodeId> held_out);

// |a ∩ b| / |b|, or 1 when b is empty.
double overlap(std::span<const ScoredPin> a, std::span<const ScoredPin> b);

// `count` distinct non-isolated pins, drawn reproducibly from `seed`.
std::vector<NodeId> sample_query_pins(const BipartiteGraph& graph, std::size_t count,
                                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// Experiments

struct LinkPredConfig {
  SynthConfig synth = noisy_config();
  std::vector<double> deltas{1.0, 0.95, 0.9, 0.85, 0.8, 0.75, 0.7, 0.65, 0.6, 0.55};
  double entropy_quantile = 0.10;
  std::size_t boards = 200;  // sampled evaluation boards
  std::size_t query_len = 20;
  std::size_t top = 100;     // |R|
  WalkConfig walk = default_walk(20'000);
  std::uint64_t seed = 3;

  static WalkConfig default_walk(std::uint64_t steps) {
    WalkConfig w;
    w.total_steps = steps;
    return w;
  }
};

// Columns: delta, edges, precision, recall, f1, boards. Summary: f1 at
// delta = 1 (baseline_f1), best f1 below 1, its delta and relative lift.
EvalReport link_prediction_eval(const LinkPredConfig& cfg);

struct StabilityConfig {
  SynthConfig synth{};
  std::vector<std::uint64_t> steps{10'000, 50'000, 100'000};
  std::vector<std::uint32_t> thresholds{50, 60, 70, 80, 90, 100};
  std::size_t queries = 20;
  std::uint32_t repeats = 100;
  std::uint64_t top = 1000;
  bool reuse_seed = false;  // control: every repeat uses the same seed
  std::uint64_t seed = 5;
};

// Pins appearing in at least K of `repeats` top lists for one query.
std::vector<std::uint64_t> stability_counts(const BipartiteGraph& graph, const WeightedQuery& query,
                                            const WalkConfig& cfg, std::uint32_t repeats,
                                            std::span<const std::uint32_t> thresholds,
                                            std::uint64_t seed, bool reuse_seed);

// Columns: steps, k, mean_pins (averaged over queries). Early stopping is off.
EvalReport stability_eval(const StabilityConfig& cfg);

struct EarlyStopConfig {
  SynthConfig synth{};
  std::size_t queries = 50;
  std::uint64_t steps = 100'000;  // gold standard and budget
  std::vector<std::uint64_t> np_grid{300, 500, 700, 900};
  std::vector<std::uint32_t> nv_grid{2, 3, 4, 6, 8};
  std::uint64_t top = 1000;
  double alpha = 0.5;
  std::uint64_t operating_np = 700;  // reported in the summary
  std::uint32_t operating_nv = 4;
  std::uint64_t seed = 9;
};

// Columns: np, nv, overlap, mean_steps, reduction. Summary: operating point
// overlap and reduction.
EvalReport early_stop_eval(const EarlyStopConfig& cfg);

struct BiasConfig {
  SynthConfig synth = bilingual_config();
  AttributeId source_attr = 1;
  AttributeId target_attr = 2;
  std::vector<double> betas{0.0, 0.5, 0.9};
  std::size_t queries = 50;
  std::uint64_t top = 100;
  WalkConfig walk = LinkPredConfig::default_walk(20'000);
  std::uint64_t seed = 13;
};

// Columns: beta, mean_fraction. Row beta = -1 is the basic walk. Summary:
// paired p-value and ratio between the smallest and largest beta.
EvalReport bias_eval(const BiasConfig& cfg);

struct RuntimeConfig {
  SynthConfig synth{};
  std::vector<std::uint64_t> steps{10'000, 20'000, 30'000, 40'000, 50'000,
                                   60'000, 70'000, 80'000, 90'000, 100'000};
  std::vector<std::size_t> query_sizes{1, 2, 4, 8, 16};
  std::uint64_t fixed_steps = 50'000;  // for the query-size series
  std::size_t queries_per_point = 200;
  std::uint64_t seed = 17;
};

// Columns: steps, query_size, mean_micros. Summary: slope and R² of time
// vs steps, and time at the largest query size relative to |Q| single-pin
// queries.
EvalReport runtime_bench(const RuntimeConfig& cfg);

}  // namespace pixie
