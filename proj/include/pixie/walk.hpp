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
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "pixie/graph.hpp"
#include "pixie/rng.hpp"
#include "pixie/visit_counter.hpp"

namespace pixie {

struct WalkConfig {
  // n_v value that no walk can reach; disables early stopping.
  static constexpr std::uint32_t kNeverStop = std::numeric_limits<std::uint32_t>::max();

  double alpha = 0.5;                     // walk length ~ Geometric(alpha) on {1,2,...}
  std::uint64_t total_steps = 100'000;    // N, counted in pin visits
  std::uint64_t early_stop_pins = 2'000;  // n_p
  std::uint32_t early_stop_visits = 4;    // n_v
  double bias_strength = 0.0;             // beta
  std::uint32_t max_walk_length = 100;    // per-segment cap
  std::uint64_t top_k = 1'000;

  // Throws Error(kConfig) on out-of-range fields.
  void validate() const;

  WalkConfig without_early_stop() const {
    WalkConfig c = *this;
    c.early_stop_visits = kNeverStop;
    return c;
  }
};

struct QueryEntry {
  NodeId pin;
  double weight;
};

struct WeightedQuery {
  std::vector<QueryEntry> entries;
  UserFeatures user;

  static WeightedQuery single(NodeId pin, UserFeatures user = {}) {
    return WeightedQuery{{{pin, 1.0}}, std::move(user)};
  }
};

struct WalkStats {
  std::uint64_t steps_used = 0;
  bool early_stopped = false;

  bool operator==(const WalkStats&) const = default;
};

struct ScoredPin {
  NodeId pin;
  double score;

  bool operator==(const ScoredPin&) const = default;
};

// Sorted by (score desc, pin asc).
struct RankedResult {
  std::vector<ScoredPin> items;
  WalkStats stats;

  bool operator==(const RankedResult&) const = default;
};

using ScoreMap = std::unordered_map<NodeId, double>;

// min(L, cap) with P(L = l) = alpha (1 - alpha)^(l - 1).
std::uint32_t sample_walk_length(double alpha, Rng& rng, std::uint32_t cap);

// Segments restart at q until at least cfg.total_steps pin visits have been
// recorded; both hops sample uniformly. Early-stop and bias fields of `cfg`
// are ignored. `visits` is reset first.
WalkStats basic_random_walk(const BipartiteGraph& graph, NodeId q, const WalkConfig& cfg,
                            Rng& rng, VisitCounter& visits);

// Walks with biased hops and stops at the first segment boundary where
// `budget` is spent or more than n_p pins have reached n_v visits.
WalkStats pixie_random_walk(const BipartiteGraph& graph, NodeId q, const UserFeatures& user,
                            const WalkConfig& cfg, std::uint64_t budget, Rng& rng,
                            VisitCounter& visits);

// deg * (C - ln deg); clamps to deg * 1e-6 when ln deg >= C.
double scaling_factor(std::uint64_t degree, std::uint64_t max_pin_degree);

struct StepRequest {
  NodeId pin;
  double weight;
  std::uint64_t degree;
};

// Splits `total_steps` across the query proportionally to weight times
// scaling factor. Every pin gets at least one step and the result sums to
// `total_steps` exactly; leftovers go one by one in descending
// weight*scale order (ties by pin ID).
std::vector<std::uint64_t> allocate_steps(std::span<const StepRequest> requests,
                                          std::uint64_t max_pin_degree,
                                          std::uint64_t total_steps);
std::vector<std::uint64_t> allocate_steps(const WeightedQuery& query, const BipartiteGraph& graph,
                                          std::uint64_t total_steps);

// Accumulates per-query-pin counters into (sum_q sqrt V_q[p])^2. A pin seen by
// a single counter keeps its exact integer count.
class CountCombiner {
 public:
  explicit CountCombiner(std::uint64_t expected_keys = 16) { reset(expected_keys); }

  void reset(std::uint64_t expected_keys);
  void add(const VisitCounter& counter);

  std::uint64_t size() const { return size_; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t i = 0; i < capacity_; ++i) {
      const Slot& s = slots_[i];
      if (s.key != kInvalidNode) fn(s.key, score_of(s));
    }
  }

  ScoreMap to_map() const;

 private:
  struct Slot {
    NodeId key;
    std::uint32_t hits;
    std::uint64_t raw;
    double root_sum;
  };

  static double score_of(const Slot& s) {
    return s.hits == 1 ? static_cast<double>(s.raw) : s.root_sum * s.root_sum;
  }
  Slot& slot_for(NodeId key);
  void grow();
  void rehash(std::uint64_t capacity);

  std::vector<Slot> slots_;
  std::uint64_t capacity_ = 0;
  int shift_ = 64;
  std::uint64_t size_ = 0;
  std::vector<VisitCounter::Entry> entry_buf_;
  std::vector<std::uint32_t> count_buf_;
  std::vector<double> root_buf_;
};

ScoreMap combine_counts(std::span<const VisitCounter> per_query);

// K highest scores, ties by ascending pin ID.
RankedResult top_k(const ScoreMap& scores, std::uint64_t k);

// Reusable per-worker scratch space. Not shareable across threads.
struct WalkWorkspace {
  VisitCounter counter;
  CountCombiner combiner;
  std::vector<ScoredPin> candidates;
};

// Throws Error(kInvalidQueryPin) for non-pins, isolated pins or duplicate
// pins, and Error(kConfig) for non-positive weights or an empty query.
void validate_query(const WeightedQuery& query, const BipartiteGraph& graph);

// Allocates steps, walks from every query pin, combines with the multi-hit
// boost and returns the top cfg.top_k pins, query pins excluded.
RankedResult pixie_random_walk_multiple(const WeightedQuery& query, const BipartiteGraph& graph,
                                        const WalkConfig& cfg, Rng& rng, WalkWorkspace& ws);
RankedResult pixie_random_walk_multiple(const WeightedQuery& query, const BipartiteGraph& graph,
                                        const WalkConfig& cfg, Rng& rng);

}  // namespace pixie
