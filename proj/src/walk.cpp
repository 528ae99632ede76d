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

#include "pixie/walk.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "pixie/simd/kernels.hpp"

namespace pixie {
namespace {

// Geometric length from a precomputed log(1 - alpha).
inline std::uint32_t walk_length(double log_keep, Rng& rng, std::uint32_t cap) {
  const double extra = std::floor(std::log(draw_unit_open(rng)) / log_keep);
  if (!(extra < static_cast<double>(cap - 1))) return cap;
  return 1 + static_cast<std::uint32_t>(extra);
}

struct UniformHop {
  const BipartiteGraph& g;
  NodeId operator()(NodeId v, Rng& rng) const { return g.sample_uniform(v, rng); }
};

struct BiasedHop {
  const BipartiteGraph& g;
  const UserFeatures& user;
  double beta;
  NodeId operator()(NodeId v, Rng& rng) const { return g.sample_biased(v, user, beta, rng); }
};

void check_walk_start(const BipartiteGraph& g, NodeId q) {
  if (!g.is_pin(q)) {
    throw Error(ErrorCode::kInvalidQueryPin, "node " + std::to_string(q) + " is not a pin");
  }
  if (g.degree(q) == 0) {
    throw Error(ErrorCode::kWalkDeadEnd, "walk dead end at isolated pin " + std::to_string(q));
  }
}

template <typename Hop>
WalkStats run_walk(const BipartiteGraph& g, NodeId q, Hop hop, double alpha,
                   std::uint32_t max_len, std::uint64_t budget, std::uint64_t stop_pins,
                   std::uint32_t stop_visits, Rng& rng, VisitCounter& visits) {
  check_walk_start(g, q);
  if (budget == 0) throw Error(ErrorCode::kConfig, "walk budget must be >= 1");
  visits.reset(budget + max_len);
  const double log_keep = std::log1p(-alpha);
  std::uint64_t steps = 0;
  std::uint64_t high_visited = 0;
  try {
    do {
      NodeId pin = q;
      const std::uint32_t len = walk_length(log_keep, rng, max_len);
      for (std::uint32_t i = 0; i < len; ++i) {
        const NodeId board = hop(pin, rng);
        pin = hop(board, rng);
        if (visits.increment(pin) == stop_visits) ++high_visited;
      }
      steps += len;
    } while (steps < budget && high_visited <= stop_pins);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoNeighbor) throw;
    throw Error(ErrorCode::kWalkDeadEnd, std::string("walk dead end: ") + e.what());
  }
  return WalkStats{steps, steps < budget};
}

}  // namespace

void WalkConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfig, what); };
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must be in (0, 1)");
  if (total_steps < 1) fail("total steps must be >= 1");
  if (max_walk_length < 1) fail("max walk length must be >= 1");
  if (early_stop_visits < 1) fail("early-stop visit threshold must be >= 1");
  if (!(bias_strength >= 0.0 && bias_strength <= 1.0)) fail("beta must be in [0, 1]");
  if (top_k < 1) fail("topK must be >= 1");
}

std::uint32_t sample_walk_length(double alpha, Rng& rng, std::uint32_t cap) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kConfig, "alpha must be in (0, 1)");
  if (cap < 1) throw Error(ErrorCode::kConfig, "walk length cap must be >= 1");
  return walk_length(std::log1p(-alpha), rng, cap);
}

WalkStats basic_random_walk(const BipartiteGraph& graph, NodeId q, const WalkConfig& cfg,
                            Rng& rng, VisitCounter& visits) {
  cfg.validate();
  return run_walk(graph, q, UniformHop{graph}, cfg.alpha, cfg.max_walk_length, cfg.total_steps,
                  0, WalkConfig::kNeverStop, rng, visits);
}

WalkStats pixie_random_walk(const BipartiteGraph& graph, NodeId q, const UserFeatures& user,
                            const WalkConfig& cfg, std::uint64_t budget, Rng& rng,
                            VisitCounter& visits) {
  cfg.validate();
  return run_walk(graph, q, BiasedHop{graph, user, cfg.bias_strength}, cfg.alpha,
                  cfg.max_walk_length, budget, cfg.early_stop_pins, cfg.early_stop_visits, rng,
                  visits);
}

double scaling_factor(std::uint64_t degree, std::uint64_t max_pin_degree) {
  if (degree == 0) throw Error(ErrorCode::kInvalidDegree, "scaling factor of a degree-0 pin");
  const double d = static_cast<double>(degree);
  const double c = static_cast<double>(max_pin_degree);
  const double log_d = std::log(d);
  if (log_d >= c) return d * 1e-6;
  return d * (c - log_d);
}

std::vector<std::uint64_t> allocate_steps(std::span<const StepRequest> requests,
                                          std::uint64_t max_pin_degree,
                                          std::uint64_t total_steps) {
  const std::size_t n = requests.size();
  if (n == 0) throw Error(ErrorCode::kEmptyQuery, "query has no pins");
  if (total_steps < n) {
    throw Error(ErrorCode::kConfig, "total steps " + std::to_string(total_steps) +
                                        " < query size " + std::to_string(n));
  }
  double weight_sum = 0.0;
  for (const StepRequest& r : requests) {
    if (!(r.weight > 0.0) || !std::isfinite(r.weight)) {
      throw Error(ErrorCode::kConfig, "query weights must be positive and finite");
    }
    if (r.degree == 0) {
      throw Error(ErrorCode::kInvalidQueryPin,
                  "query pin " + std::to_string(r.pin) + " has degree 0");
    }
    weight_sum += r.weight;
  }

  std::vector<double> mass(n);
  double mass_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mass[i] = (requests[i].weight / weight_sum) * scaling_factor(requests[i].degree, max_pin_degree);
    mass_sum += mass[i];
  }

  std::vector<std::uint64_t> steps(n);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double exact = static_cast<double>(total_steps) * mass[i] / mass_sum;
    steps[i] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(exact)));
    assigned += steps[i];
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (mass[a] != mass[b]) return mass[a] > mass[b];
    return requests[a].pin < requests[b].pin;
  });

  // Hand out the floor remainder, or claw back the 1-step minimums.
  for (std::size_t i = 0; assigned < total_steps; i = (i + 1) % n) {
    ++steps[order[i]];
    ++assigned;
  }
  for (std::size_t i = 0; assigned > total_steps; i = (i + 1) % n) {
    if (steps[order[i]] > 1) {
      --steps[order[i]];
      --assigned;
    }
  }
  return steps;
}

std::vector<std::uint64_t> allocate_steps(const WeightedQuery& query, const BipartiteGraph& graph,
                                          std::uint64_t total_steps) {
  std::vector<StepRequest> requests;
  requests.reserve(query.entries.size());
  for (const QueryEntry& e : query.entries) {
    requests.push_back({e.pin, e.weight, graph.degree(e.pin)});
  }
  return allocate_steps(requests, graph.max_pin_degree(), total_steps);
}

void CountCombiner::reset(std::uint64_t expected_keys) {
  capacity_ = VisitCounter::capacity_for(expected_keys);
  shift_ = 64 - std::countr_zero(capacity_);
  if (slots_.size() < capacity_) slots_.resize(capacity_);
  std::fill_n(slots_.begin(), capacity_, Slot{kInvalidNode, 0, 0, 0.0});
  size_ = 0;
}

CountCombiner::Slot& CountCombiner::slot_for(NodeId key) {
  const std::uint64_t mask = capacity_ - 1;
  std::uint64_t i = (static_cast<std::uint64_t>(key) * VisitCounter::kFib64) >> shift_;
  while (true) {
    Slot& s = slots_[i];
    if (s.key == key) return s;
    if (s.key == kInvalidNode) {
      if (2 * (size_ + 1) > capacity_) {
        grow();
        return slot_for(key);
      }
      s.key = key;
      ++size_;
      return s;
    }
    i = (i + 1) & mask;
  }
}

void CountCombiner::grow() { rehash(2 * capacity_); }

void CountCombiner::rehash(std::uint64_t capacity) {
  std::vector<Slot> old(slots_.begin(), slots_.begin() + static_cast<std::ptrdiff_t>(capacity_));
  reset(capacity / 2);
  for (const Slot& s : old) {
    if (s.key != kInvalidNode) slot_for(s.key) = s;
  }
}

void CountCombiner::add(const VisitCounter& counter) {
  entry_buf_.clear();
  counter.for_each([&](NodeId k, std::uint32_t c) { entry_buf_.push_back({k, c}); });
  count_buf_.resize(entry_buf_.size());
  root_buf_.resize(entry_buf_.size());
  for (std::size_t i = 0; i < entry_buf_.size(); ++i) count_buf_[i] = entry_buf_[i].count;
  simd::sqrt_counts(count_buf_, root_buf_);
  const std::uint64_t needed = VisitCounter::capacity_for(size_ + entry_buf_.size());
  if (needed > capacity_) rehash(needed);
  for (std::size_t i = 0; i < entry_buf_.size(); ++i) {
    Slot& s = slot_for(entry_buf_[i].key);
    ++s.hits;
    s.raw += entry_buf_[i].count;
    s.root_sum += root_buf_[i];
  }
}

ScoreMap CountCombiner::to_map() const {
  ScoreMap out;
  out.reserve(size_);
  for_each([&](NodeId k, double v) { out.emplace(k, v); });
  return out;
}

ScoreMap combine_counts(std::span<const VisitCounter> per_query) {
  std::uint64_t keys = 0;
  for (const VisitCounter& c : per_query) keys += c.size();
  CountCombiner combiner(keys);
  for (const VisitCounter& c : per_query) combiner.add(c);
  return combiner.to_map();
}

namespace {

bool ranks_before(const ScoredPin& a, const ScoredPin& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.pin < b.pin;
}

void keep_top(std::vector<ScoredPin>& items, std::uint64_t k) {
  if (items.size() > k) {
    std::nth_element(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(k), items.end(),
                     ranks_before);
    items.resize(k);
  }
  std::sort(items.begin(), items.end(), ranks_before);
}

}  // namespace

RankedResult top_k(const ScoreMap& scores, std::uint64_t k) {
  RankedResult out;
  out.items.reserve(scores.size());
  for (const auto& [pin, score] : scores) out.items.push_back({pin, score});
  keep_top(out.items, k);
  return out;
}

void validate_query(const WeightedQuery& query, const BipartiteGraph& graph) {
  if (query.entries.empty()) throw Error(ErrorCode::kEmptyQuery, "query has no pins");
  std::unordered_set<NodeId> seen;
  for (const QueryEntry& e : query.entries) {
    if (!graph.is_pin(e.pin)) {
      throw Error(ErrorCode::kInvalidQueryPin, "query node " + std::to_string(e.pin) +
                                                   " is not a pin");
    }
    if (graph.degree(e.pin) == 0) {
      throw Error(ErrorCode::kInvalidQueryPin,
                  "query pin " + std::to_string(e.pin) + " is isolated");
    }
    if (!seen.insert(e.pin).second) {
      throw Error(ErrorCode::kInvalidQueryPin,
                  "query pin " + std::to_string(e.pin) + " repeated");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::kConfig, "query weights must be positive and finite");
    }
  }
}

RankedResult pixie_random_walk_multiple(const WeightedQuery& query, const BipartiteGraph& graph,
                                        const WalkConfig& cfg, Rng& rng, WalkWorkspace& ws) {
  cfg.validate();
  validate_query(query, graph);
  const std::vector<std::uint64_t> budgets = allocate_steps(query, graph, cfg.total_steps);

  RankedResult result;
  ws.combiner.reset(0);  // grows to the distinct keys actually seen
  for (std::size_t i = 0; i < query.entries.size(); ++i) {
    const WalkStats s = pixie_random_walk(graph, query.entries[i].pin, query.user, cfg,
                                          budgets[i], rng, ws.counter);
    result.stats.steps_used += s.steps_used;
    result.stats.early_stopped = result.stats.early_stopped || s.early_stopped;
    ws.combiner.add(ws.counter);
  }

  auto is_query_pin = [&](NodeId p) {
    return std::any_of(query.entries.begin(), query.entries.end(),
                       [p](const QueryEntry& e) { return e.pin == p; });
  };
  ws.candidates.clear();
  ws.combiner.for_each([&](NodeId pin, double score) {
    if (!is_query_pin(pin)) ws.candidates.push_back({pin, score});
  });
  keep_top(ws.candidates, cfg.top_k);
  result.items = ws.candidates;
  return result;
}

RankedResult pixie_random_walk_multiple(const WeightedQuery& query, const BipartiteGraph& graph,
                                        const WalkConfig& cfg, Rng& rng) {
  WalkWorkspace ws;
  return pixie_random_walk_multiple(query, graph, cfg, rng, ws);
}

}  // namespace pixie
