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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pixie/graph.hpp"
#include "pixie/id_map.hpp"

namespace pixie {

// Dense, non-negative, sums to 1.
using TopicVector = std::vector<double>;

// One deduplicated board-pin save. Indices are parse-order positions in
// EdgeList::board_keys / pin_keys.
struct BoardPin {
  std::uint32_t board;
  std::uint32_t pin;
};

// Raw graph between parsing and emission. Edge order is input order, which
// stands in for recency: later lines are newer saves.
struct EdgeList {
  std::vector<std::string> pin_keys;
  std::vector<std::string> board_keys;
  std::vector<BoardPin> edges;
  std::vector<std::uint8_t> board_removed;  // one flag per board
  std::uint64_t duplicates = 0;

  std::size_t pin_count() const { return pin_keys.size(); }
  std::size_t board_count() const { return board_keys.size(); }
};

// `boardKey<TAB>pinKey` per line. Blank lines are skipped; duplicate edges
// are collapsed and counted. Throws Error(kParse) naming the line.
EdgeList parse_edges(std::istream& in, const std::string& source = "<stream>");
EdgeList parse_edge_file(const std::filesystem::path& path);

struct TopicTable {
  std::size_t dim = 0;
  std::vector<std::optional<TopicVector>> pin_vectors;  // one per pin
  std::vector<AttributeId> pin_attr;                    // one per pin
  std::vector<std::optional<AttributeId>> board_attr;   // one per board
  std::uint64_t ignored_lines = 0;                      // keys not in the edge list

  // All pins unlabeled and without vectors.
  static TopicTable empty_for(const EdgeList& edges);
};

// `nodeKey<TAB>attrId<TAB>v1,...,vd`. A key naming both a pin and a board
// applies to both. `expected_dim` of 0 infers d from the first line.
TopicTable parse_topics(std::istream& in, const EdgeList& edges, std::size_t expected_dim = 0,
                        const std::string& source = "<stream>");
TopicTable parse_topic_file(const std::filesystem::path& path, const EdgeList& edges,
                            std::size_t expected_dim = 0);

// Renormalized mean of the last min(latest, available) member vectors.
// `members` is in save order; null entries are pins without a vector.
// Throws Error(kMissingTopics) when no member has a vector.
TopicVector board_topic_distribution(std::span<const TopicVector* const> members,
                                     std::size_t latest);

// Shannon entropy in nats, 0 ln 0 = 0.
double entropy(std::span<const double> topic);

// <u, v> / (|u| |v|). Throws Error(kUndefinedSimilarity) on a zero vector.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

struct BoardPruneResult {
  std::uint64_t removed = 0;
  double threshold = 0.0;  // entropy of the least diverse removed board; NaN if none
};

// Removes the ceil(quantile * |B|) highest-entropy boards and their edges.
// Ties go in descending board index. NaN entropies (boards with no topic
// signal) are never removed. Pins are never removed.
BoardPruneResult prune_boards(EdgeList& edges, std::span<const double> board_entropy,
                              double quantile);

struct EdgePruneResult {
  std::uint64_t removed = 0;
  std::uint64_t random_fallback_pins = 0;  // pins pruned without a topic vector
};

// Shrinks each pin's degree d to ceil(d^delta), keeping the boards whose
// distribution is most similar to the pin's topic vector (ties: lower board
// index). Pins without a vector keep a seeded random subset. Boards without
// a distribution rank below every board that has one.
EdgePruneResult prune_edges(EdgeList& edges, const TopicTable& topics,
                            std::span<const std::optional<TopicVector>> board_distributions,
                            double delta, std::uint64_t seed);

std::uint64_t pruned_degree(std::uint64_t degree, double delta);

struct PruneConfig {
  double entropy_quantile = 0.10;
  double delta = 1.0;
  std::size_t latest_m = 20;
  std::size_t topic_dim = 0;  // 0: take d from the topic file
  std::uint64_t seed = 0x5EED;

  void validate() const;
};

struct CompileReport {
  std::uint64_t pins = 0;
  std::uint64_t boards_before = 0;
  std::uint64_t boards_after = 0;
  std::uint64_t edges_before = 0;  // after collapsing duplicates
  std::uint64_t edges_after = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t boards_removed = 0;
  double entropy_threshold = 0.0;  // NaN when no board was removed
  std::uint64_t isolated_pins = 0;
  std::uint64_t isolated_boards = 0;
  std::uint64_t pins_without_topics = 0;
  std::uint64_t boards_without_topics = 0;
  std::uint64_t random_fallback_pins = 0;
  std::uint64_t ignored_topic_lines = 0;

  std::string to_json() const;
};

struct CompiledGraph {
  BipartiteGraph graph;
  IdMap ids;
  CompileReport report;
};

// parse output -> board entropy -> board pruning -> edge pruning -> dense IDs
// and attributes. Pins keep their parse index as node ID; surviving boards
// follow in parse order.
CompiledGraph compile_graph(EdgeList edges, const TopicTable& topics, const PruneConfig& cfg);

// File-level pipeline. Writes `out` and id_map_path_for(out) through
// temporary files; nothing is left behind on failure. An empty
// `topics_path` compiles without topic signal.
CompileReport compile(const std::filesystem::path& edges_path,
                      const std::filesystem::path& topics_path, const PruneConfig& cfg,
                      const std::filesystem::path& out);

}  // namespace pixie
