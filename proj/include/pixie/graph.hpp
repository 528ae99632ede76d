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

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "pixie/error.hpp"
#include "pixie/rng.hpp"

namespace pixie {

// Dense 0-based node ID. Pins occupy [0, pinCount), boards follow.
using NodeId = std::uint32_t;
// Discrete bias bucket (language, topic, ...). 0 means unlabeled.
using AttributeId = std::uint16_t;

inline constexpr AttributeId kUnlabeled = 0;
// 0xFFFFFFFF is never a valid node; the visit counter uses it as its
// empty-slot marker.
inline constexpr NodeId kInvalidNode = 0xFFFFFFFFu;
inline constexpr std::uint64_t kMaxNodes = 0xFFFFFFFFull;

// Half-open index subrange [begin, end) of a node's adjacency slice holding
// the neighbors labelled `attr`. Indices are relative to the slice start.
struct AttrRange {
  AttributeId attr = kUnlabeled;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;

  std::uint32_t size() const { return end - begin; }
  bool operator==(const AttrRange&) const = default;
};

// Set of attributes a user prefers; kept sorted and unique.
class UserFeatures {
 public:
  UserFeatures() = default;
  UserFeatures(std::initializer_list<AttributeId> attrs);
  explicit UserFeatures(std::vector<AttributeId> attrs);

  bool empty() const { return attrs_.empty(); }
  std::size_t size() const { return attrs_.size(); }
  bool contains(AttributeId a) const {
    return std::binary_search(attrs_.begin(), attrs_.end(), a);
  }
  std::span<const AttributeId> attrs() const { return attrs_; }

 private:
  std::vector<AttributeId> attrs_;
};

// Raw storage of a graph. Every field is serialized verbatim.
struct GraphParts {
  std::uint64_t pin_count = 0;
  std::uint64_t board_count = 0;
  std::vector<std::uint64_t> offsets{0};        // nodes + 1
  std::vector<NodeId> edges;                    // offsets.back() slots
  std::vector<AttributeId> node_attr;           // one per node
  std::vector<std::uint64_t> range_offsets{0};  // nodes + 1, indexes `ranges`
  std::vector<AttrRange> ranges;

  std::uint64_t node_count() const { return pin_count + board_count; }
  bool operator==(const GraphParts&) const = default;
};

enum class ViolationKind {
  kShape,          // array lengths disagree with the counts
  kOffsets,        // offsets[0] != 0, non-monotone, or last != edge slots
  kNodeRange,      // neighbor ID >= node count
  kNotBipartite,   // pin-pin or board-board entry
  kAsymmetric,     // multiplicity of (p, b) differs from (b, p)
  kUnsorted,       // slice not ordered by (attr, id)
  kAttrRanges,     // subranges do not tile the slice or mislabel neighbors
};

struct Violation {
  ViolationKind kind;
  std::uint64_t node;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string summary(std::size_t max_items = 8) const;
};

ValidationReport validate(const GraphParts& parts);

// Immutable pin/board graph. Safe for concurrent reads.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  // Throws Error(kInvariantViolation) unless validate() is clean.
  static BipartiteGraph from_parts(GraphParts parts);
  // Skips validation; for tests that need malformed graphs.
  static BipartiteGraph unchecked(GraphParts parts);

  std::uint64_t pin_count() const { return p_.pin_count; }
  std::uint64_t board_count() const { return p_.board_count; }
  std::uint64_t node_count() const { return p_.node_count(); }
  std::uint64_t edge_slots() const { return p_.edges.size(); }
  // Undirected edges; each is stored once per endpoint.
  std::uint64_t edge_count() const { return p_.edges.size() / 2; }
  std::uint64_t max_pin_degree() const { return max_pin_degree_; }

  bool is_pin(NodeId v) const { return v < p_.pin_count; }
  bool is_board(NodeId v) const { return v >= p_.pin_count && v < node_count(); }

  std::uint64_t degree(NodeId v) const {
    check_node(v);
    return p_.offsets[v + 1] - p_.offsets[v];
  }

  std::span<const NodeId> neighbors(NodeId v) const {
    check_node(v);
    return {p_.edges.data() + p_.offsets[v],
            static_cast<std::size_t>(p_.offsets[v + 1] - p_.offsets[v])};
  }

  AttributeId attr(NodeId v) const {
    check_node(v);
    return p_.node_attr[v];
  }

  std::span<const AttrRange> attr_ranges(NodeId v) const {
    check_node(v);
    return {p_.ranges.data() + p_.range_offsets[v],
            static_cast<std::size_t>(p_.range_offsets[v + 1] - p_.range_offsets[v])};
  }

  // edgeVec[offset_v + (r mod degree_v)].
  NodeId sample_uniform(NodeId v, Rng& rng) const {
    const std::uint64_t begin = p_.offsets[v];
    const std::uint64_t deg = p_.offsets[v + 1] - begin;
    if (deg == 0) throw_no_neighbor(v);
    return p_.edges[begin + draw_below(rng, deg)];
  }

  // With probability beta, draw from the neighbors whose attribute is in
  // `user`; otherwise (or when none match) draw from the whole slice.
  // beta == 0 or an empty feature set consumes exactly the same random
  // numbers as sample_uniform.
  NodeId sample_biased(NodeId v, const UserFeatures& user, double beta, Rng& rng) const {
    const std::uint64_t begin = p_.offsets[v];
    const std::uint64_t deg = p_.offsets[v + 1] - begin;
    if (deg == 0) throw_no_neighbor(v);
    if (beta > 0.0 && !user.empty() && (beta >= 1.0 || draw_unit(rng) < beta)) {
      const NodeId* hit = sample_matching(v, begin, user, rng);
      if (hit != nullptr) return *hit;
    }
    return p_.edges[begin + draw_below(rng, deg)];
  }

  const GraphParts& parts() const { return p_; }

  bool operator==(const BipartiteGraph& other) const { return p_ == other.p_; }

 private:
  explicit BipartiteGraph(GraphParts parts);

  void check_node(NodeId v) const {
    if (v >= node_count()) throw_invalid_node(v);
  }
  [[noreturn]] void throw_invalid_node(NodeId v) const;
  [[noreturn]] static void throw_no_neighbor(NodeId v);

  const NodeId* sample_matching(NodeId v, std::uint64_t begin, const UserFeatures& user,
                                Rng& rng) const {
    const AttrRange* first = p_.ranges.data() + p_.range_offsets[v];
    const AttrRange* last = p_.ranges.data() + p_.range_offsets[v + 1];
    std::uint64_t total = 0;
    for (const AttrRange* r = first; r != last; ++r) {
      if (user.contains(r->attr)) total += r->size();
    }
    if (total == 0) return nullptr;
    std::uint64_t pick = draw_below(rng, total);
    for (const AttrRange* r = first; r != last; ++r) {
      if (!user.contains(r->attr)) continue;
      if (pick < r->size()) return p_.edges.data() + begin + r->begin + pick;
      pick -= r->size();
    }
    return nullptr;
  }

  GraphParts p_;
  std::uint64_t max_pin_degree_ = 0;
};

// Undirected pin-board edge; `board` is an absolute node ID.
struct PinBoardEdge {
  NodeId pin;
  NodeId board;

  auto operator<=>(const PinBoardEdge&) const = default;
};

// Assembles a well-formed graph: parallel edges are collapsed, adjacency
// slices are sorted by (neighbor attribute, neighbor ID) and the attribute
// subranges are derived. `attrs` holds one entry per node.
BipartiteGraph build_graph(std::uint64_t pin_count, std::uint64_t board_count,
                           std::vector<PinBoardEdge> edges, std::span<const AttributeId> attrs);

}  // namespace pixie
