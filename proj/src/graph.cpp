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

#include "pixie/graph.hpp"

#include <sstream>
#include <utility>

namespace pixie {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidNode: return "invalid-node";
    case ErrorCode::kNoNeighbor: return "no-neighbor";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kVersionMismatch: return "version-mismatch";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kChecksumMismatch: return "checksum-mismatch";
    case ErrorCode::kInvariantViolation: return "invariant-violation";
    case ErrorCode::kWalkDeadEnd: return "walk-dead-end";
    case ErrorCode::kInvalidDegree: return "invalid-degree";
    case ErrorCode::kInvalidQueryPin: return "invalid-query-pin";
    case ErrorCode::kCounterFull: return "counter-full";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kMissingTopics: return "missing-topics";
    case ErrorCode::kUndefinedSimilarity: return "undefined-similarity";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kEmptyQuery: return "empty-query";
    case ErrorCode::kUnknownPins: return "unknown-pins";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kEval: return "eval";
  }
  return "unknown";
}

UserFeatures::UserFeatures(std::initializer_list<AttributeId> attrs)
    : UserFeatures(std::vector<AttributeId>(attrs)) {}

UserFeatures::UserFeatures(std::vector<AttributeId> attrs) : attrs_(std::move(attrs)) {
  std::sort(attrs_.begin(), attrs_.end());
  attrs_.erase(std::unique(attrs_.begin(), attrs_.end()), attrs_.end());
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary(std::size_t max_items) const {
  std::ostringstream out;
  out << violations.size() << " violation(s)";
  for (std::size_t i = 0; i < violations.size() && i < max_items; ++i) {
    out << "; node " << violations[i].node << ": " << violations[i].detail;
  }
  return out.str();
}

namespace {

class Reporter {
 public:
  explicit Reporter(ValidationReport& report) : report_(report) {}

  void add(ViolationKind kind, std::uint64_t node, std::string detail) {
    report_.violations.push_back({kind, node, std::move(detail)});
  }

 private:
  ValidationReport& report_;
};

// Checks lengths and offsets. Returns false when the arrays cannot be
// indexed safely, in which case no deeper checks run.
bool check_shape(const GraphParts& g, Reporter& out) {
  const std::uint64_t n = g.node_count();
  bool ok = true;
  if (n > kMaxNodes) {
    out.add(ViolationKind::kShape, 0, "node count exceeds 2^32-1");
    return false;
  }
  if (g.offsets.size() != n + 1) {
    out.add(ViolationKind::kShape, 0, "offsets length != nodes+1");
    ok = false;
  }
  if (g.node_attr.size() != n) {
    out.add(ViolationKind::kShape, 0, "nodeAttr length != nodes");
    ok = false;
  }
  if (g.range_offsets.size() != n + 1) {
    out.add(ViolationKind::kShape, 0, "attribute range index length != nodes+1");
    ok = false;
  }
  if (!ok) return false;

  if (g.offsets[0] != 0) {
    out.add(ViolationKind::kOffsets, 0, "offsets[0] != 0");
    ok = false;
  }
  for (std::uint64_t v = 0; v < n; ++v) {
    if (g.offsets[v + 1] < g.offsets[v]) {
      out.add(ViolationKind::kOffsets, v, "offsets decrease");
      ok = false;
    }
  }
  if (g.offsets[n] != g.edges.size()) {
    out.add(ViolationKind::kOffsets, n, "offsets[last] != edge slots");
    ok = false;
  }
  if (g.range_offsets[0] != 0) {
    out.add(ViolationKind::kAttrRanges, 0, "range index does not start at 0");
    ok = false;
  }
  for (std::uint64_t v = 0; v < n; ++v) {
    if (g.range_offsets[v + 1] < g.range_offsets[v]) {
      out.add(ViolationKind::kAttrRanges, v, "range index decreases");
      ok = false;
    }
  }
  if (g.range_offsets[n] != g.ranges.size()) {
    out.add(ViolationKind::kAttrRanges, n, "range index end != range count");
    ok = false;
  }
  return ok;
}

}  // namespace

ValidationReport validate(const GraphParts& g) {
  ValidationReport report;
  Reporter out(report);
  if (!check_shape(g, out)) return report;

  const std::uint64_t n = g.node_count();
  bool ids_in_range = true;
  std::vector<std::pair<NodeId, NodeId>> from_pins;
  std::vector<std::pair<NodeId, NodeId>> from_boards;

  for (std::uint64_t v = 0; v < n; ++v) {
    const bool v_is_pin = v < g.pin_count;
    const std::uint64_t begin = g.offsets[v];
    const std::uint64_t end = g.offsets[v + 1];
    const std::uint64_t deg = end - begin;

    bool slice_ids_ok = true;
    for (std::uint64_t i = begin; i < end; ++i) {
      const NodeId u = g.edges[i];
      if (u >= n) {
        out.add(ViolationKind::kNodeRange, v, "neighbor " + std::to_string(u) + " out of range");
        slice_ids_ok = false;
        continue;
      }
      if ((u < g.pin_count) == v_is_pin) {
        out.add(ViolationKind::kNotBipartite, v,
                "same-side edge to " + std::to_string(u));
      }
      if (v_is_pin) {
        from_pins.emplace_back(static_cast<NodeId>(v), u);
      } else {
        from_boards.emplace_back(u, static_cast<NodeId>(v));
      }
    }
    ids_in_range = ids_in_range && slice_ids_ok;
    if (!slice_ids_ok) continue;

    for (std::uint64_t i = begin + 1; i < end; ++i) {
      const auto prev = std::pair(g.node_attr[g.edges[i - 1]], g.edges[i - 1]);
      const auto cur = std::pair(g.node_attr[g.edges[i]], g.edges[i]);
      if (cur < prev) {
        out.add(ViolationKind::kUnsorted, v, "adjacency not sorted by (attr, id)");
        break;
      }
    }

    // Subranges must be non-empty, strictly increasing by attribute, tile
    // [0, deg) exactly and label every neighbor they cover correctly.
    std::uint64_t cursor = 0;
    bool tiled = true;
    for (std::uint64_t r = g.range_offsets[v]; r < g.range_offsets[v + 1]; ++r) {
      const AttrRange& range = g.ranges[r];
      if (range.begin != cursor || range.end <= range.begin || range.end > deg) {
        tiled = false;
        break;
      }
      if (r > g.range_offsets[v] && g.ranges[r - 1].attr >= range.attr) {
        tiled = false;
        break;
      }
      for (std::uint64_t i = range.begin; i < range.end; ++i) {
        if (g.node_attr[g.edges[begin + i]] != range.attr) {
          tiled = false;
          break;
        }
      }
      cursor = range.end;
    }
    if (!tiled || cursor != deg) {
      out.add(ViolationKind::kAttrRanges, v, "attribute subranges do not tile the slice");
    }
  }

  if (ids_in_range) {
    std::sort(from_pins.begin(), from_pins.end());
    std::sort(from_boards.begin(), from_boards.end());
    if (from_pins != from_boards) {
      // Report the first differing pair.
      auto [a, b] = std::mismatch(from_pins.begin(), from_pins.end(), from_boards.begin(),
                                  from_boards.end());
      const auto& where = a != from_pins.end() ? *a : *b;
      out.add(ViolationKind::kAsymmetric, where.first,
              "edge (" + std::to_string(where.first) + ", " + std::to_string(where.second) +
                  ") multiplicity differs between endpoints");
    }
  }
  return report;
}

BipartiteGraph::BipartiteGraph(GraphParts parts) : p_(std::move(parts)) {
  const std::uint64_t limit = std::min<std::uint64_t>(p_.pin_count, p_.offsets.size() - 1);
  for (std::uint64_t v = 0; v < limit; ++v) {
    max_pin_degree_ = std::max(max_pin_degree_, p_.offsets[v + 1] - p_.offsets[v]);
  }
}

BipartiteGraph BipartiteGraph::from_parts(GraphParts parts) {
  ValidationReport report = validate(parts);
  if (!report.ok()) throw Error(ErrorCode::kInvariantViolation, report.summary());
  return BipartiteGraph(std::move(parts));
}

BipartiteGraph BipartiteGraph::unchecked(GraphParts parts) {
  return BipartiteGraph(std::move(parts));
}

void BipartiteGraph::throw_invalid_node(NodeId v) const {
  throw Error(ErrorCode::kInvalidNode,
              "node " + std::to_string(v) + " >= node count " + std::to_string(node_count()));
}

void BipartiteGraph::throw_no_neighbor(NodeId v) {
  throw Error(ErrorCode::kNoNeighbor, "node " + std::to_string(v) + " has no neighbors");
}

BipartiteGraph build_graph(std::uint64_t pin_count, std::uint64_t board_count,
                           std::vector<PinBoardEdge> edges, std::span<const AttributeId> attrs) {
  const std::uint64_t n = pin_count + board_count;
  if (n > kMaxNodes) throw Error(ErrorCode::kConfig, "graph exceeds 2^32-1 nodes");
  if (attrs.size() != n) throw Error(ErrorCode::kConfig, "one attribute per node required");
  for (const PinBoardEdge& e : edges) {
    if (e.pin >= pin_count || e.board < pin_count || e.board >= n) {
      throw Error(ErrorCode::kInvalidNode, "edge (" + std::to_string(e.pin) + ", " +
                                               std::to_string(e.board) + ") is not pin-board");
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  GraphParts g;
  g.pin_count = pin_count;
  g.board_count = board_count;
  g.node_attr.assign(attrs.begin(), attrs.end());
  g.offsets.assign(n + 1, 0);
  for (const PinBoardEdge& e : edges) {
    ++g.offsets[e.pin + 1];
    ++g.offsets[e.board + 1];
  }
  for (std::uint64_t v = 0; v < n; ++v) g.offsets[v + 1] += g.offsets[v];

  g.edges.resize(g.offsets[n]);
  std::vector<std::uint64_t> fill(g.offsets.begin(), g.offsets.end() - 1);
  for (const PinBoardEdge& e : edges) {
    g.edges[fill[e.pin]++] = e.board;
    g.edges[fill[e.board]++] = e.pin;
  }

  g.range_offsets.assign(1, 0);
  g.range_offsets.reserve(n + 1);
  for (std::uint64_t v = 0; v < n; ++v) {
    auto first = g.edges.begin() + static_cast<std::ptrdiff_t>(g.offsets[v]);
    auto last = g.edges.begin() + static_cast<std::ptrdiff_t>(g.offsets[v + 1]);
    std::sort(first, last, [&](NodeId a, NodeId b) {
      return std::pair(g.node_attr[a], a) < std::pair(g.node_attr[b], b);
    });
    std::uint32_t i = 0;
    const auto deg = static_cast<std::uint32_t>(last - first);
    while (i < deg) {
      const AttributeId a = g.node_attr[first[i]];
      std::uint32_t j = i;
      while (j < deg && g.node_attr[first[j]] == a) ++j;
      g.ranges.push_back({a, i, j});
      i = j;
    }
    g.range_offsets.push_back(g.ranges.size());
  }
  return BipartiteGraph::from_parts(std::move(g));
}

}  // namespace pixie
