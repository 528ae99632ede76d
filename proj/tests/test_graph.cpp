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

#include <algorithm>
#include <cmath>
#include <map>

#include "pixie/graph.hpp"
#include "pixie/rng.hpp"
#include "test_util.hpp"

using namespace pixie;
using pixie::testing::chi_square_p;
using pixie::testing::random_graph;
using pixie::testing::toy_graph;

TEST(Graph, DegreeFromOffsets) {
  GraphParts p;
  p.pin_count = 1;
  p.board_count = 1;
  p.offsets = {0, 3, 5};
  p.edges = {1, 1, 1, 0, 0};
  p.node_attr = {0, 0};
  p.range_offsets = {0, 0, 0};
  const auto g = BipartiteGraph::unchecked(p);
  EXPECT_EQ(g.degree(0), 3u);
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_PIXIE_ERROR(g.degree(2), ErrorCode::kInvalidNode);
}

TEST(Graph, ToyLayout) {
  const auto g = toy_graph();
  EXPECT_EQ(g.pin_count(), 5u);
  EXPECT_EQ(g.board_count(), 3u);
  EXPECT_EQ(g.edge_count(), 8u);
  EXPECT_EQ(g.max_pin_degree(), 2u);
  EXPECT_TRUE(g.is_pin(4));
  EXPECT_TRUE(g.is_board(5));
  EXPECT_FALSE(g.is_board(8));
  // Board 5 holds pins 0,1 (attr 1) before pin 2 (attr 2).
  const auto n = g.neighbors(5);
  EXPECT_EQ(std::vector<NodeId>(n.begin(), n.end()), (std::vector<NodeId>{0, 1, 2}));
  const auto r = g.attr_ranges(5);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].attr, 1);
  EXPECT_EQ(r[0].begin, 0u);
  EXPECT_EQ(r[0].end, 2u);
  EXPECT_EQ(r[1].attr, 2);
  EXPECT_EQ(r[1].end, 3u);
  // Pin 2 sees board 5 (attr 1) before board 7 (attr 2).
  const auto n2 = g.neighbors(2);
  EXPECT_EQ(std::vector<NodeId>(n2.begin(), n2.end()), (std::vector<NodeId>{5, 7}));
}

TEST(Graph, DegreeSumsToEdgeSlots) {
  const auto g = random_graph(40, 12, 300, 5);
  std::uint64_t total = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) total += g.degree(v);
  EXPECT_EQ(total, g.edge_slots());
}

TEST(Graph, ParallelEdgesCollapse) {
  const std::vector<AttributeId> attrs(3, 0);
  const auto g = build_graph(2, 1, {{0, 2}, {0, 2}, {1, 2}}, attrs);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.degree(2), 2u);
}

TEST(Graph, IsolatedNodeHasZeroDegree) {
  const std::vector<AttributeId> attrs(3, 0);
  const auto g = build_graph(2, 1, {{0, 2}}, attrs);
  EXPECT_EQ(g.degree(1), 0u);
  Rng rng(1);
  EXPECT_PIXIE_ERROR(g.sample_uniform(1, rng), ErrorCode::kNoNeighbor);
  EXPECT_PIXIE_ERROR(g.sample_biased(1, UserFeatures{1}, 0.5, rng), ErrorCode::kNoNeighbor);
}

TEST(Graph, BuildRejectsNonBipartiteInput) {
  const std::vector<AttributeId> attrs(3, 0);
  EXPECT_PIXIE_ERROR(build_graph(2, 1, {{0, 1}}, attrs), ErrorCode::kInvalidNode);
  EXPECT_PIXIE_ERROR(build_graph(2, 1, {{0, 7}}, attrs), ErrorCode::kInvalidNode);
}

TEST(Graph, UserFeaturesAreASet) {
  const UserFeatures u{3, 1, 3};
  EXPECT_EQ(u.size(), 2u);
  EXPECT_TRUE(u.contains(1));
  EXPECT_TRUE(u.contains(3));
  EXPECT_FALSE(u.contains(2));
}

// ---------------------------------------------------------------------------
// Sampling

TEST(Sampling, SingleNeighborAlwaysReturned) {
  const std::vector<AttributeId> attrs(2, 0);
  const auto g = build_graph(1, 1, {{0, 1}}, attrs);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(g.sample_uniform(0, rng), 1u);
}

TEST(Sampling, UniformPassesChiSquare) {
  // Pins 0..d-1 all on board d, for several degrees up to 16.
  for (std::uint32_t d : {2u, 3u, 7u, 16u}) {
    std::vector<PinBoardEdge> edges;
    for (NodeId p = 0; p < d; ++p) edges.push_back({p, d});
    const std::vector<AttributeId> attrs(d + 1, 0);
    const auto g = build_graph(d, 1, edges, attrs);
    Rng rng = make_rng(77, d);
    std::vector<std::uint64_t> seen(d, 0);
    for (int i = 0; i < 50'000; ++i) ++seen[g.sample_uniform(d, rng)];
    EXPECT_GT(chi_square_p(seen, std::vector<double>(d, 1.0 / d)), 0.001) << "degree " << d;
  }
}

TEST(Sampling, ThreeNeighborsWithinBinomialBound) {
  std::vector<PinBoardEdge> edges{{10, 13}, {11, 13}, {12, 13}};
  const std::vector<AttributeId> attrs(14, 0);
  const auto g = build_graph(13, 1, edges, attrs);
  Rng rng = make_rng(5);
  std::map<NodeId, int> seen;
  const int draws = 30'000;
  for (int i = 0; i < draws; ++i) ++seen[g.sample_uniform(13, rng)];
  const double sigma = std::sqrt(draws * (1.0 / 3) * (2.0 / 3));
  for (NodeId p : {10u, 11u, 12u}) EXPECT_NEAR(seen[p], draws / 3.0, 3 * sigma);
}

namespace {

// Pin 0 on boards 1..10; boards 1 and 2 carry attr 5, the rest attr 1.
BipartiteGraph fan_graph() {
  std::vector<PinBoardEdge> edges;
  for (NodeId b = 1; b <= 10; ++b) edges.push_back({0, b});
  std::vector<AttributeId> attrs(11, 1);
  attrs[1] = attrs[2] = 5;
  return build_graph(1, 10, edges, attrs);
}

}  // namespace

TEST(Sampling, BiasZeroMatchesUniformDrawForDraw) {
  const auto g = random_graph(30, 8, 200, 9);
  Rng a(42), b(42);
  const UserFeatures u{1, 2};
  for (int i = 0; i < 2000; ++i) {
    const NodeId v = static_cast<NodeId>(i % g.node_count());
    if (g.degree(v) == 0) continue;
    ASSERT_EQ(g.sample_biased(v, u, 0.0, a), g.sample_uniform(v, b));
  }
}

TEST(Sampling, FullBiasOnlyReturnsMatchingNeighbors) {
  const auto g = fan_graph();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    for (int i = 0; i < 200; ++i) {
      const NodeId b = g.sample_biased(0, UserFeatures{5}, 1.0, rng);
      ASSERT_TRUE(b == 1 || b == 2) << b;
    }
  }
}

TEST(Sampling, FullBiasWithAllMatchingIsUniform) {
  const auto g = fan_graph();
  Rng rng(8);
  std::vector<std::uint64_t> seen(10, 0);
  for (int i = 0; i < 50'000; ++i) ++seen[g.sample_biased(0, UserFeatures{1, 5}, 1.0, rng) - 1];
  EXPECT_GT(chi_square_p(seen, std::vector<double>(10, 0.1)), 0.001);
}

TEST(Sampling, NoMatchingSubrangeFallsBackToUniform) {
  const auto g = fan_graph();
  Rng rng(8);
  std::vector<std::uint64_t> seen(10, 0);
  for (int i = 0; i < 50'000; ++i) ++seen[g.sample_biased(0, UserFeatures{9}, 1.0, rng) - 1];
  EXPECT_GT(chi_square_p(seen, std::vector<double>(10, 0.1)), 0.001);
}

TEST(Sampling, PartialBiasMixesSubrangeAndSlice) {
  // P(matching) = beta + (1 - beta) * 2/10.
  const auto g = fan_graph();
  Rng rng(10);
  std::vector<std::uint64_t> seen(2, 0);
  for (int i = 0; i < 50'000; ++i) {
    const NodeId b = g.sample_biased(0, UserFeatures{5}, 0.5, rng);
    ++seen[b <= 2 ? 0 : 1];
  }
  EXPECT_GT(chi_square_p(seen, {0.6, 0.4}), 0.001);
}

// ---------------------------------------------------------------------------
// Validation

TEST(Validate, WellFormedGraphIsClean) {
  EXPECT_TRUE(validate(toy_graph().parts()).ok());
  EXPECT_TRUE(validate(GraphParts{}).ok());
}

TEST(Validate, PinPinEdgeIsNotBipartite) {
  GraphParts p = toy_graph().parts();
  p.edges[p.offsets[0]] = 1;  // p0 -> p1
  const auto r = validate(p);
  EXPECT_TRUE(r.has(ViolationKind::kNotBipartite)) << r.summary();
}

TEST(Validate, OneSidedEdgeIsAsymmetric) {
  GraphParts p = toy_graph().parts();
  // p4's only board is b7; point it at b6 instead (still sorted, same attr 2).
  p.edges[p.offsets[4]] = 6;
  const auto r = validate(p);
  EXPECT_TRUE(r.has(ViolationKind::kAsymmetric)) << r.summary();
}

TEST(Validate, NonMonotoneOffsets) {
  GraphParts p = toy_graph().parts();
  std::swap(p.offsets[2], p.offsets[3]);
  EXPECT_TRUE(validate(p).has(ViolationKind::kOffsets));
}

TEST(Validate, OutOfOrderSlice) {
  GraphParts p = toy_graph().parts();
  std::swap(p.edges[p.offsets[5]], p.edges[p.offsets[5] + 1]);  // b5: p1, p0, p2
  EXPECT_TRUE(validate(p).has(ViolationKind::kUnsorted));
}

TEST(Validate, ReportListsEveryViolation) {
  GraphParts p = toy_graph().parts();
  p.edges[p.offsets[0]] = 1;
  std::swap(p.edges[p.offsets[7]], p.edges[p.offsets[7] + 1]);  // b7: p3, p2, p4
  const auto r = validate(p);
  EXPECT_TRUE(r.has(ViolationKind::kNotBipartite));
  EXPECT_TRUE(r.has(ViolationKind::kAsymmetric));
  EXPECT_TRUE(r.has(ViolationKind::kUnsorted));
  EXPECT_FALSE(r.summary().empty());
}

TEST(Validate, FromPartsRejectsBrokenGraph) {
  GraphParts p = toy_graph().parts();
  p.node_attr.pop_back();
  EXPECT_PIXIE_ERROR(BipartiteGraph::from_parts(p), ErrorCode::kInvariantViolation);
}

// Every single-field mutation of a well-formed graph must be reported.
TEST(Validate, FuzzSingleFieldMutations) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto g = random_graph(25, 7, 90, 1000 + seed);
    ASSERT_TRUE(validate(g.parts()).ok());
    GraphParts p = g.parts();
    std::mt19937_64 rng(seed);
    const auto nodes = p.node_count();
    bool changed = false;
    switch (seed % 9) {
      case 0: {  // neighbor ID out of range
        if (p.edges.empty()) break;
        p.edges[rng() % p.edges.size()] = static_cast<NodeId>(nodes + rng() % 5);
        changed = true;
        break;
      }
      case 1: {  // any other neighbor ID
        if (p.edges.empty()) break;
        const auto i = rng() % p.edges.size();
        const auto old = p.edges[i];
        p.edges[i] = static_cast<NodeId>(rng() % nodes);
        changed = p.edges[i] != old;
        break;
      }
      case 2: {  // one offset
        const auto i = rng() % p.offsets.size();
        p.offsets[i] += 1 + rng() % 3;
        changed = true;
        break;
      }
      case 3: {  // a node's attribute
        const auto v = rng() % nodes;
        if (p.offsets[v + 1] == p.offsets[v]) break;  // unseen by anyone
        p.node_attr[v] = static_cast<AttributeId>(p.node_attr[v] + 1 + rng() % 3);
        changed = true;
        break;
      }
      case 4: {  // a range boundary
        if (p.ranges.empty()) break;
        auto& r = p.ranges[rng() % p.ranges.size()];
        if (rng() % 2) {
          r.end += 1;
        } else {
          r.begin += 1;
        }
        changed = true;
        break;
      }
      case 5: {  // a range label
        if (p.ranges.empty()) break;
        p.ranges[rng() % p.ranges.size()].attr += 7;
        changed = true;
        break;
      }
      case 6: {  // swap two distinct entries inside one slice
        const auto v = rng() % nodes;
        const auto b = p.offsets[v], e = p.offsets[v + 1];
        if (e - b < 2) break;
        const auto i = b + rng() % (e - b), j = b + rng() % (e - b);
        if (p.edges[i] == p.edges[j]) break;
        std::swap(p.edges[i], p.edges[j]);
        changed = true;
        break;
      }
      case 7: {  // counts
        if (rng() % 2) {
          p.pin_count += 1;
        } else {
          p.board_count -= 1;
        }
        changed = true;
        break;
      }
      case 8: {  // array lengths
        if (rng() % 2) {
          p.node_attr.push_back(0);
        } else {
          p.range_offsets.back() += 1;
        }
        changed = true;
        break;
      }
    }
    if (!changed) continue;
    ++checked;
    EXPECT_FALSE(validate(p).ok()) << "seed " << seed << " mutation " << seed % 9;
  }
  EXPECT_GT(checked, 300);
}
