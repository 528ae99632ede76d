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

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "pixie/synth.hpp"
#include "pixie/walk.hpp"
#include "test_util.hpp"

using namespace pixie;
using pixie::testing::random_graph;
using pixie::testing::toy_graph;
using pixie::testing::total_variation;
using pixie::testing::walk_visit_oracle;

namespace {

WalkConfig steps(std::uint64_t n) {
  WalkConfig c;
  c.total_steps = n;
  return c;
}

std::vector<double> visit_shares(const VisitCounter& visits, std::size_t pins) {
  std::vector<double> out(pins, 0.0);
  visits.for_each([&](NodeId k, std::uint32_t c) { out[k] = c; });
  for (double& v : out) v /= static_cast<double>(visits.total());
  return out;
}

// Two components: pins 0-2 on board 6, pins 3-5 on board 7.
BipartiteGraph two_components() {
  std::vector<PinBoardEdge> e{{0, 6}, {1, 6}, {2, 6}, {3, 7}, {4, 7}, {5, 7}};
  const std::vector<AttributeId> attrs(8, 0);
  return build_graph(6, 2, std::move(e), attrs);
}

}  // namespace

// ---------------------------------------------------------------------------
// Walk length

TEST(WalkLength, GeometricMeanAndShape) {
  Rng rng = make_rng(1);
  const int n = 200'000;
  std::map<std::uint32_t, int> hist;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    const auto l = sample_walk_length(0.5, rng, 1000);
    ASSERT_GE(l, 1u);
    ++hist[l];
    sum += l;
  }
  EXPECT_NEAR(sum / n, 2.0, 0.02);
  EXPECT_NEAR(hist[1] / double(n), 0.5, 0.005);
  EXPECT_NEAR(hist[2] / double(n), 0.25, 0.005);
  EXPECT_NEAR(hist[3] / double(n), 0.125, 0.005);
}

TEST(WalkLength, TruncatedAtCap) {
  Rng rng = make_rng(2);
  int at_cap = 0;
  for (int i = 0; i < 10'000; ++i) {
    const auto l = sample_walk_length(0.01, rng, 5);
    ASSERT_LE(l, 5u);
    at_cap += l == 5;
  }
  // P(L >= 5) = 0.99^4
  EXPECT_NEAR(at_cap / 10'000.0, std::pow(0.99, 4), 0.01);
  EXPECT_EQ(sample_walk_length(0.5, rng, 1), 1u);
}

TEST(WalkLength, RejectsBadParameters) {
  Rng rng = make_rng(3);
  EXPECT_PIXIE_ERROR(sample_walk_length(0.0, rng, 10), ErrorCode::kConfig);
  EXPECT_PIXIE_ERROR(sample_walk_length(1.0, rng, 10), ErrorCode::kConfig);
  EXPECT_PIXIE_ERROR(sample_walk_length(0.5, rng, 0), ErrorCode::kConfig);
}

// ---------------------------------------------------------------------------
// Basic walk

TEST(BasicWalk, TwoPinStarSplitsEvenly) {
  const auto g = build_graph(2, 1, {{0, 2}, {1, 2}}, std::vector<AttributeId>(3, 0));
  Rng rng = make_rng(4);
  VisitCounter visits;
  const auto s = basic_random_walk(g, 0, steps(20'000), rng, visits);
  EXPECT_GE(s.steps_used, 20'000u);
  EXPECT_EQ(visits.total(), s.steps_used);
  EXPECT_NEAR(visits.lookup(1) / double(visits.total()), 0.5, 0.02);
}

TEST(BasicWalk, MatchesVisitOracle) {
  const auto g = toy_graph();
  WalkConfig cfg = steps(300'000);
  for (NodeId q : {0u, 2u, 4u}) {
    Rng rng = make_rng(5, q);
    VisitCounter visits;
    basic_random_walk(g, q, cfg, rng, visits);
    const auto oracle = walk_visit_oracle(g, q, cfg.alpha, cfg.max_walk_length);
    EXPECT_LT(total_variation(visit_shares(visits, 5), oracle), 0.01) << "q=" << q;
  }
}

TEST(BasicWalk, OracleRespondsToAlpha) {
  const auto g = toy_graph();
  WalkConfig cfg = steps(300'000);
  cfg.alpha = 0.2;
  Rng rng = make_rng(6);
  VisitCounter visits;
  basic_random_walk(g, 0, cfg, rng, visits);
  const auto oracle = walk_visit_oracle(g, 0, 0.2, cfg.max_walk_length);
  EXPECT_LT(total_variation(visit_shares(visits, 5), oracle), 0.01);
  // Longer walks reach the far pin more often than alpha = 0.5 does.
  EXPECT_GT(oracle[4], walk_visit_oracle(g, 0, 0.5, 100)[4]);
}

TEST(BasicWalk, StaysInsideComponent) {
  const auto g = two_components();
  Rng rng = make_rng(7);
  VisitCounter visits;
  basic_random_walk(g, 1, steps(5'000), rng, visits);
  visits.for_each([](NodeId k, std::uint32_t) { EXPECT_LT(k, 3u); });
  const auto r = pixie_random_walk_multiple(WeightedQuery::single(1), g, steps(5'000), rng);
  for (const auto& p : r.items) EXPECT_LT(p.pin, 3u);
  EXPECT_EQ(r.items.size(), 2u);
}

TEST(BasicWalk, Errors) {
  const auto g = build_graph(3, 1, {{0, 3}, {1, 3}}, std::vector<AttributeId>(4, 0));
  Rng rng = make_rng(8);
  VisitCounter visits;
  EXPECT_PIXIE_ERROR(basic_random_walk(g, 3, steps(10), rng, visits), ErrorCode::kInvalidQueryPin);
  EXPECT_PIXIE_ERROR(basic_random_walk(g, 2, steps(10), rng, visits), ErrorCode::kWalkDeadEnd);
  EXPECT_PIXIE_ERROR(basic_random_walk(g, 9, steps(10), rng, visits), ErrorCode::kInvalidQueryPin);
  WalkConfig bad = steps(10);
  bad.alpha = 1.0;
  EXPECT_PIXIE_ERROR(basic_random_walk(g, 0, bad, rng, visits), ErrorCode::kConfig);
}

// ---------------------------------------------------------------------------
// Pixie walk

TEST(PixieWalk, ZeroBiasIsTheBasicWalk) {
  const auto g = random_graph(60, 20, 300, 9);
  WalkConfig cfg = steps(5'000).without_early_stop();
  NodeId q = 0;
  while (g.degree(q) == 0) ++q;
  Rng a = make_rng(10), b = make_rng(10);
  VisitCounter va, vb;
  const auto sa = basic_random_walk(g, q, cfg, a, va);
  const auto sb = pixie_random_walk(g, q, UserFeatures{1, 2}, cfg, cfg.total_steps, b, vb);
  EXPECT_EQ(sa, sb);
  EXPECT_EQ(va.entries().size(), vb.entries().size());
  for (const auto& e : va.entries()) EXPECT_EQ(vb.lookup(e.key), e.count);
  EXPECT_EQ(a(), b());
}

// Reference loop with the same random-number consumption as the engine.
TEST(PixieWalk, EarlyStopMatchesReplay) {
  const auto g = random_graph(40, 10, 200, 11);
  WalkConfig cfg = steps(50'000);
  cfg.early_stop_pins = 5;
  cfg.early_stop_visits = 3;
  cfg.bias_strength = 0.4;
  const UserFeatures user{2};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    NodeId q = static_cast<NodeId>(seed % 40);
    while (g.degree(q) == 0) q = (q + 1) % 40;
    Rng rng = make_rng(12, seed);
    VisitCounter visits;
    const auto s = pixie_random_walk(g, q, user, cfg, cfg.total_steps, rng, visits);

    Rng ref_rng = make_rng(12, seed);
    std::map<NodeId, std::uint32_t> ref;
    std::uint64_t taken = 0, high = 0;
    do {
      NodeId pin = q;
      const auto len = sample_walk_length(cfg.alpha, ref_rng, cfg.max_walk_length);
      for (std::uint32_t i = 0; i < len; ++i) {
        pin = g.sample_biased(g.sample_biased(pin, user, cfg.bias_strength, ref_rng), user,
                              cfg.bias_strength, ref_rng);
        if (++ref[pin] == cfg.early_stop_visits) ++high;
      }
      taken += len;
    } while (taken < cfg.total_steps && high <= cfg.early_stop_pins);

    EXPECT_EQ(s.steps_used, taken);
    EXPECT_EQ(s.early_stopped, taken < cfg.total_steps);
    EXPECT_TRUE(s.early_stopped);
    EXPECT_EQ(visits.size(), ref.size());
    for (const auto& [k, c] : ref) EXPECT_EQ(visits.lookup(k), c);
  }
}

TEST(PixieWalk, NpZeroNvOneStopsAfterFirstSegment) {
  const auto g = toy_graph();
  WalkConfig cfg = steps(10'000);
  cfg.early_stop_pins = 0;
  cfg.early_stop_visits = 1;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng = make_rng(13, seed), ref = make_rng(13, seed);
    VisitCounter visits;
    const auto s = pixie_random_walk(g, 0, {}, cfg, cfg.total_steps, rng, visits);
    EXPECT_EQ(s.steps_used, sample_walk_length(cfg.alpha, ref, cfg.max_walk_length));
    EXPECT_TRUE(s.early_stopped);
  }
}

TEST(PixieWalk, UnreachableThresholdRunsFullBudget) {
  const auto g = toy_graph();
  const WalkConfig cfg = steps(10'000).without_early_stop();
  Rng rng = make_rng(14);
  VisitCounter visits;
  const auto s = pixie_random_walk(g, 0, {}, cfg, 777, rng, visits);
  EXPECT_FALSE(s.early_stopped);
  EXPECT_GE(s.steps_used, 777u);
  EXPECT_LT(s.steps_used, 777u + cfg.max_walk_length);
  EXPECT_EQ(visits.total(), s.steps_used);
}

TEST(PixieWalk, FullBiasKeepsWalkInsideAttribute) {
  const auto g = toy_graph();
  WalkConfig cfg = steps(5'000).without_early_stop();
  cfg.bias_strength = 1.0;
  Rng rng = make_rng(15);
  VisitCounter visits;
  // From p0 (attr 1): boards with attr 1 are {b5}, pins with attr 1 on it are {p0, p1}.
  pixie_random_walk(g, 0, UserFeatures{1}, cfg, cfg.total_steps, rng, visits);
  visits.for_each([&](NodeId k, std::uint32_t) { EXPECT_EQ(g.attr(k), 1) << k; });
}

TEST(PixieWalk, ZeroBudgetRejected) {
  const auto g = toy_graph();
  Rng rng = make_rng(16);
  VisitCounter visits;
  EXPECT_PIXIE_ERROR(pixie_random_walk(g, 0, {}, steps(10), 0, rng, visits), ErrorCode::kConfig);
}

// ---------------------------------------------------------------------------
// Step allocation

TEST(ScalingFactor, Examples) {
  EXPECT_DOUBLE_EQ(scaling_factor(1, 100), 100.0);
  EXPECT_NEAR(scaling_factor(4, 100), 394.4548, 1e-4);
  EXPECT_DOUBLE_EQ(scaling_factor(1, 1), 1.0);
  // ln 20 > 2: clamped to a tiny positive share.
  EXPECT_DOUBLE_EQ(scaling_factor(20, 2), 20e-6);
  EXPECT_PIXIE_ERROR(scaling_factor(0, 10), ErrorCode::kInvalidDegree);
}

TEST(ScalingFactor, RisesWithDegreeWhileLogBelowC) {
  for (std::uint64_t d = 1; d < 1000; ++d) {
    EXPECT_LT(scaling_factor(d, 1000), scaling_factor(d + 1, 1000)) << d;
  }
}

TEST(AllocateSteps, Examples) {
  const StepRequest same[] = {{0, 1.0, 3}, {1, 1.0, 3}};
  EXPECT_EQ(allocate_steps(same, 100, 1000), (std::vector<std::uint64_t>{500, 500}));
  const StepRequest mixed[] = {{0, 1.0, 1}, {1, 1.0, 4}};
  EXPECT_EQ(allocate_steps(mixed, 100, 1000), (std::vector<std::uint64_t>{202, 798}));
  const StepRequest one[] = {{5, 0.3, 7}};
  EXPECT_EQ(allocate_steps(one, 100, 777), (std::vector<std::uint64_t>{777}));
  // Weight scales the share before the degree factor does.
  const StepRequest weighted[] = {{0, 3.0, 2}, {1, 1.0, 2}};
  EXPECT_EQ(allocate_steps(weighted, 50, 100), (std::vector<std::uint64_t>{75, 25}));
}

TEST(AllocateSteps, TiesGoToLowerPin) {
  const StepRequest three[] = {{9, 1.0, 2}, {4, 1.0, 2}, {7, 1.0, 2}};
  EXPECT_EQ(allocate_steps(three, 10, 10), (std::vector<std::uint64_t>{3, 4, 3}));
}

TEST(AllocateSteps, EveryPinGetsAStep) {
  const StepRequest skewed[] = {{0, 1e-9, 1}, {1, 1.0, 50}, {2, 1.0, 40}};
  const auto s = allocate_steps(skewed, 50, 3);
  EXPECT_EQ(s, (std::vector<std::uint64_t>{1, 1, 1}));
  const auto t = allocate_steps(skewed, 50, 10);
  EXPECT_EQ(t[0], 1u);
  EXPECT_EQ(std::accumulate(t.begin(), t.end(), std::uint64_t{0}), 10u);
}

TEST(AllocateSteps, SumsExactlyOnRandomQueries) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    std::vector<StepRequest> req;
    for (std::size_t i = 0; i < n; ++i) {
      req.push_back({static_cast<NodeId>(i), 0.01 + (rng() % 1000) / 100.0, 1 + rng() % 200});
    }
    const std::uint64_t total = n + rng() % 100'000;
    const auto s = allocate_steps(req, 200, total);
    ASSERT_EQ(s.size(), n);
    EXPECT_EQ(std::accumulate(s.begin(), s.end(), std::uint64_t{0}), total);
    for (auto v : s) EXPECT_GE(v, 1u);
  }
}

TEST(AllocateSteps, MonotoneInWeight) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<StepRequest> req;
    const std::size_t n = 2 + rng() % 6;
    for (std::size_t i = 0; i < n; ++i) req.push_back({NodeId(i), 1.0 + rng() % 10, 1 + rng() % 50});
    const std::uint64_t total = 10'000 + rng() % 10'000;
    const auto before = allocate_steps(req, 100, total);
    req[0].weight *= 1.5;
    const auto after = allocate_steps(req, 100, total);
    EXPECT_GE(after[0], before[0]);
  }
}

TEST(AllocateSteps, StepsPerDegreeFallAsDegreeGrows) {
  // Equal weights; steps per unit of degree must not rise with degree.
  std::vector<StepRequest> req;
  for (std::uint64_t d : {1, 2, 5, 10, 20, 40, 80}) req.push_back({NodeId(d), 1.0, d});
  const auto s = allocate_steps(req, 80, 1'000'000);
  for (std::size_t i = 1; i < s.size(); ++i) {
    EXPECT_LE(double(s[i]) / req[i].degree, double(s[i - 1]) / req[i - 1].degree) << i;
    EXPECT_GT(s[i], s[i - 1]);
  }
}

TEST(AllocateSteps, Errors) {
  EXPECT_PIXIE_ERROR(allocate_steps(std::span<const StepRequest>{}, 10, 10), ErrorCode::kEmptyQuery);
  const StepRequest two[] = {{0, 1.0, 1}, {1, 1.0, 1}};
  EXPECT_PIXIE_ERROR(allocate_steps(two, 10, 1), ErrorCode::kConfig);
  const StepRequest zero_w[] = {{0, 0.0, 1}};
  EXPECT_PIXIE_ERROR(allocate_steps(zero_w, 10, 10), ErrorCode::kConfig);
  const StepRequest nan_w[] = {{0, std::nan(""), 1}};
  EXPECT_PIXIE_ERROR(allocate_steps(nan_w, 10, 10), ErrorCode::kConfig);
  const StepRequest isolated[] = {{0, 1.0, 0}};
  EXPECT_PIXIE_ERROR(allocate_steps(isolated, 10, 10), ErrorCode::kInvalidQueryPin);
}

// ---------------------------------------------------------------------------
// Combination and ranking

TEST(CombineCounts, SingleCounterIsIdentity) {
  VisitCounter c(16);
  for (int i = 0; i < 7; ++i) c.increment(3);
  c.increment(5);
  const auto m = combine_counts(std::span<const VisitCounter>(&c, 1));
  EXPECT_EQ(m.at(3), 7.0);
  EXPECT_EQ(m.at(5), 1.0);
  EXPECT_EQ(m.size(), 2u);
}

TEST(CombineCounts, MultiHitBoost) {
  std::vector<VisitCounter> cs(2, VisitCounter(16));
  for (int i = 0; i < 4; ++i) cs[0].increment(1);
  for (int i = 0; i < 9; ++i) cs[1].increment(1);
  for (int i = 0; i < 13; ++i) cs[1].increment(2);
  const auto m = combine_counts(cs);
  EXPECT_DOUBLE_EQ(m.at(1), 25.0);  // (2 + 3)^2
  EXPECT_EQ(m.at(2), 13.0);
  // A pin seen by several queries beats one with the same total from one query.
  EXPECT_GT(m.at(1), 13.0);
}

TEST(CombineCounts, DisjointCountersAreAPlainUnion) {
  std::vector<VisitCounter> cs(3, VisitCounter(64));
  for (NodeId k = 0; k < 60; ++k) {
    for (NodeId i = 0; i <= k % 5; ++i) cs[k % 3].increment(k);
  }
  const auto m = combine_counts(cs);
  EXPECT_EQ(m.size(), 60u);
  for (NodeId k = 0; k < 60; ++k) EXPECT_EQ(m.at(k), double(k % 5 + 1));
}

TEST(CombineCounts, CombinerGrowsPastInitialSize) {
  CountCombiner combiner(0);
  std::vector<VisitCounter> cs(3, VisitCounter(5000));
  std::mt19937_64 rng(18);
  for (auto& c : cs) {
    for (int i = 0; i < 4000; ++i) c.increment(static_cast<NodeId>(rng() % 3000));
  }
  std::map<NodeId, double> ref_roots;
  std::map<NodeId, int> ref_hits;
  std::map<NodeId, double> ref_raw;
  for (auto& c : cs) {
    combiner.add(c);
    c.for_each([&](NodeId k, std::uint32_t n) {
      ref_roots[k] += std::sqrt(double(n));
      ref_raw[k] += n;
      ++ref_hits[k];
    });
  }
  EXPECT_EQ(combiner.size(), ref_roots.size());
  combiner.for_each([&](NodeId k, double v) {
    const double expect = ref_hits[k] == 1 ? ref_raw[k] : ref_roots[k] * ref_roots[k];
    EXPECT_NEAR(v, expect, 1e-9 * expect) << k;
  });
}

TEST(TopK, OrdersByScoreThenPin) {
  const ScoreMap m{{4, 2.0}, {1, 5.0}, {9, 2.0}, {2, 2.0}, {7, 0.5}};
  const auto r = top_k(m, 3);
  ASSERT_EQ(r.items.size(), 3u);
  EXPECT_EQ(r.items[0], (ScoredPin{1, 5.0}));
  EXPECT_EQ(r.items[1], (ScoredPin{2, 2.0}));
  EXPECT_EQ(r.items[2], (ScoredPin{4, 2.0}));
  EXPECT_EQ(top_k(m, 100).items.size(), 5u);
  EXPECT_TRUE(top_k({}, 10).items.empty());
}

// ---------------------------------------------------------------------------
// Multi-pin queries

TEST(MultiWalk, ExcludesQueryPinsAndIsSorted) {
  const auto g = random_graph(100, 30, 600, 19);
  WeightedQuery q;
  for (NodeId p = 0; q.entries.size() < 4; ++p) {
    if (g.degree(p) > 0) q.entries.push_back({p, 1.0 + p});
  }
  Rng rng = make_rng(20);
  WalkConfig cfg = steps(20'000);
  cfg.top_k = 50;
  const auto r = pixie_random_walk_multiple(q, g, cfg, rng);
  EXPECT_LE(r.items.size(), 50u);
  EXPECT_FALSE(r.items.empty());
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    for (const auto& e : q.entries) EXPECT_NE(r.items[i].pin, e.pin);
    EXPECT_TRUE(g.is_pin(r.items[i].pin));
    if (i > 0) {
      const auto& a = r.items[i - 1];
      const auto& b = r.items[i];
      EXPECT_TRUE(a.score > b.score || (a.score == b.score && a.pin < b.pin));
    }
  }
  EXPECT_GE(r.stats.steps_used, 1u);
}

TEST(MultiWalk, DeterministicForSeedAndWorkspaceReuse) {
  const auto g = random_graph(200, 50, 2000, 21);
  WeightedQuery q{{{0, 1.0}, {1, 2.0}, {2, 0.5}}, UserFeatures{1}};
  q.entries.erase(std::remove_if(q.entries.begin(), q.entries.end(),
                                 [&](const QueryEntry& e) { return g.degree(e.pin) == 0; }),
                  q.entries.end());
  ASSERT_FALSE(q.entries.empty());
  WalkConfig cfg = steps(30'000);
  cfg.bias_strength = 0.5;
  WalkWorkspace ws;
  Rng r1 = make_rng(22);
  const auto first = pixie_random_walk_multiple(q, g, cfg, r1, ws);
  for (int i = 0; i < 5; ++i) {
    Rng r = make_rng(22);
    EXPECT_EQ(pixie_random_walk_multiple(q, g, cfg, r, ws), first);
  }
  Rng other = make_rng(23);
  EXPECT_NE(pixie_random_walk_multiple(q, g, cfg, other, ws), first);
}

TEST(MultiWalk, QueryValidation) {
  const auto g = build_graph(3, 1, {{0, 3}, {1, 3}}, std::vector<AttributeId>(4, 0));
  Rng rng = make_rng(24);
  const WalkConfig cfg = steps(100);
  EXPECT_PIXIE_ERROR(pixie_random_walk_multiple({}, g, cfg, rng), ErrorCode::kEmptyQuery);
  EXPECT_PIXIE_ERROR(pixie_random_walk_multiple(WeightedQuery::single(3), g, cfg, rng),
                     ErrorCode::kInvalidQueryPin);
  EXPECT_PIXIE_ERROR(pixie_random_walk_multiple(WeightedQuery::single(2), g, cfg, rng),
                     ErrorCode::kInvalidQueryPin);
  EXPECT_PIXIE_ERROR(pixie_random_walk_multiple(WeightedQuery{{{0, 1.0}, {0, 1.0}}, {}}, g, cfg, rng),
                     ErrorCode::kInvalidQueryPin);
  EXPECT_PIXIE_ERROR(pixie_random_walk_multiple(WeightedQuery{{{0, -1.0}}, {}}, g, cfg, rng),
                     ErrorCode::kConfig);
  EXPECT_PIXIE_ERROR(pixie_random_walk_multiple(WeightedQuery{{{0, 1.0}, {1, 1.0}}, {}}, g,
                                                steps(1), rng),
                     ErrorCode::kConfig);
}

TEST(MultiWalk, RecoversPlantedCommunity) {
  const SynthConfig sc;  // default scale, noise 0.05
  const auto data = generate_synthetic(sc);
  const auto compiled = compile_unpruned(data);
  const auto& g = compiled.graph;
  WalkConfig cfg = steps(20'000);
  cfg.top_k = 20;
  WalkWorkspace ws;
  double fraction = 0.0;
  int queries = 0;
  for (NodeId q = 0; queries < 100; q += 97) {
    if (g.degree(q) == 0) continue;
    ++queries;
    Rng rng = make_rng(26, q);
    const auto r = pixie_random_walk_multiple(WeightedQuery::single(q), g, cfg, rng, ws);
    ASSERT_EQ(r.items.size(), 20u);
    int same = 0;
    for (const auto& p : r.items) same += data.pin_community[p.pin] == data.pin_community[q];
    fraction += same / 20.0;
  }
  EXPECT_GE(fraction / queries, 0.9);
}
