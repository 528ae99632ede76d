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

#include "pixie/eval.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

namespace pixie {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

double mean(std::span<const double> v) {
  return v.empty() ? kNaN : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<NodeId> pins_of(const RankedResult& r) {
  std::vector<NodeId> out;
  out.reserve(r.items.size());
  for (const ScoredPin& p : r.items) out.push_back(p.pin);
  return out;
}

// Per-board training saves in time order, built in one pass.
std::vector<std::vector<std::uint32_t>> saves_by_board(const EdgeList& edges) {
  std::vector<std::vector<std::uint32_t>> out(edges.board_count());
  for (const BoardPin& e : edges.edges) out[e.board].push_back(e.pin);
  return out;
}

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t count, Rng& rng) {
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t take = std::min(count, population);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(draw_below(rng, population - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(take);
  return idx;
}

}  // namespace

// ---------------------------------------------------------------------------
// Report

std::string EvalReport::to_csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << num(row[i]);
    out << '\n';
  }
  return out.str();
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : parameters) j["parameters"][k] = v;
  j["columns"] = columns;
  j["rows"] = rows;
  j["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : summary) j["summary"][k] = v;
  j["runtimeSeconds"] = runtime_seconds;
  return j.dump(2);
}

double EvalReport::summary_value(const std::string& name) const {
  for (const auto& [k, v] : summary) {
    if (k == name) return v;
  }
  throw Error(ErrorCode::kEval, "no summary value '" + name + "' in " + experiment);
}

std::vector<double> EvalReport::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorCode::kEval, "no column '" + name + "' in " + experiment);
  const auto c = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  for (const auto& row : rows) out.push_back(row[c]);
  return out;
}

// ---------------------------------------------------------------------------
// Statistics

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kEval, "line fit needs two or more paired points");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::kEval, "line fit needs distinct x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

PairedTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw Error(ErrorCode::kEval, "paired test needs two or more pairs");
  }
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = b[i] - a[i];
  PairedTest out;
  out.mean_difference = mean(d);
  double ss = 0.0;
  for (double v : d) ss += (v - out.mean_difference) * (v - out.mean_difference);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) {
    out.t = out.mean_difference > 0 ? std::numeric_limits<double>::infinity()
                                     : out.mean_difference < 0 ? -std::numeric_limits<double>::infinity()
                                                               : 0.0;
    out.p_one_sided = out.mean_difference > 0 ? 0.0 : out.mean_difference < 0 ? 1.0 : 0.5;
    return out;
  }
  out.t = out.mean_difference / (sd / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  out.p_one_sided = boost::math::cdf(boost::math::complement(dist, out.t));
  return out;
}

LinkScores link_scores(std::span<const NodeId> recommended, std::span<const NodeId> held_out) {
  const std::unordered_set<NodeId> truth(held_out.begin(), held_out.end());
  const std::unordered_set<NodeId> recs(recommended.begin(), recommended.end());
  std::size_t hits = 0;
  for (NodeId p : recs) hits += truth.count(p);
  LinkScores s;
  if (!recs.empty()) s.precision = static_cast<double>(hits) / static_cast<double>(recs.size());
  if (!truth.empty()) s.recall = static_cast<double>(hits) / static_cast<double>(truth.size());
  if (s.precision + s.recall > 0.0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

double overlap(std::span<const ScoredPin> a, std::span<const ScoredPin> b) {
  if (b.empty()) return 1.0;
  std::unordered_set<NodeId> in_a;
  for (const ScoredPin& p : a) in_a.insert(p.pin);
  std::size_t shared = 0;
  for (const ScoredPin& p : b) shared += in_a.count(p.pin);
  return static_cast<double>(shared) / static_cast<double>(b.size());
}

std::vector<NodeId> sample_query_pins(const BipartiteGraph& graph, std::size_t count,
                                      std::uint64_t seed) {
  std::vector<NodeId> candidates;
  for (NodeId p = 0; p < graph.pin_count(); ++p) {
    if (graph.degree(p) > 0) candidates.push_back(p);
  }
  if (candidates.empty()) throw Error(ErrorCode::kEval, "graph has no connected pin");
  Rng rng = make_rng(seed, 0x9);
  std::vector<NodeId> out;
  for (std::size_t i : sample_indices(candidates.size(), count, rng)) out.push_back(candidates[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Link prediction under pruning

EvalReport link_prediction_eval(const LinkPredConfig& cfg) {
  const Stopwatch clock;
  if (cfg.deltas.empty()) throw Error(ErrorCode::kEval, "no pruning factors to sweep");
  if (cfg.query_len < 1 || cfg.top < 1) throw Error(ErrorCode::kEval, "query length and top must be >= 1");
  const SyntheticData data = generate_synthetic(cfg.synth);
  const auto saves = saves_by_board(data.edges);

  std::vector<std::uint32_t> eligible;
  for (std::uint32_t b = 0; b < data.edges.board_count(); ++b) {
    if (!data.holdout[b].empty() && !saves[b].empty()) eligible.push_back(b);
  }
  if (eligible.empty()) throw Error(ErrorCode::kEval, "no board has held-out saves");
  Rng pick = make_rng(cfg.seed, 0xB0);
  std::vector<std::uint32_t> boards;
  for (std::size_t i : sample_indices(eligible.size(), cfg.boards, pick)) boards.push_back(eligible[i]);

  EvalReport report;
  report.experiment = "linkpred";
  report.parameters = {{"communities", std::to_string(cfg.synth.communities)},
                       {"noise", num(cfg.synth.cross_community_noise)},
                       {"popularitySkew", num(cfg.synth.popularity_skew)},
                       {"entropyQuantile", num(cfg.entropy_quantile)},
                       {"boards", std::to_string(boards.size())},
                       {"queryLen", std::to_string(cfg.query_len)},
                       {"top", std::to_string(cfg.top)},
                       {"steps", std::to_string(cfg.walk.total_steps)},
                       {"seed", std::to_string(cfg.seed)}};
  report.columns = {"delta", "edges", "precision", "recall", "f1", "boards"};

  WalkConfig walk = cfg.walk;
  walk.top_k = cfg.top;
  WalkWorkspace ws;
  for (double delta : cfg.deltas) {
    PruneConfig prune;
    prune.entropy_quantile = cfg.entropy_quantile;
    prune.delta = delta;
    const CompiledGraph compiled = compile_graph(data.edges, data.topics, prune);
    const BipartiteGraph& g = compiled.graph;

    std::vector<double> p, r, f;
    for (std::uint32_t b : boards) {
      const auto& history = saves[b];
      WeightedQuery q;
      const std::size_t from = history.size() > cfg.query_len ? history.size() - cfg.query_len : 0;
      for (std::size_t i = from; i < history.size(); ++i) {
        if (g.degree(history[i]) > 0) q.entries.push_back({history[i], 1.0});
      }
      if (q.entries.empty()) continue;
      Rng rng = make_rng(cfg.seed, b);  // same stream at every delta
      const RankedResult res = pixie_random_walk_multiple(q, g, walk, rng, ws);
      const LinkScores s = link_scores(pins_of(res), data.holdout[b]);
      p.push_back(s.precision);
      r.push_back(s.recall);
      f.push_back(s.f1);
    }
    if (f.empty()) throw Error(ErrorCode::kEval, "no evaluable board at delta " + num(delta));
    report.rows.push_back({delta, static_cast<double>(g.edge_count()), mean(p), mean(r), mean(f),
                           static_cast<double>(f.size())});
  }

  double baseline = kNaN, best = kNaN, best_delta = kNaN;
  for (const auto& row : report.rows) {
    if (row[0] == 1.0) {
      baseline = row[4];
    } else if (std::isnan(best) || row[4] > best) {
      best = row[4];
      best_delta = row[0];
    }
  }
  report.summary = {{"baseline_f1", baseline},
                    {"best_f1", best},
                    {"best_delta", best_delta},
                    {"relative_lift", baseline > 0.0 ? best / baseline - 1.0 : kNaN}};
  report.runtime_seconds = clock.seconds();
  return report;
}

// ---------------------------------------------------------------------------
// Stability

std::vector<std::uint64_t> stability_counts(const BipartiteGraph& graph, const WeightedQuery& query,
                                            const WalkConfig& cfg, std::uint32_t repeats,
                                            std::span<const std::uint32_t> thresholds,
                                            std::uint64_t seed, bool reuse_seed) {
  std::unordered_map<NodeId, std::uint32_t> appearances;
  WalkWorkspace ws;
  for (std::uint32_t r = 0; r < repeats; ++r) {
    Rng rng = make_rng(seed, reuse_seed ? 0 : r + 1);
    const RankedResult res = pixie_random_walk_multiple(query, graph, cfg, rng, ws);
    for (const ScoredPin& p : res.items) ++appearances[p.pin];
  }
  std::vector<std::uint64_t> out;
  for (std::uint32_t k : thresholds) {
    std::uint64_t n = 0;
    for (const auto& [pin, count] : appearances) n += count >= k ? 1 : 0;
    out.push_back(n);
  }
  return out;
}

EvalReport stability_eval(const StabilityConfig& cfg) {
  const Stopwatch clock;
  for (std::uint32_t k : cfg.thresholds) {
    if (k < 1 || k > cfg.repeats) throw Error(ErrorCode::kEval, "thresholds must be in [1, repeats]");
  }
  const CompiledGraph compiled = compile_unpruned(generate_synthetic(cfg.synth));
  const auto pins = sample_query_pins(compiled.graph, cfg.queries, cfg.seed);

  EvalReport report;
  report.experiment = "stability";
  report.parameters = {{"queries", std::to_string(pins.size())},
                       {"repeats", std::to_string(cfg.repeats)},
                       {"top", std::to_string(cfg.top)},
                       {"reuseSeed", cfg.reuse_seed ? "true" : "false"},
                       {"seed", std::to_string(cfg.seed)}};
  report.columns = {"steps", "k", "mean_pins"};
  for (std::uint64_t n : cfg.steps) {
    WalkConfig walk;
    walk.total_steps = n;
    walk.top_k = cfg.top;
    walk = walk.without_early_stop();
    std::vector<double> totals(cfg.thresholds.size(), 0.0);
    for (std::size_t i = 0; i < pins.size(); ++i) {
      const auto counts = stability_counts(compiled.graph, WeightedQuery::single(pins[i]), walk,
                                           cfg.repeats, cfg.thresholds, mix_seed(cfg.seed, i),
                                           cfg.reuse_seed);
      for (std::size_t k = 0; k < counts.size(); ++k) totals[k] += static_cast<double>(counts[k]);
    }
    for (std::size_t k = 0; k < totals.size(); ++k) {
      report.rows.push_back({static_cast<double>(n), static_cast<double>(cfg.thresholds[k]),
                             totals[k] / static_cast<double>(pins.size())});
    }
  }
  report.runtime_seconds = clock.seconds();
  return report;
}

// ---------------------------------------------------------------------------
// Early stopping

EvalReport early_stop_eval(const EarlyStopConfig& cfg) {
  const Stopwatch clock;
  const CompiledGraph compiled = compile_unpruned(generate_synthetic(cfg.synth));
  const BipartiteGraph& g = compiled.graph;
  const auto pins = sample_query_pins(g, cfg.queries, cfg.seed);

  WalkConfig base;
  base.total_steps = cfg.steps;
  base.top_k = cfg.top;
  base.alpha = cfg.alpha;
  WalkWorkspace ws;

  std::vector<RankedResult> gold;
  for (std::size_t i = 0; i < pins.size(); ++i) {
    Rng rng = make_rng(cfg.seed, 2 * i);
    gold.push_back(pixie_random_walk_multiple(WeightedQuery::single(pins[i]), g,
                                              base.without_early_stop(), rng, ws));
  }

  EvalReport report;
  report.experiment = "earlystop";
  report.parameters = {{"queries", std::to_string(pins.size())},
                       {"steps", std::to_string(cfg.steps)},
                       {"top", std::to_string(cfg.top)},
                       {"alpha", num(cfg.alpha)},
                       {"seed", std::to_string(cfg.seed)}};
  report.columns = {"np", "nv", "overlap", "mean_steps", "reduction"};
  double op_overlap = kNaN, op_reduction = kNaN;
  for (std::uint64_t np : cfg.np_grid) {
    for (std::uint32_t nv : cfg.nv_grid) {
      WalkConfig walk = base;
      walk.early_stop_pins = np;
      walk.early_stop_visits = nv;
      std::vector<double> overlaps, steps;
      for (std::size_t i = 0; i < pins.size(); ++i) {
        Rng rng = make_rng(cfg.seed, 2 * i + 1);
        const RankedResult res =
            pixie_random_walk_multiple(WeightedQuery::single(pins[i]), g, walk, rng, ws);
        overlaps.push_back(overlap(res.items, gold[i].items));
        steps.push_back(static_cast<double>(res.stats.steps_used));
      }
      const double mean_steps = mean(steps);
      const double reduction = static_cast<double>(cfg.steps) / mean_steps;
      report.rows.push_back({static_cast<double>(np), static_cast<double>(nv), mean(overlaps),
                             mean_steps, reduction});
      if (np == cfg.operating_np && nv == cfg.operating_nv) {
        op_overlap = mean(overlaps);
        op_reduction = reduction;
      }
    }
  }
  report.summary = {{"operating_np", static_cast<double>(cfg.operating_np)},
                    {"operating_nv", static_cast<double>(cfg.operating_nv)},
                    {"operating_overlap", op_overlap},
                    {"operating_reduction", op_reduction}};
  report.runtime_seconds = clock.seconds();
  return report;
}

// ---------------------------------------------------------------------------
// Attribute bias

EvalReport bias_eval(const BiasConfig& cfg) {
  const Stopwatch clock;
  if (cfg.betas.size() < 2) throw Error(ErrorCode::kEval, "need at least two bias strengths");
  const CompiledGraph compiled = compile_unpruned(generate_synthetic(cfg.synth));
  const BipartiteGraph& g = compiled.graph;

  std::vector<NodeId> sources;
  for (NodeId p = 0; p < g.pin_count(); ++p) {
    if (g.degree(p) > 0 && g.attr(p) == cfg.source_attr) sources.push_back(p);
  }
  if (sources.empty()) throw Error(ErrorCode::kEval, "no pin carries the source attribute");
  Rng pick = make_rng(cfg.seed, 0xB1A5);
  std::vector<NodeId> queries;
  for (std::size_t i : sample_indices(sources.size(), cfg.queries, pick)) queries.push_back(sources[i]);

  auto target_fraction = [&](const std::vector<ScoredPin>& items) {
    if (items.empty()) return 0.0;
    std::size_t n = 0;
    for (const ScoredPin& p : items) n += g.attr(p.pin) == cfg.target_attr ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(items.size());
  };

  const UserFeatures user{cfg.target_attr};
  WalkWorkspace ws;
  std::vector<std::vector<double>> fractions(cfg.betas.size());
  std::vector<double> basic;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const WeightedQuery q = WeightedQuery::single(queries[qi], user);
    for (std::size_t bi = 0; bi < cfg.betas.size(); ++bi) {
      WalkConfig walk = cfg.walk;
      walk.bias_strength = cfg.betas[bi];
      walk.top_k = cfg.top;
      Rng rng = make_rng(cfg.seed, qi);
      fractions[bi].push_back(target_fraction(pixie_random_walk_multiple(q, g, walk, rng, ws).items));
    }
    Rng rng = make_rng(cfg.seed, qi);
    basic_random_walk(g, queries[qi], cfg.walk, rng, ws.counter);
    ScoreMap scores;
    ws.counter.for_each([&](NodeId pin, std::uint32_t count) { scores[pin] = count; });
    scores.erase(queries[qi]);
    basic.push_back(target_fraction(top_k(scores, cfg.top).items));
  }

  EvalReport report;
  report.experiment = "bias";
  report.parameters = {{"queries", std::to_string(queries.size())},
                       {"sourceAttr", std::to_string(cfg.source_attr)},
                       {"targetAttr", std::to_string(cfg.target_attr)},
                       {"top", std::to_string(cfg.top)},
                       {"steps", std::to_string(cfg.walk.total_steps)},
                       {"seed", std::to_string(cfg.seed)}};
  report.columns = {"beta", "mean_fraction"};
  report.rows.push_back({-1.0, mean(basic)});
  for (std::size_t bi = 0; bi < cfg.betas.size(); ++bi) {
    report.rows.push_back({cfg.betas[bi], mean(fractions[bi])});
  }
  const PairedTest test = paired_t_test(fractions.front(), fractions.back());
  const double lo = mean(fractions.front());
  const double hi = mean(fractions.back());
  report.summary = {{"low_beta", cfg.betas.front()},
                    {"high_beta", cfg.betas.back()},
                    {"low_fraction", lo},
                    {"high_fraction", hi},
                    {"basic_fraction", mean(basic)},
                    {"t", test.t},
                    {"p_value", test.p_one_sided},
                    {"ratio", lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity()}};
  report.runtime_seconds = clock.seconds();
  return report;
}

// ---------------------------------------------------------------------------
// Runtime

EvalReport runtime_bench(const RuntimeConfig& cfg) {
  const Stopwatch clock;
  if (cfg.steps.size() < 2) throw Error(ErrorCode::kEval, "need at least two step counts");
  if (cfg.queries_per_point < 1) throw Error(ErrorCode::kEval, "need at least one query per point");
  const CompiledGraph compiled = compile_unpruned(generate_synthetic(cfg.synth));
  const BipartiteGraph& g = compiled.graph;
  const auto pins = sample_query_pins(g, cfg.queries_per_point, cfg.seed);

  WalkWorkspace ws;
  auto time_queries = [&](const std::vector<WeightedQuery>& queries, const WalkConfig& walk) {
    Rng warm = make_rng(cfg.seed, 0xAA);
    pixie_random_walk_multiple(queries.front(), g, walk, warm, ws);
    double total = 0.0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      Rng rng = make_rng(cfg.seed, i);
      const auto t0 = std::chrono::steady_clock::now();
      pixie_random_walk_multiple(queries[i], g, walk, rng, ws);
      total += std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    }
    return total / static_cast<double>(queries.size());
  };

  EvalReport report;
  report.experiment = "runtime";
  report.parameters = {{"queriesPerPoint", std::to_string(pins.size())},
                       {"fixedSteps", std::to_string(cfg.fixed_steps)},
                       {"seed", std::to_string(cfg.seed)}};
  report.columns = {"steps", "query_size", "mean_micros"};

  // Step counts are interleaved per query so that drift in machine load
  // spreads evenly over the grid.
  std::vector<WalkConfig> walks;
  for (std::uint64_t n : cfg.steps) {
    WalkConfig walk;
    walk.total_steps = n;
    walks.push_back(walk.without_early_stop());
  }
  {
    Rng warm = make_rng(cfg.seed, 0xAA);
    pixie_random_walk_multiple(WeightedQuery::single(pins.front()), g, walks.back(), warm, ws);
  }
  std::vector<double> total(walks.size(), 0.0);
  for (std::size_t i = 0; i < pins.size(); ++i) {
    const WeightedQuery q = WeightedQuery::single(pins[i]);
    for (std::size_t k = 0; k < walks.size(); ++k) {
      Rng rng = make_rng(cfg.seed, i);
      const auto t0 = std::chrono::steady_clock::now();
      pixie_random_walk_multiple(q, g, walks[k], rng, ws);
      total[k] += std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    }
  }
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < walks.size(); ++k) {
    const double micros = total[k] / static_cast<double>(pins.size());
    report.rows.push_back({static_cast<double>(cfg.steps[k]), 1.0, micros});
    xs.push_back(static_cast<double>(cfg.steps[k]));
    ys.push_back(micros);
  }
  const LinearFit fit = fit_line(xs, ys);

  WalkConfig fixed;
  fixed.total_steps = cfg.fixed_steps;
  fixed = fixed.without_early_stop();
  double single_micros = kNaN, largest_micros = kNaN;
  std::size_t largest = 0;
  Rng pick = make_rng(cfg.seed, 0xC0);
  for (std::size_t size : cfg.query_sizes) {
    if (size < 1) throw Error(ErrorCode::kEval, "query size must be >= 1");
    std::vector<WeightedQuery> queries;
    for (std::size_t i = 0; i < pins.size(); ++i) {
      WeightedQuery q;
      for (std::size_t j : sample_indices(pins.size(), size, pick)) q.entries.push_back({pins[j], 1.0});
      queries.push_back(std::move(q));
    }
    const double micros = time_queries(queries, fixed);
    report.rows.push_back({static_cast<double>(cfg.fixed_steps), static_cast<double>(size), micros});
    if (size == 1) single_micros = micros;
    if (size >= largest) {
      largest = size;
      largest_micros = micros;
    }
  }
  report.summary = {{"slope_micros_per_step", fit.slope},
                    {"intercept_micros", fit.intercept},
                    {"r_squared", fit.r_squared},
                    {"largest_query_size", static_cast<double>(largest)},
                    {"query_size_ratio", largest_micros / (static_cast<double>(largest) * single_micros)}};
  report.runtime_seconds = clock.seconds();
  return report;
}

}  // namespace pixie
