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

#include <csignal>
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <sstream>

#include <CLI11.hpp>

#include "pixie/compiler.hpp"
#include "pixie/eval.hpp"
#include "pixie/graph_io.hpp"
#include "pixie/server.hpp"
#include "pixie/synth.hpp"

namespace {

using namespace pixie;

constexpr int kUsage = 1;
constexpr int kRuntime = 2;

// "--half-life-seconds" -> "PIXIE_HALF_LIFE_SECONDS"
std::string env_name(const std::string& flag) {
  std::string out = "PIXIE_";
  for (char c : flag.substr(flag.find_first_not_of('-'))) {
    out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& value, const std::string& help) {
  return app->add_option(name, value, help)->envname(env_name(name))->capture_default_str();
}

std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
}

struct WalkFlags {
  std::uint64_t steps = 100'000;
  double alpha = 0.5;
  std::uint64_t np = 2'000;
  std::uint32_t nv = 4;
  double beta = 0.0;
  std::uint32_t max_walk_length = 100;

  void add_to(CLI::App* app) {
    flag(app, "--steps", steps, "total walk steps N");
    flag(app, "--alpha", alpha, "walk length parameter");
    flag(app, "--np", np, "early stop: pin count");
    flag(app, "--nv", nv, "early stop: visits per pin");
    flag(app, "--beta", beta, "attribute bias strength");
    flag(app, "--max-walk-length", max_walk_length, "cap on a single walk segment");
  }

  WalkConfig config(std::uint64_t top) const {
    WalkConfig c;
    c.total_steps = steps;
    c.alpha = alpha;
    c.early_stop_pins = np;
    c.early_stop_visits = nv;
    c.bias_strength = beta;
    c.max_walk_length = max_walk_length;
    c.top_k = top;
    c.validate();
    return c;
  }
};

std::vector<AttributeId> parse_features(const std::vector<std::string>& names) {
  std::vector<AttributeId> out;
  for (const auto& n : names) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), v);
    if (ec != std::errc() || ptr != n.data() + n.size() || v > 0xFFFF) {
      throw Error(ErrorCode::kConfig, "user feature must be an attribute ID: '" + n + "'");
    }
    out.push_back(static_cast<AttributeId>(v));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct CompileCmd {
  std::string edges, topics, out;
  PruneConfig prune;

  void add(CLI::App& root) {
    auto* c = root.add_subcommand("compile", "Parse, prune and write a binary graph");
    flag(c, "--edges", edges, "board<TAB>pin edge file")->required();
    flag(c, "--topics", topics, "key<TAB>attr<TAB>topic vector file");
    flag(c, "--out", out, "output .pixg path (ID map written alongside)")->required();
    flag(c, "--delta", prune.delta, "pruning factor");
    flag(c, "--entropy-quantile", prune.entropy_quantile, "share of most diverse boards removed");
    flag(c, "--latest-m", prune.latest_m, "latest pins per board topic");
    flag(c, "--topic-dim", prune.topic_dim, "expected topic dimension, 0 to infer");
    flag(c, "--seed", prune.seed, "seed for pins without topics");
    c->callback([this] {
      const CompileReport r = compile(edges, topics, prune, out);
      std::cout << r.to_json() << '\n';
    });
  }
};

struct QueryCmd {
  std::string graph, pins, weights;
  std::vector<std::string> features;
  WalkFlags walk;
  std::uint64_t seed = 1;
  std::uint64_t top = 1000;

  void add(CLI::App& root) {
    auto* c = root.add_subcommand("query", "Run one recommendation query against a graph file");
    flag(c, "--graph", graph, "compiled .pixg file")->required();
    flag(c, "--pin", pins, "query pin keys, comma separated")->required();
    flag(c, "--weights", weights, "query weights, comma separated (default all 1)");
    flag(c, "--user-features", features, "attribute IDs the user prefers");
    walk.add_to(c);
    flag(c, "--seed", seed, "random seed");
    flag(c, "--top", top, "results to print");
    c->callback([this] { run(); });
  }

  void run() const {
    const auto served = load_served_graph(graph);
    const auto keys = split(pins, ',');
    std::vector<double> w(keys.size(), 1.0);
    if (!weights.empty()) {
      const auto parts = split(weights, ',');
      if (parts.size() != keys.size()) throw CLI::ValidationError("--weights", "one weight per pin");
      for (std::size_t i = 0; i < parts.size(); ++i) {
        try {
          std::size_t used = 0;
          w[i] = std::stod(parts[i], &used);
          if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
        } catch (const std::logic_error&) {
          throw CLI::ValidationError("--weights", "not a number: " + parts[i]);
        }
      }
    }
    WeightedQuery q;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const auto id = served->ids.find_pin(keys[i]);
      if (!id || served->graph.degree(*id) == 0) {
        std::cerr << "pixie: dropped unknown pin '" << keys[i] << "'\n";
        continue;
      }
      q.entries.push_back({*id, w[i]});
    }
    if (q.entries.empty()) throw Error(ErrorCode::kEmptyQuery, "no query pin is in the graph");
    q.user = UserFeatures(parse_features(features));
    Rng rng = make_rng(seed);
    const RankedResult r = pixie_random_walk_multiple(q, served->graph, walk.config(top), rng);
    for (const ScoredPin& p : r.items) std::cout << served->ids.key_of(p.pin) << '\t' << num(p.score) << '\n';
    std::cerr << "pixie: steps " << r.stats.steps_used << (r.stats.early_stopped ? " (early stop)" : "")
              << '\n';
  }
};

struct ServeCmd {
  ServerConfig cfg;
  WalkFlags walk;
  std::string graph_dir;
  std::uint64_t poll_ms = 2000;

  void add(CLI::App& root) {
    auto* c = root.add_subcommand("serve", "Serve recommendations over HTTP");
    flag(c, "--graph-dir", graph_dir, "directory of <version>.pixg + .idmap files")->required();
    flag(c, "--host", cfg.host, "bind address");
    flag(c, "--port", cfg.port, "port, 0 for any free port");
    flag(c, "--workers", cfg.workers, "walk worker threads");
    flag(c, "--io-threads", cfg.io_threads, "HTTP threads");
    walk.add_to(c);
    flag(c, "--max-steps", cfg.max_steps, "largest per-request step override");
    flag(c, "--half-life-seconds", cfg.half_life_seconds, "action decay half-life");
    flag(c, "--seed", cfg.seed, "server seed for unpinned requests");
    flag(c, "--poll-ms", poll_ms, "graph directory poll interval");
    c->callback([this] { run(); });
  }

  void run() {
    cfg.graph_dir = graph_dir;
    cfg.defaults = walk.config(1000);
    cfg.poll_interval = std::chrono::milliseconds(poll_ms);

    sigset_t sigs;
    sigemptyset(&sigs);
    sigaddset(&sigs, SIGINT);
    sigaddset(&sigs, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &sigs, nullptr);  // inherited by server threads

    RecommendServer server(cfg);
    const int port = server.start();
    if (!server.service().graph()) std::cerr << "pixie: no graph yet, waiting for one\n";
    std::cerr << "pixie: listening on " << cfg.host << ':' << port << '\n';
    std::cout << port << std::endl;
    int sig = 0;
    sigwait(&sigs, &sig);
    std::cerr << "pixie: shutting down\n";
    server.stop();
  }
};

struct SynthCmd {
  SynthConfig cfg;
  std::string preset = "default";
  std::string edges_out = "edges.tsv", topics_out = "topics.tsv", holdout_out;

  void add(CLI::App& root) {
    auto* c = root.add_subcommand("synth", "Write a synthetic planted-community graph");
    flag(c, "--preset", preset, "default, noisy or bilingual; flags below override it")
        ->check(CLI::IsMember({"default", "noisy", "bilingual"}));
    flag(c, "--communities", cfg.communities, "community count");
    flag(c, "--pins-per-community", cfg.pins_per_community, "pins per community");
    flag(c, "--boards-per-community", cfg.boards_per_community, "boards per community");
    flag(c, "--edges-per-board", cfg.edges_per_board, "saves drawn per board");
    flag(c, "--noise", cfg.cross_community_noise, "cross-community save probability");
    flag(c, "--popularity-skew", cfg.popularity_skew, "Zipf exponent of pin popularity");
    flag(c, "--diverse-fraction", cfg.diverse_board_fraction, "share of diverse boards");
    flag(c, "--holdout", cfg.holdout_per_board, "held-out saves per board");
    flag(c, "--seed", cfg.seed, "generator seed");
    flag(c, "--edges-out", edges_out, "edge file to write");
    flag(c, "--topics-out", topics_out, "topic file to write");
    flag(c, "--holdout-out", holdout_out, "board<TAB>pin file of held-out saves");
    c->callback([this, c] { run(*c); });
  }

  void run(const CLI::App& c) {
    SynthConfig base = preset == "noisy" ? noisy_config() : preset == "bilingual" ? bilingual_config()
                                                                                  : SynthConfig{};
    auto given = [&](const char* name) { return c.get_option(name)->count() > 0 || std::getenv(env_name(name).c_str()); };
    if (given("--communities")) base.communities = cfg.communities;
    if (given("--pins-per-community")) base.pins_per_community = cfg.pins_per_community;
    if (given("--boards-per-community")) base.boards_per_community = cfg.boards_per_community;
    if (given("--edges-per-board")) base.edges_per_board = cfg.edges_per_board;
    if (given("--noise")) base.cross_community_noise = cfg.cross_community_noise;
    if (given("--popularity-skew")) base.popularity_skew = cfg.popularity_skew;
    if (given("--diverse-fraction")) base.diverse_board_fraction = cfg.diverse_board_fraction;
    if (given("--holdout")) base.holdout_per_board = cfg.holdout_per_board;
    if (given("--seed")) base.seed = cfg.seed;
    if (!base.community_attr.empty() && base.community_attr.size() != base.communities) {
      throw CLI::ValidationError("--communities", "the bilingual preset fixes the community count");
    }
    const SyntheticData data = generate_synthetic(base);
    write_synthetic(data, edges_out, topics_out);
    if (!holdout_out.empty()) {
      std::ostringstream out;
      for (std::size_t b = 0; b < data.holdout.size(); ++b) {
        for (std::uint32_t p : data.holdout[b]) {
          out << data.edges.board_keys[b] << '\t' << data.edges.pin_keys[p] << '\n';
        }
      }
      write_text(holdout_out, out.str());
    }
    std::cerr << "pixie: wrote " << data.edges.edges.size() << " edges, " << data.edges.pin_count()
              << " pins, " << data.edges.board_count() << " boards\n";
  }
};

struct EvalCmd {
  std::string experiment;
  std::string csv_out = "-", json_out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> queries;

  void add(CLI::App& root) {
    auto* c = root.add_subcommand("eval", "Run an experiment and write its CSV");
    flag(c, "--experiment", experiment, "linkpred, stability, earlystop, bias or runtime")
        ->required()
        ->check(CLI::IsMember({"linkpred", "stability", "earlystop", "bias", "runtime"}));
    add_common(c);
    c->callback([this] { run(); });
  }

  void add_bench(CLI::App& root) {
    auto* c = root.add_subcommand("bench", "Runtime experiment (query time vs steps and |Q|)");
    add_common(c);
    c->callback([this] {
      experiment = "runtime";
      run();
    });
  }

  void add_common(CLI::App* c) {
    flag(c, "--out", csv_out, "CSV destination, - for stdout");
    flag(c, "--json", json_out, "JSON summary destination");
    flag(c, "--seed", seed, "experiment seed");
    flag(c, "--queries", queries, "queries (boards for linkpred, per point for runtime)");
  }

  void run() const {
    EvalReport r;
    if (experiment == "linkpred") {
      LinkPredConfig c;
      if (seed) c.seed = *seed;
      if (queries) c.boards = *queries;
      r = link_prediction_eval(c);
    } else if (experiment == "stability") {
      StabilityConfig c;
      if (seed) c.seed = *seed;
      if (queries) c.queries = *queries;
      r = stability_eval(c);
    } else if (experiment == "earlystop") {
      EarlyStopConfig c;
      if (seed) c.seed = *seed;
      if (queries) c.queries = *queries;
      r = early_stop_eval(c);
    } else if (experiment == "bias") {
      BiasConfig c;
      if (seed) c.seed = *seed;
      if (queries) c.queries = *queries;
      r = bias_eval(c);
    } else {
      RuntimeConfig c;
      if (seed) c.seed = *seed;
      if (queries) c.queries_per_point = *queries;
      r = runtime_bench(c);
    }
    write_text(csv_out, r.to_csv());
    if (!json_out.empty()) write_text(json_out, r.to_json() + "\n");
    for (const auto& [k, v] : r.summary) std::cerr << "pixie: " << k << " = " << num(v) << '\n';
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pixie random-walk recommender"};
  app.require_subcommand(1);
  CompileCmd compile_cmd;
  QueryCmd query_cmd;
  ServeCmd serve_cmd;
  SynthCmd synth_cmd;
  EvalCmd eval_cmd, bench_cmd;
  compile_cmd.add(app);
  serve_cmd.add(app);
  query_cmd.add(app);
  synth_cmd.add(app);
  eval_cmd.add(app);
  bench_cmd.add_bench(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const Error& e) {
    // Bad flag values surface as configuration errors.
    std::cerr << "pixie: " << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::kConfig ? kUsage : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "pixie: " << e.what() << '\n';
    return kRuntime;
  }
  return 0;
}
