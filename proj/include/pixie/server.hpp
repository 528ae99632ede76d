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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "pixie/id_map.hpp"
#include "pixie/query_builder.hpp"
#include "pixie/walk.hpp"

namespace httplib {
class Server;
}

namespace pixie {

// A loaded graph plus its key table. Immutable once published.
struct ServedGraph {
  BipartiteGraph graph;
  IdMap ids;
  std::string version;
};

// Loads `<dir>/<version>.pixg` and its `.idmap` sibling.
std::shared_ptr<const ServedGraph> load_served_graph(const std::filesystem::path& graph_path);

// Graph files in `dir` that have an ID map next to them, newest version
// (greatest file stem) first.
std::vector<std::filesystem::path> list_graph_versions(const std::filesystem::path& dir);

// Shared handle to the current graph. Readers pin a snapshot; a swap never
// disturbs a pinned snapshot.
class GraphHandle {
 public:
  std::shared_ptr<const ServedGraph> get() const {
    std::lock_guard lock(mu_);
    return current_;
  }
  void set(std::shared_ptr<const ServedGraph> g) {
    std::lock_guard lock(mu_);
    current_ = std::move(g);
  }

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const ServedGraph> current_;
};

struct ServerConfig {
  std::filesystem::path graph_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  unsigned workers = 4;
  unsigned io_threads = 4;
  WalkConfig defaults{};
  std::uint64_t max_steps = 1'000'000;  // caps per-request step overrides
  double half_life_seconds = 86'400.0;
  ActionWeights action_weights{};
  std::uint64_t seed = 0x9E3779B9;
  std::chrono::milliseconds poll_interval{2000};
};

struct WalkOverrides {
  std::optional<std::uint64_t> steps;
  std::optional<double> alpha;
  std::optional<std::uint64_t> early_stop_pins;
  std::optional<std::uint32_t> early_stop_visits;
  std::optional<double> beta;
  std::optional<std::uint32_t> max_walk_length;
};

struct RecommendRequest {
  std::vector<std::pair<std::string, double>> query;  // (pinKey, weight)
  std::vector<UserAction> actions;                    // alternative to `query`
  std::vector<std::string> user_features;             // decimal attribute IDs
  WalkOverrides overrides;
  std::uint64_t top_k = 1000;
  std::optional<std::uint64_t> seed;

  // Throws Error(kValidation) on malformed JSON or out-of-range fields.
  static RecommendRequest from_json(const std::string& body);
};

struct RecommendResponse {
  std::vector<std::pair<std::string, double>> results;  // (pinKey, score)
  WalkStats stats;
  std::uint64_t latency_micros = 0;
  std::string graph_version;
  std::vector<std::string> warnings;

  // Latency is left out of the body so that a pinned-seed request is
  // byte-reproducible; the HTTP layer sends it as a header.
  std::string to_json() const;
};

// Transport-independent request handling and graph refresh.
class RecommendService {
 public:
  explicit RecommendService(ServerConfig cfg);

  // Loads the newest loadable graph in the watch directory. Returns whether
  // a graph is being served afterwards.
  bool load_initial();
  // One hot-swap check: loads a version newer than the served one, if any.
  // Returns true when a swap happened. Failed versions are skipped later.
  bool poll_once();

  // Throws Error for client mistakes (kValidation, kEmptyQuery, kConfig, ...)
  // and for a missing graph (kIo).
  RecommendResponse handle(const RecommendRequest& req, WalkWorkspace& ws);

  std::string health_json() const;
  std::shared_ptr<const ServedGraph> graph() const { return handle_.get(); }
  const ServerConfig& config() const { return cfg_; }

  // Effective walk config for a request; throws Error(kValidation).
  WalkConfig effective_config(const RecommendRequest& req) const;

 private:
  ServerConfig cfg_;
  GraphHandle handle_;
  std::atomic<std::uint64_t> request_counter_{0};
  std::mutex poll_mu_;
  std::set<std::string> failed_versions_;
};

// Fixed set of worker threads, each owning one WalkWorkspace.
class WorkerPool {
 public:
  explicit WorkerPool(unsigned workers);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  template <typename Fn>
  auto submit(Fn fn) -> std::future<decltype(fn(std::declval<WalkWorkspace&>()))> {
    using R = decltype(fn(std::declval<WalkWorkspace&>()));
    auto task = std::make_shared<std::packaged_task<R(WalkWorkspace&)>>(std::move(fn));
    auto fut = task->get_future();
    enqueue([task](WalkWorkspace& ws) { (*task)(ws); });
    return fut;
  }

 private:
  void enqueue(std::function<void(WalkWorkspace&)> job);
  void run();

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::function<void(WalkWorkspace&)>> jobs_;
  bool stopping_ = false;
  std::vector<std::thread> threads_;
};

// HTTP front end: POST /v1/recommend, GET /v1/health, plus a background
// watcher that hot-swaps graphs.
class RecommendServer {
 public:
  explicit RecommendServer(ServerConfig cfg);
  ~RecommendServer();

  // Binds (port 0 picks a free port), loads the initial graph and starts
  // serving in the background. Returns the bound port.
  int start();
  void stop();
  // Blocks until stop() is called from another thread.
  void wait();

  RecommendService& service() { return service_; }

 private:
  RecommendService service_;
  WorkerPool pool_;
  std::unique_ptr<httplib::Server> http_;
  std::thread listener_;
  std::thread watcher_;
  std::mutex stop_mu_;
  std::condition_variable stop_cv_;
  bool stopped_ = false;
  int port_ = 0;
};

}  // namespace pixie
