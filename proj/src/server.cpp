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

#include "pixie/server.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <iostream>
#include <map>

#include <httplib.h>
#include <json.hpp>

#include "pixie/graph_io.hpp"

namespace pixie {

using nlohmann::json;

std::shared_ptr<const ServedGraph> load_served_graph(const std::filesystem::path& graph_path) {
  BipartiteGraph graph = load_binary(graph_path);
  IdMap ids = IdMap::load(id_map_path_for(graph_path), graph.pin_count());
  if (ids.board_count() != graph.board_count()) {
    throw Error(ErrorCode::kInvariantViolation, "ID map board count does not match graph");
  }
  return std::make_shared<const ServedGraph>(
      ServedGraph{std::move(graph), std::move(ids), graph_path.stem().string()});
}

std::vector<std::filesystem::path> list_graph_versions(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto& p = entry.path();
    if (!entry.is_regular_file(ec) || p.extension() != ".pixg") continue;
    if (!std::filesystem::exists(id_map_path_for(p), ec)) continue;
    out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.stem().string() > b.stem().string();
  });
  return out;
}

// ---------------------------------------------------------------------------
// Request / response JSON

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::kValidation, what); }

template <typename T>
T get_number(const json& j, const char* field) {
  if (!j.is_number()) invalid(std::string(field) + " must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                   j.get<std::int64_t>() < 0)) {
      invalid(std::string(field) + " must be a non-negative integer");
    }
    const auto v = j.get<std::uint64_t>();
    if (v > std::numeric_limits<T>::max()) invalid(std::string(field) + " is too large");
    return static_cast<T>(v);
  } else {
    return j.get<T>();
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const char* where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      invalid(std::string("unknown field '") + key + "' in " + where);
    }
  }
}

std::string pin_key_of(const json& item) {
  if (!item.contains("pin") || !item["pin"].is_string() || item["pin"].get<std::string>().empty()) {
    invalid("each entry needs a non-empty string 'pin'");
  }
  return item["pin"].get<std::string>();
}

}  // namespace

RecommendRequest RecommendRequest::from_json(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    invalid(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) invalid("request must be a JSON object");
  reject_unknown(j, {"query", "actions", "userFeatures", "overrides", "topK", "seed"}, "request");

  RecommendRequest req;
  if (j.contains("query")) {
    if (!j["query"].is_array()) invalid("'query' must be an array");
    for (const auto& item : j["query"]) {
      if (!item.is_object()) invalid("query entries must be objects");
      reject_unknown(item, {"pin", "weight"}, "query entry");
      const double w = item.contains("weight") ? get_number<double>(item["weight"], "weight") : 1.0;
      if (!(w > 0.0) || !std::isfinite(w)) invalid("query weights must be > 0");
      req.query.emplace_back(pin_key_of(item), w);
    }
  }
  if (j.contains("actions")) {
    if (!j["actions"].is_array()) invalid("'actions' must be an array");
    for (const auto& item : j["actions"]) {
      if (!item.is_object()) invalid("action entries must be objects");
      reject_unknown(item, {"pin", "action", "ageSeconds"}, "action");
      UserAction a;
      a.pin_key = pin_key_of(item);
      if (!item.contains("action") || !item["action"].is_string()) invalid("action needs 'action'");
      a.type = parse_action_type(item["action"].get<std::string>());
      a.age_seconds =
          item.contains("ageSeconds") ? get_number<double>(item["ageSeconds"], "ageSeconds") : 0.0;
      if (!(a.age_seconds >= 0.0)) invalid("ageSeconds must be >= 0");
      req.actions.push_back(std::move(a));
    }
  }
  if (req.query.empty() == req.actions.empty()) {
    invalid("exactly one of a non-empty 'query' or 'actions' is required");
  }
  if (j.contains("userFeatures")) {
    if (!j["userFeatures"].is_array()) invalid("'userFeatures' must be an array");
    for (const auto& f : j["userFeatures"]) {
      if (f.is_string()) {
        req.user_features.push_back(f.get<std::string>());
      } else if (f.is_number_unsigned()) {
        req.user_features.push_back(std::to_string(f.get<std::uint64_t>()));
      } else {
        invalid("userFeatures entries must be attribute names");
      }
    }
  }
  if (j.contains("overrides")) {
    const json& o = j["overrides"];
    if (!o.is_object()) invalid("'overrides' must be an object");
    reject_unknown(o, {"steps", "alpha", "np", "nv", "beta", "maxWalkLength"}, "overrides");
    if (o.contains("steps")) req.overrides.steps = get_number<std::uint64_t>(o["steps"], "steps");
    if (o.contains("alpha")) req.overrides.alpha = get_number<double>(o["alpha"], "alpha");
    if (o.contains("np")) req.overrides.early_stop_pins = get_number<std::uint64_t>(o["np"], "np");
    if (o.contains("nv")) req.overrides.early_stop_visits = get_number<std::uint32_t>(o["nv"], "nv");
    if (o.contains("beta")) req.overrides.beta = get_number<double>(o["beta"], "beta");
    if (o.contains("maxWalkLength")) {
      req.overrides.max_walk_length = get_number<std::uint32_t>(o["maxWalkLength"], "maxWalkLength");
    }
  }
  if (j.contains("topK")) {
    req.top_k = get_number<std::uint64_t>(j["topK"], "topK");
    if (req.top_k < 1) invalid("topK must be >= 1");
  }
  if (j.contains("seed")) req.seed = get_number<std::uint64_t>(j["seed"], "seed");
  return req;
}

std::string RecommendResponse::to_json() const {
  json j;
  j["results"] = json::array();
  for (const auto& [key, score] : results) j["results"].push_back({{"pin", key}, {"score", score}});
  j["stats"] = {{"stepsUsed", stats.steps_used},
                {"earlyStopped", stats.early_stopped},
                {"graphVersion", graph_version}};
  j["warnings"] = warnings;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Service

RecommendService::RecommendService(ServerConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.defaults.validate();
  if (!(cfg_.half_life_seconds > 0.0)) throw Error(ErrorCode::kConfig, "half-life must be > 0");
  if (cfg_.defaults.total_steps > cfg_.max_steps) cfg_.max_steps = cfg_.defaults.total_steps;
}

bool RecommendService::load_initial() {
  for (const auto& path : list_graph_versions(cfg_.graph_dir)) {
    try {
      handle_.set(load_served_graph(path));
      std::cerr << "pixie: serving graph " << path.stem().string() << "\n";
      return true;
    } catch (const std::exception& e) {
      std::lock_guard lock(poll_mu_);
      failed_versions_.insert(path.stem().string());
      std::cerr << "pixie: failed to load " << path.string() << ": " << e.what() << "\n";
    }
  }
  return handle_.get() != nullptr;
}

bool RecommendService::poll_once() {
  std::lock_guard lock(poll_mu_);
  const auto current = handle_.get();
  for (const auto& path : list_graph_versions(cfg_.graph_dir)) {
    const std::string version = path.stem().string();
    if (current && version <= current->version) return false;
    if (failed_versions_.count(version)) continue;
    try {
      auto fresh = load_served_graph(path);
      handle_.set(std::move(fresh));
      std::cerr << "pixie: swapped to graph " << version << "\n";
      return true;
    } catch (const std::exception& e) {
      failed_versions_.insert(version);
      std::cerr << "pixie: failed to load " << path.string() << ": " << e.what() << "\n";
    }
  }
  return false;
}

WalkConfig RecommendService::effective_config(const RecommendRequest& req) const {
  WalkConfig c = cfg_.defaults;
  const WalkOverrides& o = req.overrides;
  if (o.steps) c.total_steps = *o.steps;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.early_stop_pins) c.early_stop_pins = *o.early_stop_pins;
  if (o.early_stop_visits) c.early_stop_visits = *o.early_stop_visits;
  if (o.beta) c.bias_strength = *o.beta;
  if (o.max_walk_length) c.max_walk_length = *o.max_walk_length;
  c.top_k = req.top_k;
  try {
    c.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kValidation, e.what());
  }
  if (c.total_steps > cfg_.max_steps) {
    throw Error(ErrorCode::kValidation, "steps exceeds server limit " + std::to_string(cfg_.max_steps));
  }
  if (c.max_walk_length > 10'000) throw Error(ErrorCode::kValidation, "maxWalkLength too large");
  return c;
}

RecommendResponse RecommendService::handle(const RecommendRequest& req, WalkWorkspace& ws) {
  const auto start = std::chrono::steady_clock::now();
  const auto served = handle_.get();  // pinned for the whole request
  if (!served) throw Error(ErrorCode::kIo, "no graph loaded");
  const WalkConfig cfg = effective_config(req);

  std::vector<AttributeId> attrs;
  for (const std::string& name : req.user_features) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), v);
    if (ec != std::errc() || ptr != name.data() + name.size() || v > 0xFFFF) {
      throw Error(ErrorCode::kValidation, "unknown user feature '" + name + "'");
    }
    attrs.push_back(static_cast<AttributeId>(v));
  }

  RecommendResponse resp;
  resp.graph_version = served->version;
  WeightedQuery query;
  std::vector<std::string> dropped;
  if (!req.actions.empty()) {
    BuiltQuery built = build_query_from_actions(req.actions, cfg_.action_weights,
                                                cfg_.half_life_seconds, served->ids, served->graph);
    query = std::move(built.query);
    dropped = std::move(built.dropped_keys);
  } else {
    std::map<NodeId, double> merged;
    std::vector<NodeId> order;
    for (const auto& [key, weight] : req.query) {
      const auto id = served->ids.find_pin(key);
      if (!id || served->graph.degree(*id) == 0) {
        if (std::find(dropped.begin(), dropped.end(), key) == dropped.end()) dropped.push_back(key);
        continue;
      }
      if (merged.emplace(*id, 0.0).second) order.push_back(*id);
      merged[*id] += weight;
    }
    if (order.empty()) {
      std::string list;
      for (const auto& k : dropped) list += (list.empty() ? "" : ", ") + k;
      throw Error(ErrorCode::kEmptyQuery, "no query pin is in the graph: " + list);
    }
    for (NodeId id : order) query.entries.push_back({id, merged[id]});
  }
  query.user = UserFeatures(std::move(attrs));
  for (const auto& k : dropped) resp.warnings.push_back("dropped unknown pin '" + k + "'");

  Rng rng = req.seed ? make_rng(*req.seed) : make_rng(cfg_.seed, request_counter_.fetch_add(1) + 1);
  RankedResult ranked = pixie_random_walk_multiple(query, served->graph, cfg, rng, ws);

  resp.stats = ranked.stats;
  resp.results.reserve(ranked.items.size());
  for (const ScoredPin& p : ranked.items) resp.results.emplace_back(served->ids.key_of(p.pin), p.score);
  std::sort(resp.results.begin(), resp.results.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  resp.latency_micros = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start)
          .count());
  return resp;
}

std::string RecommendService::health_json() const {
  const auto served = handle_.get();
  json j;
  if (served) {
    j = {{"status", "ok"},
         {"graphVersion", served->version},
         {"nodes", served->graph.node_count()},
         {"edges", served->graph.edge_count()}};
  } else {
    j = {{"status", "no-graph"}, {"graphVersion", nullptr}, {"nodes", 0}, {"edges", 0}};
  }
  return j.dump();
}

// ---------------------------------------------------------------------------
// Worker pool

WorkerPool::WorkerPool(unsigned workers) {
  const unsigned n = std::max(1u, workers);
  threads_.reserve(n);
  for (unsigned i = 0; i < n; ++i) threads_.emplace_back([this] { run(); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::enqueue(std::function<void(WalkWorkspace&)> job) {
  {
    std::lock_guard lock(mu_);
    jobs_.push_back(std::move(job));
  }
  cv_.notify_one();
}

void WorkerPool::run() {
  WalkWorkspace ws;
  while (true) {
    std::function<void(WalkWorkspace&)> job;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [this] { return stopping_ || !jobs_.empty(); });
      if (jobs_.empty()) return;
      job = std::move(jobs_.front());
      jobs_.pop_front();
    }
    job(ws);
  }
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation:
    case ErrorCode::kEmptyQuery:
    case ErrorCode::kUnknownPins:
    case ErrorCode::kInvalidQueryPin:
    case ErrorCode::kConfig:
      return 400;
    case ErrorCode::kIo:
      return 503;
    default:
      return 500;
  }
}

void send_error(httplib::Response& res, int status, ErrorCode code, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", std::string(to_string(code))}, {"message", message}}.dump(),
                  "application/json");
}

}  // namespace

RecommendServer::RecommendServer(ServerConfig cfg)
    : service_(std::move(cfg)),
      pool_(service_.config().workers),
      http_(std::make_unique<httplib::Server>()) {
  const unsigned io = std::max(1u, service_.config().io_threads);
  http_->new_task_queue = [io] { return new httplib::ThreadPool(io); };

  http_->Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(service_.health_json(), "application/json");
  });

  http_->Post("/v1/recommend", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      RecommendRequest parsed = RecommendRequest::from_json(req.body);
      auto fut = pool_.submit([this, &parsed](WalkWorkspace& ws) { return service_.handle(parsed, ws); });
      const RecommendResponse resp = fut.get();
      res.set_header("X-Pixie-Latency-Micros", std::to_string(resp.latency_micros));
      res.set_content(resp.to_json(), "application/json");
    } catch (const Error& e) {
      send_error(res, status_for(e.code()), e.code(), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, ErrorCode::kIo, e.what());
    }
  });
}

RecommendServer::~RecommendServer() { stop(); }

int RecommendServer::start() {
  service_.load_initial();
  const auto& cfg = service_.config();
  if (cfg.port == 0) {
    port_ = http_->bind_to_any_port(cfg.host);
  } else {
    port_ = http_->bind_to_port(cfg.host, cfg.port) ? cfg.port : -1;
  }
  if (port_ < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
  }
  listener_ = std::thread([this] { http_->listen_after_bind(); });
  watcher_ = std::thread([this] {
    std::unique_lock lock(stop_mu_);
    while (!stopped_) {
      if (stop_cv_.wait_for(lock, service_.config().poll_interval, [this] { return stopped_; })) break;
      lock.unlock();
      service_.poll_once();
      lock.lock();
    }
  });
  http_->wait_until_ready();
  return port_;
}

void RecommendServer::stop() {
  {
    std::lock_guard lock(stop_mu_);
    if (stopped_) return;
    stopped_ = true;
  }
  stop_cv_.notify_all();
  if (http_) http_->stop();
  if (listener_.joinable()) listener_.join();
  if (watcher_.joinable()) watcher_.join();
}

void RecommendServer::wait() {
  std::unique_lock lock(stop_mu_);
  stop_cv_.wait(lock, [this] { return stopped_; });
}

}  // namespace pixie
