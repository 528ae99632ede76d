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

#include "pixie/compiler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "pixie/graph_io.hpp"
#include "pixie/rng.hpp"
#include "pixie/simd/kernels.hpp"

namespace pixie {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void parse_error(const std::string& source, std::uint64_t line,
                              const std::string& what) {
  throw Error(ErrorCode::kParse, source + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

// Member pins of every board in save order.
std::vector<std::vector<std::uint32_t>> members_by_board(const EdgeList& edges) {
  std::vector<std::vector<std::uint32_t>> members(edges.board_count());
  for (const BoardPin& e : edges.edges) members[e.board].push_back(e.pin);
  return members;
}

std::vector<std::optional<TopicVector>> board_distributions(const EdgeList& edges,
                                                            const TopicTable& topics,
                                                            std::size_t latest) {
  const auto members = members_by_board(edges);
  std::vector<std::optional<TopicVector>> out(edges.board_count());
  std::vector<const TopicVector*> vecs;
  for (std::size_t b = 0; b < members.size(); ++b) {
    vecs.clear();
    bool any = false;
    for (std::uint32_t p : members[b]) {
      const auto& v = topics.pin_vectors[p];
      vecs.push_back(v ? &*v : nullptr);
      any = any || v.has_value();
    }
    if (any) out[b] = board_topic_distribution(vecs, latest);
  }
  return out;
}

}  // namespace

EdgeList parse_edges(std::istream& in, const std::string& source) {
  EdgeList out;
  std::unordered_map<std::string, std::uint32_t> pin_index;
  std::unordered_map<std::string, std::uint32_t> board_index;
  std::unordered_set<std::uint64_t> seen;
  std::string line;
  std::uint64_t line_no = 0;
  auto intern = [](std::unordered_map<std::string, std::uint32_t>& index,
                   std::vector<std::string>& keys, std::string_view key) {
    auto [it, inserted] = index.try_emplace(std::string(key), static_cast<std::uint32_t>(keys.size()));
    if (inserted) keys.emplace_back(key);
    return it->second;
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = strip_cr(line);
    if (text.empty()) continue;
    const auto fields = split(text, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      parse_error(source, line_no, "expected boardKey<TAB>pinKey");
    }
    const std::uint32_t board = intern(board_index, out.board_keys, fields[0]);
    const std::uint32_t pin = intern(pin_index, out.pin_keys, fields[1]);
    if (out.pin_keys.size() + out.board_keys.size() > kMaxNodes) {
      parse_error(source, line_no, "more than 2^32-1 nodes");
    }
    if (!seen.insert((static_cast<std::uint64_t>(board) << 32) | pin).second) {
      ++out.duplicates;
      continue;
    }
    out.edges.push_back({board, pin});
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + source);
  out.board_removed.assign(out.board_keys.size(), 0);
  return out;
}

EdgeList parse_edge_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_edges(in, path.string());
}

TopicTable TopicTable::empty_for(const EdgeList& edges) {
  TopicTable t;
  t.pin_vectors.resize(edges.pin_count());
  t.pin_attr.assign(edges.pin_count(), kUnlabeled);
  t.board_attr.resize(edges.board_count());
  return t;
}

TopicTable parse_topics(std::istream& in, const EdgeList& edges, std::size_t expected_dim,
                        const std::string& source) {
  TopicTable t = TopicTable::empty_for(edges);
  t.dim = expected_dim;
  std::unordered_map<std::string_view, std::uint32_t> pin_index;
  std::unordered_map<std::string_view, std::uint32_t> board_index;
  for (std::uint32_t i = 0; i < edges.pin_keys.size(); ++i) pin_index.emplace(edges.pin_keys[i], i);
  for (std::uint32_t i = 0; i < edges.board_keys.size(); ++i) {
    board_index.emplace(edges.board_keys[i], i);
  }

  std::string line;
  std::uint64_t line_no = 0;
  TopicVector vec;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = strip_cr(line);
    if (text.empty()) continue;
    const auto fields = split(text, '\t');
    if (fields.size() != 3 || fields[0].empty()) {
      parse_error(source, line_no, "expected nodeKey<TAB>attrId<TAB>v1,...,vd");
    }
    unsigned attr = 0;
    {
      auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), attr);
      if (ec != std::errc() || ptr != fields[1].data() + fields[1].size() || attr > 0xFFFF) {
        parse_error(source, line_no, "attrId must be an integer in [0, 65535]");
      }
    }
    vec.clear();
    double total = 0.0;
    for (std::string_view comp : split(fields[2], ',')) {
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(comp.data(), comp.data() + comp.size(), x);
      if (ec != std::errc() || ptr != comp.data() + comp.size() || !(x >= 0.0) ||
          !std::isfinite(x)) {
        parse_error(source, line_no, "topic components must be non-negative numbers");
      }
      vec.push_back(x);
      total += x;
    }
    if (t.dim == 0) t.dim = vec.size();
    if (vec.size() != t.dim) {
      parse_error(source, line_no,
                  "topic vector has " + std::to_string(vec.size()) + " components, expected " +
                      std::to_string(t.dim));
    }
    if (std::abs(total - 1.0) > 1e-6) parse_error(source, line_no, "topic vector must sum to 1");

    bool used = false;
    if (auto it = pin_index.find(fields[0]); it != pin_index.end()) {
      t.pin_vectors[it->second] = vec;
      t.pin_attr[it->second] = static_cast<AttributeId>(attr);
      used = true;
    }
    if (auto it = board_index.find(fields[0]); it != board_index.end()) {
      t.board_attr[it->second] = static_cast<AttributeId>(attr);
      used = true;
    }
    if (!used) ++t.ignored_lines;
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + source);
  return t;
}

TopicTable parse_topic_file(const std::filesystem::path& path, const EdgeList& edges,
                            std::size_t expected_dim) {
  auto in = open_or_throw(path);
  return parse_topics(in, edges, expected_dim, path.string());
}

TopicVector board_topic_distribution(std::span<const TopicVector* const> members,
                                     std::size_t latest) {
  TopicVector mean;
  std::size_t used = 0;
  for (auto it = members.rbegin(); it != members.rend() && used < latest; ++it) {
    if (*it == nullptr) continue;
    const TopicVector& v = **it;
    if (mean.empty()) mean.assign(v.size(), 0.0);
    if (v.size() != mean.size()) throw Error(ErrorCode::kConfig, "topic dimension mismatch");
    simd::axpy(1.0, v, mean);
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::kMissingTopics, "no member pin has a topic vector");
  const double total = simd::sum(mean);
  if (!(total > 0.0)) throw Error(ErrorCode::kMissingTopics, "member topic vectors are all zero");
  for (double& x : mean) x /= total;
  return mean;
}

double entropy(std::span<const double> topic) {
  double h = 0.0;
  for (double p : topic) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  const double uu = simd::sum_squares(u);
  const double vv = simd::sum_squares(v);
  if (!(uu > 0.0) || !(vv > 0.0)) {
    throw Error(ErrorCode::kUndefinedSimilarity, "cosine similarity of a zero vector");
  }
  return simd::dot(u, v) / std::sqrt(uu * vv);
}

BoardPruneResult prune_boards(EdgeList& edges, std::span<const double> board_entropy,
                              double quantile) {
  if (!(quantile >= 0.0 && quantile < 1.0)) {
    throw Error(ErrorCode::kConfig, "entropy quantile must be in [0, 1)");
  }
  if (board_entropy.size() != edges.board_count()) {
    throw Error(ErrorCode::kConfig, "one entropy per board required");
  }
  BoardPruneResult result{0, kNaN};
  const auto target = static_cast<std::uint64_t>(
      std::ceil(quantile * static_cast<double>(edges.board_count()) - 1e-9));
  if (target == 0) return result;

  std::vector<std::uint32_t> ranked;
  for (std::uint32_t b = 0; b < edges.board_count(); ++b) {
    if (!edges.board_removed[b] && !std::isnan(board_entropy[b])) ranked.push_back(b);
  }
  std::sort(ranked.begin(), ranked.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (board_entropy[a] != board_entropy[b]) return board_entropy[a] > board_entropy[b];
    return a > b;
  });
  const std::size_t take = std::min<std::size_t>(target, ranked.size());
  for (std::size_t i = 0; i < take; ++i) edges.board_removed[ranked[i]] = 1;
  result.removed = take;
  if (take > 0) result.threshold = board_entropy[ranked[take - 1]];

  std::erase_if(edges.edges, [&](const BoardPin& e) { return edges.board_removed[e.board] != 0; });
  return result;
}

std::uint64_t pruned_degree(std::uint64_t degree, double delta) {
  if (degree == 0) return 0;
  const double kept = std::ceil(std::pow(static_cast<double>(degree), delta) - 1e-9);
  return std::clamp<std::uint64_t>(static_cast<std::uint64_t>(kept), 1, degree);
}

EdgePruneResult prune_edges(EdgeList& edges, const TopicTable& topics,
                            std::span<const std::optional<TopicVector>> board_dists,
                            double delta, std::uint64_t seed) {
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorCode::kConfig, "delta must be in (0, 1]");
  if (board_dists.size() != edges.board_count() || topics.pin_vectors.size() != edges.pin_count()) {
    throw Error(ErrorCode::kConfig, "topic table does not match the edge list");
  }
  EdgePruneResult result;
  if (delta == 1.0) return result;

  // Edge positions per pin, in save order.
  std::vector<std::vector<std::size_t>> by_pin(edges.pin_count());
  for (std::size_t i = 0; i < edges.edges.size(); ++i) by_pin[edges.edges[i].pin].push_back(i);

  std::vector<std::uint8_t> keep(edges.edges.size(), 1);
  std::vector<std::pair<double, std::uint32_t>> scored;
  for (std::uint32_t p = 0; p < edges.pin_count(); ++p) {
    auto& incident = by_pin[p];
    const std::uint64_t d = incident.size();
    const std::uint64_t k = pruned_degree(d, delta);
    if (k >= d) continue;
    for (std::size_t i : incident) keep[i] = 0;

    const auto& pin_vec = topics.pin_vectors[p];
    if (pin_vec) {
      scored.clear();
      for (std::size_t i : incident) {
        const std::uint32_t b = edges.edges[i].board;
        const double sim = board_dists[b] ? cosine_similarity(*pin_vec, *board_dists[b]) : -1.0;
        scored.emplace_back(sim, b);
      }
      std::vector<std::size_t> order(d);
      std::iota(order.begin(), order.end(), 0);
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                        [&](std::size_t a, std::size_t b) {
                          if (scored[a].first != scored[b].first) {
                            return scored[a].first > scored[b].first;
                          }
                          return scored[a].second < scored[b].second;
                        });
      for (std::size_t j = 0; j < k; ++j) keep[incident[order[j]]] = 1;
    } else {
      // Partial Fisher-Yates; one stream per pin keeps this schedule-free.
      Rng rng = make_rng(seed, p);
      for (std::uint64_t j = 0; j < k; ++j) {
        const std::uint64_t pick = j + draw_below(rng, d - j);
        std::swap(incident[j], incident[pick]);
        keep[incident[j]] = 1;
      }
      ++result.random_fallback_pins;
    }
  }

  std::size_t w = 0;
  for (std::size_t i = 0; i < edges.edges.size(); ++i) {
    if (keep[i]) edges.edges[w++] = edges.edges[i];
  }
  result.removed = edges.edges.size() - w;
  edges.edges.resize(w);
  return result;
}

void PruneConfig::validate() const {
  if (!(entropy_quantile >= 0.0 && entropy_quantile < 1.0)) {
    throw Error(ErrorCode::kConfig, "entropy quantile must be in [0, 1)");
  }
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorCode::kConfig, "delta must be in (0, 1]");
  if (latest_m < 1) throw Error(ErrorCode::kConfig, "latest M must be >= 1");
}

std::string CompileReport::to_json() const {
  nlohmann::ordered_json j;
  j["pins"] = pins;
  j["boardsBefore"] = boards_before;
  j["boardsAfter"] = boards_after;
  j["edgesBefore"] = edges_before;
  j["edgesAfter"] = edges_after;
  j["duplicates"] = duplicates;
  j["boardsRemoved"] = boards_removed;
  if (std::isnan(entropy_threshold)) {
    j["entropyThreshold"] = nullptr;
  } else {
    j["entropyThreshold"] = entropy_threshold;
  }
  j["isolatedPins"] = isolated_pins;
  j["isolatedBoards"] = isolated_boards;
  j["pinsWithoutTopics"] = pins_without_topics;
  j["boardsWithoutTopics"] = boards_without_topics;
  j["randomFallbackPins"] = random_fallback_pins;
  j["ignoredTopicLines"] = ignored_topic_lines;
  return j.dump();
}

CompiledGraph compile_graph(EdgeList edges, const TopicTable& topics, const PruneConfig& cfg) {
  cfg.validate();
  if (topics.pin_vectors.size() != edges.pin_count() ||
      topics.board_attr.size() != edges.board_count()) {
    throw Error(ErrorCode::kConfig, "topic table does not match the edge list");
  }
  if (cfg.topic_dim != 0 && topics.dim != 0 && cfg.topic_dim != topics.dim) {
    throw Error(ErrorCode::kConfig, "topic dimension differs from configuration");
  }
  edges.board_removed.assign(edges.board_count(), 0);

  CompileReport report;
  report.pins = edges.pin_count();
  report.boards_before = edges.board_count();
  report.edges_before = edges.edges.size();
  report.duplicates = edges.duplicates;
  report.ignored_topic_lines = topics.ignored_lines;
  for (const auto& v : topics.pin_vectors) report.pins_without_topics += v ? 0 : 1;

  const auto dists = board_distributions(edges, topics, cfg.latest_m);
  std::vector<double> board_entropy(edges.board_count(), kNaN);
  for (std::size_t b = 0; b < dists.size(); ++b) {
    if (dists[b]) {
      board_entropy[b] = entropy(*dists[b]);
    } else {
      ++report.boards_without_topics;
    }
  }

  const BoardPruneResult boards = prune_boards(edges, board_entropy, cfg.entropy_quantile);
  report.boards_removed = boards.removed;
  report.entropy_threshold = boards.threshold;

  const EdgePruneResult pruned = prune_edges(edges, topics, dists, cfg.delta, cfg.seed);
  report.random_fallback_pins = pruned.random_fallback_pins;

  // Dense IDs: pins keep their index, surviving boards follow in order.
  const std::uint64_t pin_count = edges.pin_count();
  std::vector<NodeId> board_id(edges.board_count(), kInvalidNode);
  std::vector<std::string> board_keys;
  for (std::uint32_t b = 0; b < edges.board_count(); ++b) {
    if (edges.board_removed[b]) continue;
    board_id[b] = static_cast<NodeId>(pin_count + board_keys.size());
    board_keys.push_back(edges.board_keys[b]);
  }
  const std::uint64_t board_count = board_keys.size();

  std::vector<AttributeId> attrs(pin_count + board_count, kUnlabeled);
  std::copy(topics.pin_attr.begin(), topics.pin_attr.end(), attrs.begin());

  // Boards without an explicit attribute take the most common label among
  // their remaining pins (ties: smallest label; unlabeled only as a last resort).
  std::vector<std::unordered_map<AttributeId, std::uint64_t>> votes(edges.board_count());
  std::vector<PinBoardEdge> out_edges;
  out_edges.reserve(edges.edges.size());
  std::vector<std::uint64_t> pin_degree(pin_count, 0);
  std::vector<std::uint64_t> board_degree(edges.board_count(), 0);
  for (const BoardPin& e : edges.edges) {
    out_edges.push_back({e.pin, board_id[e.board]});
    ++pin_degree[e.pin];
    ++board_degree[e.board];
    ++votes[e.board][topics.pin_attr[e.pin]];
  }
  for (std::uint32_t b = 0; b < edges.board_count(); ++b) {
    if (edges.board_removed[b]) continue;
    if (board_degree[b] == 0) ++report.isolated_boards;
    if (topics.board_attr[b]) {
      attrs[board_id[b]] = *topics.board_attr[b];
      continue;
    }
    AttributeId best = kUnlabeled;
    std::uint64_t best_votes = 0;
    for (const auto& [a, n] : votes[b]) {
      if (a == kUnlabeled) continue;
      if (n > best_votes || (n == best_votes && a < best)) {
        best = a;
        best_votes = n;
      }
    }
    attrs[board_id[b]] = best;
  }
  for (std::uint64_t d : pin_degree) report.isolated_pins += d == 0 ? 1 : 0;

  CompiledGraph out{build_graph(pin_count, board_count, std::move(out_edges), attrs),
                    IdMap(std::move(edges.pin_keys), std::move(board_keys)), {}};
  report.boards_after = board_count;
  report.edges_after = out.graph.edge_count();
  out.report = report;
  return out;
}

CompileReport compile(const std::filesystem::path& edges_path,
                      const std::filesystem::path& topics_path, const PruneConfig& cfg,
                      const std::filesystem::path& out) {
  cfg.validate();
  EdgeList edges = parse_edge_file(edges_path);
  TopicTable topics = topics_path.empty()
                          ? TopicTable::empty_for(edges)
                          : parse_topic_file(topics_path, edges, cfg.topic_dim);
  CompiledGraph compiled = compile_graph(std::move(edges), topics, cfg);

  const std::filesystem::path map_path = id_map_path_for(out);
  auto tmp_graph = out;
  tmp_graph += ".tmp";
  auto tmp_map = map_path;
  tmp_map += ".tmp";
  bool map_placed = false;
  try {
    // The ID map lands first so a watcher that sees the graph also sees its map.
    compiled.ids.save(tmp_map);
    save_binary(compiled.graph, tmp_graph);
    std::filesystem::rename(tmp_map, map_path);
    map_placed = true;
    std::filesystem::rename(tmp_graph, out);
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(tmp_map, ignored);
    std::filesystem::remove(tmp_graph, ignored);
    if (map_placed) std::filesystem::remove(map_path, ignored);
    throw;
  }
  return compiled.report;
}

}  // namespace pixie
