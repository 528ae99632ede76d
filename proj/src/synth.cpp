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

#include "pixie/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "pixie/rng.hpp"

namespace pixie {

void SynthConfig::validate() const {
  if (communities < 1 || pins_per_community < 1 || boards_per_community < 1 ||
      edges_per_board < 1) {
    throw Error(ErrorCode::kConfig, "synthetic graph counts must be >= 1");
  }
  if (!(cross_community_noise >= 0.0 && cross_community_noise < 1.0)) {
    throw Error(ErrorCode::kConfig, "cross-community noise must be in [0, 1)");
  }
  if (cross_community_noise > 0.0 && communities < 2) {
    throw Error(ErrorCode::kConfig, "cross-community noise needs at least two communities");
  }
  if (!community_attr.empty() && community_attr.size() != communities) {
    throw Error(ErrorCode::kConfig, "need one attribute per community");
  }
  if (communities + 1 > 0xFFFF && community_attr.empty()) {
    throw Error(ErrorCode::kConfig, "too many communities for default attributes");
  }
  if (!(popularity_skew >= 0.0) || !std::isfinite(popularity_skew)) {
    throw Error(ErrorCode::kConfig, "popularity skew must be >= 0");
  }
  if (!(diverse_board_fraction >= 0.0 && diverse_board_fraction <= 1.0)) {
    throw Error(ErrorCode::kConfig, "diverse board fraction must be in [0, 1]");
  }
  if (!(topic_dominance > 0.0 && topic_dominance <= 1.0)) {
    throw Error(ErrorCode::kConfig, "topic dominance must be in (0, 1]");
  }
  const std::uint64_t pins = std::uint64_t{communities} * pins_per_community;
  const std::uint64_t boards = std::uint64_t{communities} * boards_per_community;
  if (pins + boards >= kMaxNodes) throw Error(ErrorCode::kConfig, "synthetic graph too large");
}

AttributeId SynthConfig::attr_of(std::uint32_t community) const {
  return community_attr.empty() ? static_cast<AttributeId>(community + 1)
                                : community_attr[community];
}

std::vector<std::uint32_t> SyntheticData::board_pins(std::uint32_t board) const {
  std::vector<std::uint32_t> out;
  for (const BoardPin& e : edges.edges) {
    if (e.board == board) out.push_back(e.pin);
  }
  return out;
}

namespace {

// Draws a within-community rank from a Zipf(skew) table.
class RankSampler {
 public:
  RankSampler(std::uint32_t n, double skew) : cdf_(n) {
    double acc = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      acc += std::pow(static_cast<double>(i) + 1.0, -skew);
      cdf_[i] = acc;
    }
    for (double& c : cdf_) c /= acc;
  }

  std::uint32_t operator()(Rng& rng) const {
    const double u = draw_unit(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::uint32_t>(std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1));
  }

 private:
  std::vector<double> cdf_;
};

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

SyntheticData generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  const std::uint32_t C = cfg.communities;
  const std::uint32_t P = cfg.pins_per_community;
  const std::uint32_t pin_count = C * P;
  const std::uint32_t board_count = C * cfg.boards_per_community;

  Rng rng = make_rng(cfg.seed, 0x5A);
  const RankSampler rank(P, cfg.popularity_skew);
  auto draw_pin = [&](std::uint32_t community) { return community * P + rank(rng); };
  auto other_community = [&](std::uint32_t c) {
    const auto k = static_cast<std::uint32_t>(draw_below(rng, C - 1));
    return k >= c ? k + 1 : k;
  };

  SyntheticData data;
  data.edges.pin_keys.reserve(pin_count);
  data.pin_community.resize(pin_count);
  for (std::uint32_t p = 0; p < pin_count; ++p) {
    data.edges.pin_keys.push_back("p" + std::to_string(p));
    data.pin_community[p] = p / P;
  }
  for (std::uint32_t b = 0; b < board_count; ++b) {
    data.edges.board_keys.push_back("b" + std::to_string(b));
  }
  data.edges.board_removed.assign(board_count, 0);
  data.board_community.resize(board_count);
  data.holdout.resize(board_count);

  std::unordered_set<std::uint32_t> on_board;
  for (std::uint32_t b = 0; b < board_count; ++b) {
    const std::uint32_t community = b / cfg.boards_per_community;
    const bool diverse =
        cfg.diverse_board_fraction > 0.0 && draw_unit(rng) < cfg.diverse_board_fraction;
    data.board_community[b] = diverse ? SyntheticData::kDiverse : community;

    on_board.clear();
    for (std::uint32_t i = 0; i < cfg.edges_per_board; ++i) {
      std::uint32_t c = community;
      if (diverse) {
        c = static_cast<std::uint32_t>(draw_below(rng, C));
      } else if (cfg.cross_community_noise > 0.0 && draw_unit(rng) < cfg.cross_community_noise) {
        c = other_community(community);
      }
      const std::uint32_t pin = draw_pin(c);
      if (on_board.insert(pin).second) {
        data.edges.edges.push_back({b, pin});
      } else {
        ++data.edges.duplicates;
      }
    }

    // Future saves come from the board's topic alone.
    const std::uint32_t home =
        diverse ? static_cast<std::uint32_t>(draw_below(rng, C)) : community;
    const std::uint32_t wanted = cfg.holdout_per_board;
    for (std::uint32_t tries = 0; data.holdout[b].size() < wanted && tries < 64 * wanted; ++tries) {
      const std::uint32_t pin = draw_pin(home);
      if (on_board.insert(pin).second) data.holdout[b].push_back(pin);
    }
  }

  TopicTable& t = data.topics;
  t.dim = C;
  t.pin_vectors.resize(pin_count);
  t.pin_attr.resize(pin_count);
  t.board_attr.assign(board_count, std::nullopt);
  for (std::uint32_t p = 0; p < pin_count; ++p) {
    const std::uint32_t c = data.pin_community[p];
    TopicVector v(C, 0.0);
    double rest = 0.0;
    for (std::uint32_t k = 0; k < C; ++k) {
      if (k == c) continue;
      v[k] = draw_unit_open(rng);
      rest += v[k];
    }
    const double spill = C > 1 ? 1.0 - cfg.topic_dominance : 0.0;
    for (std::uint32_t k = 0; k < C; ++k) {
      v[k] = k == c ? 1.0 - spill : spill * v[k] / rest;
    }
    t.pin_vectors[p] = std::move(v);
    t.pin_attr[p] = cfg.attr_of(c);
  }
  return data;
}

SynthConfig bilingual_config(std::uint64_t seed) {
  SynthConfig c;
  c.communities = 10;
  c.pins_per_community = 300;
  c.boards_per_community = 40;
  c.edges_per_board = 60;
  c.cross_community_noise = 0.10;
  c.community_attr.resize(c.communities);
  for (std::uint32_t i = 0; i < c.communities; ++i) {
    c.community_attr[i] = i < c.communities / 2 ? 1 : 2;
  }
  c.seed = seed;
  return c;
}

SynthConfig noisy_config(std::uint64_t seed) {
  SynthConfig c;
  c.cross_community_noise = 0.15;
  c.popularity_skew = 1.0;
  c.diverse_board_fraction = 0.05;
  c.holdout_per_board = 5;
  c.edges_per_board = 100;
  c.seed = seed;
  return c;
}

void write_synthetic(const SyntheticData& data, const std::filesystem::path& edges_path,
                     const std::filesystem::path& topics_path) {
  {
    std::ofstream out(edges_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + edges_path.string());
    for (const BoardPin& e : data.edges.edges) {
      out << data.edges.board_keys[e.board] << '\t' << data.edges.pin_keys[e.pin] << '\n';
    }
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + edges_path.string());
  }
  std::ofstream out(topics_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + topics_path.string());
  for (std::size_t p = 0; p < data.edges.pin_count(); ++p) {
    const auto& v = data.topics.pin_vectors[p];
    if (!v) continue;
    out << data.edges.pin_keys[p] << '\t' << data.topics.pin_attr[p] << '\t';
    for (std::size_t k = 0; k < v->size(); ++k) {
      if (k) out << ',';
      out << format_double((*v)[k]);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + topics_path.string());
}

CompiledGraph compile_unpruned(const SyntheticData& data) {
  PruneConfig cfg;
  cfg.entropy_quantile = 0.0;
  cfg.delta = 1.0;
  return compile_graph(data.edges, data.topics, cfg);
}

}  // namespace pixie
