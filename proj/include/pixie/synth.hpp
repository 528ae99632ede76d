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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pixie/compiler.hpp"

namespace pixie {

// Planted-community bipartite graph. Board b of community c saves
// edges_per_board pins, each from c with probability 1 - noise and otherwise
// from a uniformly chosen other community.
struct SynthConfig {
  std::uint32_t communities = 20;
  std::uint32_t pins_per_community = 500;
  std::uint32_t boards_per_community = 50;
  std::uint32_t edges_per_board = 150;
  double cross_community_noise = 0.05;
  // Attribute per community; empty means community index + 1.
  std::vector<AttributeId> community_attr;
  std::uint64_t seed = 1;

  // Zipf exponent of pin popularity inside a community; 0 draws uniformly.
  double popularity_skew = 0.0;
  // Share of boards that draw every save from a random community.
  double diverse_board_fraction = 0.0;
  // Later saves per board drawn from the board's own community only and kept
  // out of the edge list (ground truth for link prediction).
  std::uint32_t holdout_per_board = 0;
  // Topic mass on the pin's own community; the rest is spread at random.
  double topic_dominance = 0.8;

  // Throws Error(kConfig).
  void validate() const;
  AttributeId attr_of(std::uint32_t community) const;
};

struct SyntheticData {
  static constexpr std::uint32_t kDiverse = 0xFFFFFFFF;

  EdgeList edges;  // pins listed in ID order, saves in time order
  TopicTable topics;
  std::vector<std::uint32_t> pin_community;
  std::vector<std::uint32_t> board_community;  // kDiverse for diverse boards
  std::vector<std::vector<std::uint32_t>> holdout;  // per board, pin indices

  // Training saves of `board` in time order.
  std::vector<std::uint32_t> board_pins(std::uint32_t board) const;
};

SyntheticData generate_synthetic(const SynthConfig& cfg);

// Two attribute populations (1 and 2), half the communities each, joined by
// cross-community saves.
SynthConfig bilingual_config(std::uint64_t seed = 7);

// Noisy, popularity-skewed variant with diverse boards and held-out saves,
// used for the pruning sweep.
SynthConfig noisy_config(std::uint64_t seed = 11);

// Writes the edge file (`boardKey<TAB>pinKey`) and topic file
// (`key<TAB>attr<TAB>v1,...`) that `compile` reads.
void write_synthetic(const SyntheticData& data, const std::filesystem::path& edges_path,
                     const std::filesystem::path& topics_path);

// Compiles with pruning disabled; every pin and board is kept.
CompiledGraph compile_unpruned(const SyntheticData& data);

}  // namespace pixie
