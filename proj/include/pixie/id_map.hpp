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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pixie/graph.hpp"

namespace pixie {

// External key <-> dense node ID. Pins and boards have separate key spaces.
class IdMap {
 public:
  IdMap() = default;
  IdMap(std::vector<std::string> pin_keys, std::vector<std::string> board_keys);

  std::size_t pin_count() const { return pin_keys_.size(); }
  std::size_t board_count() const { return board_keys_.size(); }

  std::optional<NodeId> find_pin(std::string_view key) const;
  std::optional<NodeId> find_board(std::string_view key) const;
  const std::string& key_of(NodeId id) const;

  // `externalKey<TAB>internalId` per line, pins first, ascending ID.
  void save(const std::filesystem::path& path) const;
  // `pin_count` splits the ID space back into pins and boards.
  static IdMap load(const std::filesystem::path& path, std::uint64_t pin_count);

  bool operator==(const IdMap& other) const {
    return pin_keys_ == other.pin_keys_ && board_keys_ == other.board_keys_;
  }

 private:
  std::vector<std::string> pin_keys_;
  std::vector<std::string> board_keys_;
  std::unordered_map<std::string, NodeId> pin_index_;
  std::unordered_map<std::string, NodeId> board_index_;
};

// graph.pixg -> graph.idmap
std::filesystem::path id_map_path_for(const std::filesystem::path& graph_path);

}  // namespace pixie
