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

#include "pixie/id_map.hpp"

#include <charconv>
#include <fstream>

namespace pixie {

IdMap::IdMap(std::vector<std::string> pin_keys, std::vector<std::string> board_keys)
    : pin_keys_(std::move(pin_keys)), board_keys_(std::move(board_keys)) {
  pin_index_.reserve(pin_keys_.size());
  for (std::size_t i = 0; i < pin_keys_.size(); ++i) {
    pin_index_.emplace(pin_keys_[i], static_cast<NodeId>(i));
  }
  board_index_.reserve(board_keys_.size());
  for (std::size_t i = 0; i < board_keys_.size(); ++i) {
    board_index_.emplace(board_keys_[i], static_cast<NodeId>(pin_keys_.size() + i));
  }
}

std::optional<NodeId> IdMap::find_pin(std::string_view key) const {
  auto it = pin_index_.find(std::string(key));
  if (it == pin_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> IdMap::find_board(std::string_view key) const {
  auto it = board_index_.find(std::string(key));
  if (it == board_index_.end()) return std::nullopt;
  return it->second;
}

const std::string& IdMap::key_of(NodeId id) const {
  if (id < pin_keys_.size()) return pin_keys_[id];
  const std::size_t b = id - pin_keys_.size();
  if (b < board_keys_.size()) return board_keys_[b];
  throw Error(ErrorCode::kInvalidNode, "no key for node " + std::to_string(id));
}

void IdMap::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < pin_keys_.size(); ++i) out << pin_keys_[i] << '\t' << i << '\n';
  for (std::size_t i = 0; i < board_keys_.size(); ++i) {
    out << board_keys_[i] << '\t' << pin_keys_.size() + i << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

IdMap IdMap::load(const std::filesystem::path& path, std::uint64_t pin_count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::string> pins;
  std::vector<std::string> boards;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    std::uint64_t id = 0;
    const char* first = line.data() + (tab == std::string::npos ? 0 : tab + 1);
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, id);
    if (tab == std::string::npos || tab == 0 || ec != std::errc() || ptr != last) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) +
                                         ": expected key<TAB>id");
    }
    auto& bucket = id < pin_count ? pins : boards;
    const std::uint64_t expected = id < pin_count ? pins.size() : pin_count + boards.size();
    if (id != expected) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) +
                                         ": ids must be dense and ascending");
    }
    bucket.push_back(line.substr(0, tab));
  }
  if (pins.size() != pin_count) {
    throw Error(ErrorCode::kParse, path.string() + ": pin count does not match graph");
  }
  return IdMap(std::move(pins), std::move(boards));
}

std::filesystem::path id_map_path_for(const std::filesystem::path& graph_path) {
  auto p = graph_path;
  p.replace_extension(".idmap");
  return p;
}

}  // namespace pixie
