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

#include "pixie/graph_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <iterator>
#include <string_view>

namespace pixie {
namespace {

class Writer {
 public:
  template <typename T>
  void put(T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
    }
  }

  void put_bytes(const char* data, std::size_t n) { out_.append(data, n); }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : in_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  // Rejects element counts that cannot fit before allocating for them.
  void need_elements(std::uint64_t count, std::size_t width) const {
    if (count > (in_.size() - pos_) / width) truncated();
  }

  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) truncated();
  }
  [[noreturn]] static void truncated() {
    throw Error(ErrorCode::kTruncated, "graph file truncated");
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  const auto* data = reinterpret_cast<const Bytef*>(bytes.data());
  std::size_t left = bytes.size();
  while (left > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(left, 1u << 30));
    crc = crc32(crc, data, chunk);
    data += chunk;
    left -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::string encode_binary(const BipartiteGraph& graph) {
  const GraphParts& g = graph.parts();
  Writer w;
  w.put_bytes(kGraphMagic, 4);
  w.put<std::uint32_t>(kGraphFormatVersion);
  w.put<std::uint64_t>(g.pin_count);
  w.put<std::uint64_t>(g.board_count);
  w.put<std::uint64_t>(g.edges.size());
  for (std::uint64_t o : g.offsets) w.put<std::uint64_t>(o);
  for (NodeId e : g.edges) w.put<std::uint32_t>(e);
  for (AttributeId a : g.node_attr) w.put<std::uint16_t>(a);
  for (std::uint64_t v = 0; v + 1 < g.range_offsets.size(); ++v) {
    const std::uint64_t count = g.range_offsets[v + 1] - g.range_offsets[v];
    if (count > 0xFFFF) {
      throw Error(ErrorCode::kConfig, "node " + std::to_string(v) + " has > 65535 attribute ranges");
    }
    w.put<std::uint16_t>(static_cast<std::uint16_t>(count));
    for (std::uint64_t r = g.range_offsets[v]; r < g.range_offsets[v + 1]; ++r) {
      w.put<std::uint16_t>(g.ranges[r].attr);
      w.put<std::uint32_t>(g.ranges[r].begin);
      w.put<std::uint32_t>(g.ranges[r].end);
    }
  }
  w.put<std::uint32_t>(crc32_of(w.bytes()));
  return std::move(w.bytes());
}

void save_binary(const BipartiteGraph& graph, const std::filesystem::path& path) {
  const std::string bytes = encode_binary(graph);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

BipartiteGraph decode_binary(const std::string& bytes) {
  if (bytes.size() < 4) throw Error(ErrorCode::kTruncated, "graph file truncated");
  if (std::memcmp(bytes.data(), kGraphMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not a PIXG graph file");
  }
  if (bytes.size() < 8) throw Error(ErrorCode::kTruncated, "graph file truncated");
  const std::string_view body(bytes.data(), bytes.size() >= 4 ? bytes.size() - 4 : 0);
  Reader r(body);
  r.get<std::uint32_t>();  // magic, already checked
  const auto version = r.get<std::uint32_t>();
  if (version != kGraphFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "graph format version " + std::to_string(version) + ", expected " +
                    std::to_string(kGraphFormatVersion));
  }

  GraphParts g;
  g.pin_count = r.get<std::uint64_t>();
  g.board_count = r.get<std::uint64_t>();
  const auto slots = r.get<std::uint64_t>();
  if (g.pin_count > kMaxNodes || g.board_count > kMaxNodes ||
      g.pin_count + g.board_count > kMaxNodes) {
    throw Error(ErrorCode::kInvariantViolation, "node count exceeds 2^32-1");
  }
  const std::uint64_t n = g.node_count();

  r.need_elements(n + 1, 8);
  g.offsets.resize(n + 1);
  for (auto& o : g.offsets) o = r.get<std::uint64_t>();
  r.need_elements(slots, 4);
  g.edges.resize(slots);
  for (auto& e : g.edges) e = r.get<std::uint32_t>();
  r.need_elements(n, 2);
  g.node_attr.resize(n);
  for (auto& a : g.node_attr) a = r.get<std::uint16_t>();
  g.range_offsets.assign(1, 0);
  g.range_offsets.reserve(n + 1);
  for (std::uint64_t v = 0; v < n; ++v) {
    const auto count = r.get<std::uint16_t>();
    r.need_elements(count, 10);
    for (std::uint16_t i = 0; i < count; ++i) {
      AttrRange range;
      range.attr = r.get<std::uint16_t>();
      range.begin = r.get<std::uint32_t>();
      range.end = r.get<std::uint32_t>();
      g.ranges.push_back(range);
    }
    g.range_offsets.push_back(g.ranges.size());
  }
  if (r.position() != body.size()) {
    throw Error(ErrorCode::kInvariantViolation, "trailing bytes after attribute ranges");
  }

  Reader tail(std::string_view(bytes).substr(body.size()));
  const auto stored_crc = tail.get<std::uint32_t>();
  if (stored_crc != crc32_of(body)) {
    throw Error(ErrorCode::kChecksumMismatch, "graph file CRC32 mismatch");
  }
  return BipartiteGraph::from_parts(std::move(g));
}

BipartiteGraph load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path.string());
  return decode_binary(bytes);
}

}  // namespace pixie
