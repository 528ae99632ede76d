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
#include <string>

#include "pixie/graph.hpp"

namespace pixie {

inline constexpr char kGraphMagic[4] = {'P', 'I', 'X', 'G'};
inline constexpr std::uint32_t kGraphFormatVersion = 1;

// Little-endian layout:
//   "PIXG" | u32 version | u64 pins | u64 boards | u64 edgeSlots
//   | u64 offsets[nodes+1] | u32 edgeVec[edgeSlots] | u16 nodeAttr[nodes]
//   | per node: u16 count, count x (u16 attr, u32 begin, u32 end)
//   | u32 CRC32 of every preceding byte
// Output bytes are a pure function of the graph.
void save_binary(const BipartiteGraph& graph, const std::filesystem::path& path);

// Serializes to memory; save_binary writes exactly these bytes.
std::string encode_binary(const BipartiteGraph& graph);

// Sequential read. Failures raise Error with kIo, kBadMagic,
// kVersionMismatch, kTruncated, kChecksumMismatch or kInvariantViolation.
BipartiteGraph load_binary(const std::filesystem::path& path);
BipartiteGraph decode_binary(const std::string& bytes);

}  // namespace pixie
