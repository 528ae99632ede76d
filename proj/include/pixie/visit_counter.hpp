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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "pixie/error.hpp"
#include "pixie/graph.hpp"

namespace pixie {

// Fixed-capacity open-addressing map NodeId -> visit count with linear
// probing and Fibonacci multiplicative hashing. Capacity is a power of two
// of at least twice the expected key count, and the table refuses to go past
// a load factor of 1/2. Storage is reused across reset() calls so a worker
// can keep one counter for its whole lifetime.
class VisitCounter {
 public:
  static constexpr std::uint64_t kFib64 = 0x9E3779B97F4A7C15ULL;

  struct Entry {
    NodeId key;
    std::uint32_t count;
  };

  explicit VisitCounter(std::uint64_t expected_keys = 1) { reset(expected_keys); }

  static std::uint64_t capacity_for(std::uint64_t expected_keys) {
    return std::bit_ceil(std::max<std::uint64_t>(2, 2 * expected_keys));
  }

  // Empties the table and resizes the probing window for `expected_keys`.
  void reset(std::uint64_t expected_keys) {
    capacity_ = capacity_for(expected_keys);
    shift_ = 64 - std::countr_zero(capacity_);
    mask_ = capacity_ - 1;
    if (slots_.size() < capacity_) slots_.resize(capacity_);
    std::fill_n(slots_.begin(), capacity_, Entry{kInvalidNode, 0});
    size_ = 0;
    total_ = 0;
  }

  std::uint64_t home_slot(NodeId key) const {
    return (static_cast<std::uint64_t>(key) * kFib64) >> shift_;
  }

  // Returns the count after incrementing.
  std::uint32_t increment(NodeId key) {
    std::uint64_t i = home_slot(key);
    while (true) {
      Entry& e = slots_[i];
      if (e.key == key) {
        ++total_;
        return ++e.count;
      }
      if (e.key == kInvalidNode) {
        if (2 * (size_ + 1) > capacity_) throw_full();
        e.key = key;
        e.count = 1;
        ++size_;
        ++total_;
        return 1;
      }
      i = (i + 1) & mask_;
    }
  }

  std::uint32_t lookup(NodeId key) const {
    std::uint64_t i = home_slot(key);
    while (true) {
      const Entry& e = slots_[i];
      if (e.key == key) return e.count;
      if (e.key == kInvalidNode) return 0;
      i = (i + 1) & mask_;
    }
  }

  std::uint64_t size() const { return size_; }
  std::uint64_t capacity() const { return capacity_; }
  // Sum of all counts, i.e. the number of increments since reset.
  std::uint64_t total() const { return total_; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t i = 0; i < capacity_; ++i) {
      if (slots_[i].key != kInvalidNode) fn(slots_[i].key, slots_[i].count);
    }
  }

  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    out.reserve(size_);
    for_each([&](NodeId k, std::uint32_t c) { out.push_back({k, c}); });
    return out;
  }

 private:
  [[noreturn]] void throw_full() const {
    throw Error(ErrorCode::kCounterFull,
                "visit counter full at capacity " + std::to_string(capacity_));
  }

  std::vector<Entry> slots_;
  std::uint64_t capacity_ = 0;
  std::uint64_t mask_ = 0;
  int shift_ = 64;
  std::uint64_t size_ = 0;
  std::uint64_t total_ = 0;
};

}  // namespace pixie
