// Copyright 2026 The leastcore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEASTCORE_COALITION_HPP
#define LEASTCORE_COALITION_HPP

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace leastcore {

/// A subset of the player set {1..n}, stored as a fixed-width bit vector.
///
/// Players are addressed 0-based through this interface; to_string() renders
/// the 1-based labels used in all user-facing output.
class coalition {
 public:
  coalition() = default;
  explicit coalition(std::size_t player_count)
      : size_(player_count), words_((player_count + 63) / 64, 0) {}

  /// Builds a coalition from 0-based member indices.
  coalition(std::size_t player_count, std::initializer_list<std::size_t> members)
      : coalition(player_count) {
    for (auto i : members) insert(i);
  }

  static coalition from_mask(std::size_t player_count, std::uint64_t mask) {
    assert(player_count <= 64);
    coalition c(player_count);
    if (player_count > 0) {
      c.words_[0] = player_count == 64 ? mask : mask & ((std::uint64_t{1} << player_count) - 1);
    }
    return c;
  }

  static coalition grand(std::size_t player_count) {
    coalition c(player_count);
    for (std::size_t i = 0; i < player_count; ++i) c.insert(i);
    return c;
  }

  std::size_t player_count() const noexcept { return size_; }

  bool contains(std::size_t player) const {
    assert(player < size_);
    return (words_[player / 64] >> (player % 64)) & 1U;
  }
  void insert(std::size_t player) {
    assert(player < size_);
    words_[player / 64] |= std::uint64_t{1} << (player % 64);
  }
  void erase(std::size_t player) {
    assert(player < size_);
    words_[player / 64] &= ~(std::uint64_t{1} << (player % 64));
  }

  std::size_t size() const noexcept {
    std::size_t count = 0;
    for (auto w : words_) count += static_cast<std::size_t>(std::popcount(w));
    return count;
  }
  bool empty() const noexcept { return size() == 0; }

  /// 0-based member indices in increasing order.
  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size_; ++i) {
      if (contains(i)) out.push_back(i);
    }
    return out;
  }

  /// 1-based rendering, e.g. "{2,4}".
  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (auto i : members()) {
      if (!first) out += ',';
      out += std::to_string(i + 1);
      first = false;
    }
    out += '}';
    return out;
  }

  friend bool operator==(const coalition&, const coalition&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace leastcore

#endif  // LEASTCORE_COALITION_HPP
