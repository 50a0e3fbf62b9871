// Copyright 2026 The DLS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Block-stream transform: the output stream g is the source stream phi cut
// into n-bit blocks, block j mapped through B_{h(j)}. recover() runs the
// inverse maps over the same partition, which is the constructive content
// of the argument that g inherits the incomputability of phi.

#ifndef DLS_STREAM_HPP_
#define DLS_STREAM_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dls/bitcore.hpp"
#include "dls/engine.hpp"
#include "dls/scheduler.hpp"

namespace dls {

// A finite bit sequence, one bit per element.
class BitStream {
 public:
  BitStream() = default;
  explicit BitStream(std::vector<std::uint8_t> bits);

  // Bit 0 of byte 0 comes first.
  static BitStream from_bytes(std::span<const std::uint8_t> bytes);
  // Inverse of from_bytes; throws ContractViolation unless size() % 8 == 0.
  std::vector<std::uint8_t> to_bytes() const;

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  // Block j covers bits [j*n, (j+1)*n); bit j*n+i is coordinate i.
  BitVec block(int n, std::size_t j) const;
  void set_block(int n, std::size_t j, const BitVec& v);

  friend bool operator==(const BitStream&, const BitStream&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

class StreamTransform {
 public:
  // `maps` are B_1..B_m in key order; the scheduler must only name keys of
  // `maps`.
  StreamTransform(int block_width, Family maps,
                  std::shared_ptr<const Scheduler> scheduler);

  int block_width() const noexcept { return block_width_; }
  std::size_t map_count() const noexcept { return maps_.size(); }
  const Family& maps() const noexcept { return maps_; }
  const Scheduler& scheduler() const noexcept { return *scheduler_; }

  // Map and inverse governing block j. Throw SchedulerError/UnknownState.
  const InvertibleMap& forward_at(std::uint64_t block) const;
  const InvertibleMap& inverse_at(std::uint64_t block) const;

 private:
  int block_width_;
  Family maps_;
  Family inverses_;
  std::shared_ptr<const Scheduler> scheduler_;
};

enum class StreamDirection { kTransform, kRecover };

// Pull-based form: blocks are mapped one at a time as they are requested.
class BlockStream {
 public:
  using Puller = std::function<std::optional<BitVec>()>;

  BlockStream(const StreamTransform& st, StreamDirection dir, Puller source)
      : st_(st), dir_(dir), source_(std::move(source)) {}

  // nullopt once the source is exhausted.
  std::optional<BitVec> next();
  std::uint64_t position() const noexcept { return position_; }

 private:
  const StreamTransform& st_;
  StreamDirection dir_;
  Puller source_;
  std::uint64_t position_ = 0;
};

// Both throw ContractViolation when the length is not a multiple of n.
BitStream transform(const StreamTransform& st, const BitStream& phi);
BitStream recover(const StreamTransform& st, const BitStream& g);

}  // namespace dls

#endif  // DLS_STREAM_HPP_
