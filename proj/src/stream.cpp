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

#include "dls/stream.hpp"

#include "dls/error.hpp"

namespace dls {

BitStream::BitStream(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

BitStream BitStream::from_bytes(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> bits(bytes.size() * 8);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    for (int k = 0; k < 8; ++k) bits[i * 8 + k] = (bytes[i] >> k) & 1U;
  }
  return BitStream(std::move(bits));
}

std::vector<std::uint8_t> BitStream::to_bytes() const {
  if (bits_.size() % 8 != 0) {
    throw ContractViolation("bit stream length is not a whole number of bytes");
  }
  std::vector<std::uint8_t> out(bits_.size() / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    out[i / 8] |= static_cast<std::uint8_t>(bits_[i] << (i % 8));
  }
  return out;
}

BitVec BitStream::block(int n, std::size_t j) const {
  std::uint32_t v = 0;
  const std::size_t base = j * static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i) {
    v |= static_cast<std::uint32_t>(bits_[base + i]) << i;
  }
  return BitVec(n, v);
}

void BitStream::set_block(int n, std::size_t j, const BitVec& v) {
  const std::size_t base = j * static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i) bits_[base + i] = v[i] ? 1 : 0;
}

StreamTransform::StreamTransform(int block_width, Family maps,
                                 std::shared_ptr<const Scheduler> scheduler)
    : block_width_(block_width),
      maps_(std::move(maps)),
      scheduler_(std::move(scheduler)) {
  if (maps_.empty()) throw ContractViolation("stream transform needs m >= 1");
  if (!scheduler_) throw ContractViolation("stream transform needs a scheduler");
  for (const auto& [s, map] : maps_) {
    if (map.width() != block_width) {
      throw ContractViolation("map " + s.to_string() +
                              " does not match the block width");
    }
    inverses_.emplace(s, invert(map));
  }
}

namespace {

const InvertibleMap& lookup(const Family& f, const StateId& s) {
  auto it = f.find(s);
  if (it == f.end()) {
    throw UnknownState("scheduler named " + s.to_string() +
                       ", which has no map");
  }
  return it->second;
}

void check_length(const StreamTransform& st, std::size_t bits) {
  if (bits % static_cast<std::size_t>(st.block_width()) != 0) {
    throw ContractViolation("stream length " + std::to_string(bits) +
                            " is not a multiple of n=" +
                            std::to_string(st.block_width()));
  }
}

BitStream map_blocks(const StreamTransform& st, const BitStream& in,
                     StreamDirection dir) {
  check_length(st, in.size());
  const int n = st.block_width();
  const std::size_t blocks = in.size() / static_cast<std::size_t>(n);
  std::size_t j = 0;
  BlockStream pull(st, dir, [&]() -> std::optional<BitVec> {
    if (j == blocks) return std::nullopt;
    return in.block(n, j++);
  });
  BitStream out = in;
  for (std::size_t k = 0; k < blocks; ++k) out.set_block(n, k, *pull.next());
  return out;
}

}  // namespace

const InvertibleMap& StreamTransform::forward_at(std::uint64_t block) const {
  return lookup(maps_, state_at(*scheduler_, block));
}

const InvertibleMap& StreamTransform::inverse_at(std::uint64_t block) const {
  return lookup(inverses_, state_at(*scheduler_, block));
}

std::optional<BitVec> BlockStream::next() {
  auto block = source_();
  if (!block) return std::nullopt;
  const auto& map = dir_ == StreamDirection::kTransform
                        ? st_.forward_at(position_)
                        : st_.inverse_at(position_);
  ++position_;
  return apply(map, *block);
}

BitStream transform(const StreamTransform& st, const BitStream& phi) {
  return map_blocks(st, phi, StreamDirection::kTransform);
}

BitStream recover(const StreamTransform& st, const BitStream& g) {
  return map_blocks(st, g, StreamDirection::kRecover);
}

}  // namespace dls
