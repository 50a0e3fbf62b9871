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

#ifndef DLS_RANDOM_SOURCE_HPP_
#define DLS_RANDOM_SOURCE_HPP_

#include <cstdint>
#include <random>
#include <string>

#include "dls/bitcore.hpp"

namespace dls {

// Pull interface over a bit source. Implementations throw SourceFailure
// when they cannot deliver.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  // 1 <= k <= BitVec::kMaxWidth.
  virtual BitVec next_bits(int k) = 0;
  // "seeded:<u64>", "os" or "qrng:<url>".
  virtual std::string descriptor() const = 0;
};

// mt19937_64; the engine is fully specified by the standard, so a seed
// reproduces the same bits on every conforming platform. Each call consumes
// one 64-bit output and keeps its low k bits.
class SeededSource final : public RandomSource {
 public:
  explicit SeededSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  BitVec next_bits(int k) override;
  std::string descriptor() const override {
    return "seeded:" + std::to_string(seed_);
  }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

class OsEntropySource final : public RandomSource {
 public:
  BitVec next_bits(int k) override;
  std::string descriptor() const override { return "os"; }

 private:
  std::random_device device_;
};

}  // namespace dls

#endif  // DLS_RANDOM_SOURCE_HPP_
