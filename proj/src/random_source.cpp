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

#include "dls/random_source.hpp"

#include "dls/error.hpp"

namespace dls {

namespace {

void check_request(int k) {
  if (k < 1 || k > BitVec::kMaxWidth) {
    throw ContractViolation("next_bits: k must be in 1.." +
                            std::to_string(BitVec::kMaxWidth));
  }
}

}  // namespace

BitVec SeededSource::next_bits(int k) {
  check_request(k);
  return BitVec(k, static_cast<std::uint32_t>(engine_()) & width_mask(k));
}

BitVec OsEntropySource::next_bits(int k) {
  check_request(k);
  try {
    return BitVec(k, static_cast<std::uint32_t>(device_()) & width_mask(k));
  } catch (const std::exception& e) {
    throw SourceFailure(std::string("OS entropy unavailable: ") + e.what());
  }
}

}  // namespace dls
