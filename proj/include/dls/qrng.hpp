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

// HTTP client for a quantum random number service. Each request is a plain
// GET whose body is raw entropy bytes; bit 0 of byte 0 is consumed first and
// unused bits stay buffered for the next call.

#ifndef DLS_QRNG_HPP_
#define DLS_QRNG_HPP_

#include <cstdint>
#include <deque>
#include <string>

#include "dls/random_source.hpp"

namespace dls {

struct QrngConfig {
  std::string url;  // http://host[:port]/path
  int timeout_ms = 5000;
  // Requests attempted per fetch before giving up.
  int max_retries = 3;
};

class QrngSource final : public RandomSource {
 public:
  explicit QrngSource(QrngConfig config);

  // Throws SourceFailure once max_retries requests have failed.
  BitVec next_bits(int k) override;
  std::string descriptor() const override { return "qrng:" + config_.url; }

  std::size_t buffered_bits() const noexcept { return buffer_.size(); }
  std::size_t requests_made() const noexcept { return requests_; }

 private:
  void fetch();

  QrngConfig config_;
  std::string host_;  // scheme://host:port
  std::string path_;
  std::deque<bool> buffer_;
  std::size_t requests_ = 0;
};

}  // namespace dls

#endif  // DLS_QRNG_HPP_
