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

#include "dls/qrng.hpp"

#include "dls/error.hpp"
#include "httplib.h"

namespace dls {

QrngSource::QrngSource(QrngConfig config) : config_(std::move(config)) {
  const std::string& url = config_.url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.substr(0, scheme_end) != "http") {
    throw ContractViolation("QRNG endpoint must be an http:// URL: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  host_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (host_.size() <= scheme_end + 3) {
    throw ContractViolation("QRNG endpoint has no host: " + url);
  }
  if (config_.max_retries < 1) {
    throw ContractViolation("QRNG max_retries must be >= 1");
  }
}

void QrngSource::fetch() {
  httplib::Client client(host_);
  const auto sec = config_.timeout_ms / 1000;
  const auto usec = (config_.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  std::string last_error;
  for (int attempt = 0; attempt < config_.max_retries; ++attempt) {
    ++requests_;
    auto res = client.Get(path_);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->body.empty()) {
      last_error = "empty response";
      continue;
    }
    for (unsigned char byte : res->body) {
      for (int i = 0; i < 8; ++i) buffer_.push_back((byte >> i) & 1U);
    }
    return;
  }
  throw SourceFailure("QRNG " + config_.url + " failed after " +
                      std::to_string(config_.max_retries) +
                      " attempts: " + last_error);
}

BitVec QrngSource::next_bits(int k) {
  if (k < 1 || k > BitVec::kMaxWidth) {
    throw ContractViolation("next_bits: k out of range");
  }
  while (buffer_.size() < static_cast<std::size_t>(k)) fetch();
  std::uint32_t v = 0;
  for (int i = 0; i < k; ++i) {
    if (buffer_.front()) v |= 1U << i;
    buffer_.pop_front();
  }
  return BitVec(k, v);
}

}  // namespace dls
