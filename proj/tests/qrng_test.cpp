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

#include <atomic>
#include <chrono>
#include <thread>

#include "dls/error.hpp"
#include "gtest/gtest.h"
#include "httplib.h"

namespace dls {
namespace {

// Local stand-in for the entropy service. The handler decides each reply.
class MockService {
 public:
  using Handler = std::function<void(int call, httplib::Response&)>;

  explicit MockService(Handler h) : handler_(std::move(h)) {
    server_.Get("/random", [this](const httplib::Request&, httplib::Response& res) {
      handler_(calls_++, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockService() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/random"; }
  int calls() const { return calls_; }

 private:
  Handler handler_;
  httplib::Server server_;
  std::thread thread_;
  std::atomic<int> calls_{0};
  int port_ = 0;
};

void bytes(httplib::Response& res, std::string body) {
  res.status = 200;
  res.set_content(std::move(body), "application/octet-stream");
}

TEST(Qrng, AllOnes) {
  MockService svc([](int, httplib::Response& res) { bytes(res, std::string(4, '\xff')); });
  QrngSource src({svc.url()});
  EXPECT_EQ(src.next_bits(24), BitVec(24, 0xffffff));
  EXPECT_EQ(src.next_bits(1), BitVec(1, 1));
  EXPECT_EQ(src.requests_made(), 1U);
  EXPECT_EQ(src.buffered_bits(), 7U);
  EXPECT_EQ(src.next_bits(8), BitVec(8, 0xff));
  EXPECT_EQ(src.requests_made(), 2U);
  EXPECT_EQ(src.descriptor(), "qrng:" + svc.url());
}

TEST(Qrng, BitOrderAndBuffering) {
  MockService svc([](int, httplib::Response& res) { bytes(res, std::string("\x01\x80", 2)); });
  QrngSource src({svc.url()});
  // Bits 0..11 of the stream: 1 then seven zeros, then four zeros.
  EXPECT_EQ(src.next_bits(12), BitVec(12, 1));
  EXPECT_EQ(src.buffered_bits(), 4U);
  EXPECT_EQ(src.requests_made(), 1U);
  EXPECT_EQ(src.next_bits(4), BitVec(4, 0b1000));
  EXPECT_EQ(svc.calls(), 1);
}

TEST(Qrng, GivesUpAfterMaxRetries) {
  MockService svc([](int, httplib::Response& res) { res.status = 503; });
  QrngSource src({svc.url(), 2000, 3});
  EXPECT_THROW(src.next_bits(8), SourceFailure);
  EXPECT_EQ(src.requests_made(), 3U);
  EXPECT_EQ(svc.calls(), 3);
}

TEST(Qrng, RecoversFromTransientFailure) {
  MockService svc([](int call, httplib::Response& res) {
    if (call == 0) {
      res.status = 503;
    } else if (call == 1) {
      bytes(res, "");
    } else {
      bytes(res, "\x0f");
    }
  });
  QrngSource src({svc.url(), 2000, 3});
  EXPECT_EQ(src.next_bits(8), BitVec(8, 0x0f));
  EXPECT_EQ(src.requests_made(), 3U);
}

TEST(Qrng, Timeout) {
  MockService svc([](int, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    bytes(res, "x");
  });
  QrngSource src({svc.url(), 150, 1});
  const auto start = std::chrono::steady_clock::now();
  EXPECT_THROW(src.next_bits(1), SourceFailure);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(550));
}

TEST(Qrng, UnreachableHost) {
  // Port 9 on localhost (discard) is closed in the sandbox.
  QrngSource src({"http://127.0.0.1:9/random", 500, 2});
  EXPECT_THROW(src.next_bits(4), SourceFailure);
  EXPECT_EQ(src.requests_made(), 2U);
}

TEST(Qrng, RejectsBadConfig) {
  EXPECT_THROW(QrngSource({"https://example.org/x"}), ContractViolation);
  EXPECT_THROW(QrngSource({"ftp://example.org"}), ContractViolation);
  EXPECT_THROW(QrngSource({"http://"}), ContractViolation);
  EXPECT_THROW(QrngSource({"http://h/x", 100, 0}), ContractViolation);
}

}  // namespace
}  // namespace dls
