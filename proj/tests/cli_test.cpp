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

#include "dls/cli.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gtest/gtest.h"

namespace dls::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dlsctl_" + std::string(::testing::UnitTest::GetInstance()
                                        ->current_test_info()
                                        ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int cli(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }
  fs::path path(const std::string& name) const { return dir_ / name; }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  static std::string machine(const char* name) {
    return (fs::path(DLS_DATA_DIR) / "machines" / name).string();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, RunUtmIsDeterministic) {
  const auto counter = machine("counter.tm");
  ASSERT_EQ(cli({"run-utm", "--tm", counter, "--rng", "seeded:7", "--out",
                 path("a").string()}),
            kPass)
      << err_.str();
  ASSERT_EQ(cli({"run-utm", "--tm", counter, "--rng", "seeded:7", "--out",
                 path("b").string()}),
            kPass);
  ASSERT_EQ(cli({"run-utm", "--tm", counter, "--rng", "seeded:8", "--out",
                 path("c").string()}),
            kPass);
  const auto a = slurp(path("a") / "trace.jsonl");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(path("b") / "trace.jsonl"));
  EXPECT_NE(a, slurp(path("c") / "trace.jsonl"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 3000);
  EXPECT_NE(slurp(path("a") / "report.txt").find("pass=true"), std::string::npos);
  const auto manifest = slurp(path("a") / "manifest.json");
  EXPECT_NE(manifest.find("\"seed\": 7"), std::string::npos);
  EXPECT_NE(manifest.find("\"version\": \"1.0.0\""), std::string::npos);
}

TEST_F(CliTest, RunUtmDerivedEtaAndHalting) {
  EXPECT_EQ(cli({"run-utm", "--tm", machine("inc.tm"), "--rng", "seeded:1", "--eta",
                 "derived", "--steps", "50", "--out", path("x").string()}),
            kPass);
  EXPECT_NE(out_.str().find("effective_steps=3"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({"run-utm", "--tm", path("missing.tm").string(), "--rng", "seeded:1",
                 "--out", path("o").string()}),
            kUsage);
  EXPECT_EQ(cli({"run-utm", "--rng", "seeded:1"}), kUsage);
  EXPECT_EQ(cli({"run-utm", "--tm", machine("inc.tm"), "--rng", "dice"}), kUsage);
  EXPECT_EQ(cli({"run-utm", "--tm", machine("inc.tm"), "--rng", "seeded:1", "--dls",
                 "nonsense", "--out", path("o").string()}),
            kUsage);
  EXPECT_EQ(cli({"bogus"}), kUsage);
  EXPECT_EQ(cli({}), kUsage);
  EXPECT_FALSE(fs::exists(path("o")) && !fs::is_empty(path("o")));
}

TEST_F(CliTest, VerifySecrecyExitCodes) {
  EXPECT_EQ(cli({"verify-secrecy", "--dls", "xorfam", "--width", "8", "--states", "12"}),
            kPass);
  EXPECT_NE(out_.str().find("max_tv=0/1 pass=true"), std::string::npos);
  EXPECT_EQ(cli({"verify-secrecy", "--dls", "swap", "--width", "3"}), kViolation);
  EXPECT_EQ(cli({"verify-secrecy", "--width", "21"}), kUsage);
  EXPECT_EQ(cli({"verify-secrecy", "--width", "12", "--states", "2", "--sample", "50000",
                 "--rng", "seeded:3", "--out", path("s").string()}),
            kPass)
      << err_.str();
  EXPECT_TRUE(fs::exists(path("s") / "secrecy.txt"));
  EXPECT_TRUE(fs::exists(path("s") / "manifest.json"));
}

void write_random(const fs::path& p, std::size_t bytes, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::string data(bytes, '\0');
  for (auto& c : data) c = static_cast<char>(gen() & 0xffU);
  std::ofstream(p, std::ios::binary) << data;
}

TEST_F(CliTest, StreamRoundTripOneMebibyte) {
  write_random(path("in.bin"), 1 << 20, 5);
  for (const char* n : {"8", "16"}) {
    ASSERT_EQ(cli({"stream", "transform", "--in", path("in.bin").string(), "--out",
                   path("g.bin").string(), "--n", n, "--m", "6", "--dls", "affine:4"}),
              kPass)
        << err_.str();
    const auto g = slurp(path("g.bin"));
    EXPECT_TRUE(g.starts_with(std::string("n=") + n + " m=6 sched=periodic:6\n"));
    EXPECT_NE(g.substr(g.find('\n') + 1), slurp(path("in.bin")));
    ASSERT_EQ(cli({"stream", "recover", "--in", path("g.bin").string(), "--out",
                   path("r.bin").string(), "--dls", "affine:4"}),
              kPass)
        << err_.str();
    EXPECT_EQ(slurp(path("r.bin")), slurp(path("in.bin")));
  }
}

TEST_F(CliTest, StreamIdentityAndTraceScheduler) {
  write_random(path("in.bin"), 1500, 6);
  ASSERT_EQ(cli({"stream", "transform", "--in", path("in.bin").string(), "--out",
                 path("g.bin").string(), "--n", "8", "--dls", "identity"}),
            kPass);
  const auto g = slurp(path("g.bin"));
  EXPECT_EQ(g.substr(g.find('\n') + 1), slurp(path("in.bin")));

  // 1500 bytes = 800 blocks of 15 bits.
  const std::string sched = "trace:" + machine("counter.tm");
  ASSERT_EQ(cli({"stream", "transform", "--in", path("in.bin").string(), "--out",
                 path("t.bin").string(), "--n", "15", "--sched", sched}),
            kPass)
      << err_.str();
  ASSERT_EQ(cli({"stream", "recover", "--in", path("t.bin").string(), "--out",
                 path("r.bin").string()}),
            kPass)
      << err_.str();
  EXPECT_EQ(slurp(path("r.bin")), slurp(path("in.bin")));
}

TEST_F(CliTest, StreamRejectsTruncatedInput) {
  write_random(path("in.bin"), 64, 7);
  ASSERT_EQ(cli({"stream", "transform", "--in", path("in.bin").string(), "--out",
                 path("g.bin").string(), "--n", "16"}),
            kPass);
  auto g = slurp(path("g.bin"));
  g.pop_back();
  std::ofstream(path("cut.bin"), std::ios::binary) << g;
  EXPECT_EQ(cli({"stream", "recover", "--in", path("cut.bin").string(), "--out",
                 path("r.bin").string()}),
            kUsage);
  EXPECT_NE(err_.str().find("not a multiple"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("r.bin")));
  std::ofstream(path("nohdr.bin"), std::ios::binary) << "abc";
  EXPECT_EQ(cli({"stream", "recover", "--in", path("nohdr.bin").string(), "--out",
                 path("r.bin").string()}),
            kUsage);
  EXPECT_EQ(cli({"stream", "transform", "--in", path("in.bin").string(), "--out",
                 path("g2.bin").string(), "--m", "4", "--sched", "periodic:5"}),
            kUsage);
}

TEST_F(CliTest, ReplayReproducesTrace) {
  ASSERT_EQ(cli({"run-utm", "--tm", machine("counter.tm"), "--rng", "seeded:11",
                 "--steps", "200", "--dls", "affine:3", "--out", path("a").string()}),
            kPass);
  ASSERT_EQ(cli({"replay", "--manifest", (path("a") / "manifest.json").string(),
                 "--out", path("b").string()}),
            kPass)
      << err_.str();
  EXPECT_EQ(slurp(path("a") / "trace.jsonl"), slurp(path("b") / "trace.jsonl"));
  EXPECT_EQ(slurp(path("a") / "manifest.json"), slurp(path("b") / "manifest.json"));
  std::ofstream(path("bad.json")) << "{not json";
  EXPECT_EQ(cli({"replay", "--manifest", path("bad.json").string(), "--out",
                 path("c").string()}),
            kUsage);
}

TEST_F(CliTest, SourceFailureLeavesNoArtifacts) {
  EXPECT_EQ(cli({"run-utm", "--tm", machine("counter.tm"), "--rng",
                 "qrng:http://127.0.0.1:9/none", "--qrng-timeout-ms", "300",
                 "--qrng-retries", "2", "--out", path("q").string()}),
            kSourceFailure);
  EXPECT_NE(err_.str().find("random source failure"), std::string::npos);
  EXPECT_TRUE(!fs::exists(path("q")) || fs::is_empty(path("q")));
}

TEST(ArtifactSet, PublishesAllFilesAndNoTemporaries) {
  const auto dir = fs::temp_directory_path() / "dlsctl_artifacts";
  fs::remove_all(dir);
  ArtifactSet set;
  set.add("one.txt", "1");
  set.add("two.txt", "22");
  const auto paths = set.commit(dir);
  EXPECT_EQ(paths.size(), 2U);
  std::size_t entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    EXPECT_FALSE(e.path().filename().string().starts_with("."));
    ++entries;
  }
  EXPECT_EQ(entries, 2U);
  EXPECT_EQ(fs::file_size(dir / "two.txt"), 2U);
  fs::remove_all(dir);
}

TEST(Specs, SourcesAndFamilies) {
  EXPECT_EQ(make_source("seeded:42")->descriptor(), "seeded:42");
  EXPECT_EQ(make_source("os")->descriptor(), "os");
  EXPECT_THROW(make_source("seeded:x"), std::exception);
  const auto states = instruction_states(4);
  EXPECT_EQ(make_family("xorfam:3", 6, states).size(), 4U);
  const auto f1 = make_family("xorfam:3", 6, states);
  const auto f2 = make_family("xorfam:3", 6, states);
  for (const auto& s : states) EXPECT_TRUE(equivalent(f1.at(s), f2.at(s)));
  EXPECT_THROW(make_family("file:/nonexistent", 6, states), std::exception);
}

}  // namespace
}  // namespace dls::cli
