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

// dlsctl: command-line front end.
//
//   dlsctl run-utm --tm <file> [--dls <spec>] [--steps <k>] --rng <spec>
//                  [--out <dir>] [--eta fixture|derived]
//   dlsctl verify-secrecy [--dls <spec>] [--width <n>] [--states <k>]
//                  [--sample <count> --rng <spec>] [--out <dir>]
//   dlsctl stream transform|recover --in <file> --out <file> [--dls <spec>]
//                  [--n <n>] [--m <m>] [--sched periodic:<p>|trace:<file>]
//   dlsctl replay --manifest <file> --out <dir>
//
// Family specs: xorfam[:<seed>], affine:<seed>, file:<path>, swap[:<seed>],
// identity. Random source specs: seeded:<u64>, os, qrng[:<url>] (the URL
// defaults to $DLS_QRNG_URL).
//
// Exit codes: 0 pass, 1 property violation, 2 usage or I/O error,
// 3 random source failure.

#ifndef DLS_CLI_HPP_
#define DLS_CLI_HPP_

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dls/engine.hpp"
#include "dls/qrng.hpp"
#include "dls/random_source.hpp"

namespace dls::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
  kPass = 0,
  kViolation = 1,
  kUsage = 2,
  kSourceFailure = 3,
};

// Throws ContractViolation for malformed specs.
std::unique_ptr<RandomSource> make_source(const std::string& spec,
                                          int qrng_timeout_ms = 5000,
                                          int qrng_retries = 3);
Family make_family(const std::string& spec, int width,
                   std::span<const StateId> states);

// Files staged in memory and published together: each is written to a
// temporary name in the target directory and renamed once all writes have
// succeeded. Nothing is left behind on failure.
class ArtifactSet {
 public:
  void add(std::string name, std::string content);
  // Returns the final paths.
  std::vector<std::filesystem::path> commit(
      const std::filesystem::path& dir) const;

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

// Entry point; `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out,
        std::ostream& err);
int run(int argc, char** argv);

}  // namespace dls::cli

#endif  // DLS_CLI_HPP_
