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

// Turing machines with at most 8 states and 4 symbols, their six boolean
// component functions, and the execution-trace scheduler.
//
// An instruction (q, a) is coded as the 5-bit vector with q at coordinates
// 4..2 and a at coordinates 1..0, i.e. the integer (q << 2) | a. The output
// of the transition is split over eta_0..eta_5:
//   eta_0..eta_2  next state, bits 2..0
//   eta_3..eta_4  written symbol, bits 1..0
//   eta_5         move (Right = 1)
// Instructions without a transition map to all-zero outputs.

#ifndef DLS_TM_HPP_
#define DLS_TM_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "dls/bitcore.hpp"
#include "dls/scheduler.hpp"

namespace dls {

enum class Move { kLeft, kRight };

struct Transition {
  std::uint32_t next_state = 0;
  std::uint32_t write = 0;
  Move move = Move::kLeft;

  friend bool operator==(const Transition&, const Transition&) = default;
};

inline constexpr std::uint32_t kMaxTmStates = 8;
inline constexpr std::uint32_t kMaxTmSymbols = 4;
inline constexpr std::uint32_t kBlank = 0;

class TmProgram {
 public:
  TmProgram(std::uint32_t num_states, std::uint32_t alphabet_size);

  // Throws ContractViolation for out-of-range codes or a second transition
  // for the same (q, a).
  void add(std::uint32_t q, std::uint32_t a, Transition t);
  std::optional<Transition> lookup(std::uint32_t q, std::uint32_t a) const;

  std::uint32_t num_states() const noexcept { return num_states_; }
  std::uint32_t alphabet_size() const noexcept { return alphabet_size_; }
  const std::map<std::pair<std::uint32_t, std::uint32_t>, Transition>&
  transitions() const noexcept {
    return table_;
  }

 private:
  std::uint32_t num_states_;
  std::uint32_t alphabet_size_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Transition> table_;
};

// Sparse tape: only non-blank cells are stored.
struct TmConfig {
  std::map<std::int64_t, std::uint32_t> tape;
  std::int64_t head = 0;
  std::uint32_t state = 0;

  std::uint32_t scanned() const;
  StateId instruction() const { return {state, scanned()}; }

  friend bool operator==(const TmConfig&, const TmConfig&) = default;
};

// Cells from..to inclusive (blanks included), for tests and display.
std::vector<std::uint32_t> tape_window(const TmConfig& c, std::int64_t from,
                                       std::int64_t to);

// nullopt means the machine halted: no transition for (state, scanned).
std::optional<TmConfig> step(const TmProgram& p, const TmConfig& c);

using EtaComponents = std::array<BoolFn, 6>;

inline constexpr std::uint32_t instruction_code(std::uint32_t q,
                                                std::uint32_t a) {
  return (q << 2) | a;
}
BitVec instruction_bits(const StateId& s);

EtaComponents eta_components(const TmProgram& p);
// Reads the six component values at (q, a) back into a transition.
Transition reassemble(const EtaComponents& eta, std::uint32_t q,
                      std::uint32_t a);

// The 14-member level set eta_3^{-1}{1} of the Minsky UTM program.
LevelSet eta3_fixture();
BoolFn eta3_fixture_fn();

// The (state, scanned symbol) sequence of a run. If the machine halts after
// t < horizon steps the scheduler's horizon is t.
TraceScheduler instruction_scheduler(const TmProgram& p,
                                     const TmConfig& initial,
                                     std::uint64_t horizon);

// Line-oriented machine file:
//   states=<k>
//   alphabet=<k>
//   <q> <a> -> <q'> <a'> L|R
//   tape=<c0,c1,...>@<head>      (optional; cells start at position 0)
// '#' starts a comment.
struct TmFile {
  TmProgram program;
  TmConfig initial;
};

TmFile parse_tm(std::string_view text);
TmFile load_tm(const std::filesystem::path& path);
std::string format_tm(const TmProgram& p, const TmConfig& initial);

}  // namespace dls

#endif  // DLS_TM_HPP_
