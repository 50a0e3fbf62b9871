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

#include "dls/tm.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "dls/error.hpp"

namespace dls {

TmProgram::TmProgram(std::uint32_t num_states, std::uint32_t alphabet_size)
    : num_states_(num_states), alphabet_size_(alphabet_size) {
  if (num_states < 1 || num_states > kMaxTmStates) {
    throw ContractViolation("a machine has 1..8 states");
  }
  if (alphabet_size < 1 || alphabet_size > kMaxTmSymbols) {
    throw ContractViolation("a machine has 1..4 symbols");
  }
}

void TmProgram::add(std::uint32_t q, std::uint32_t a, Transition t) {
  if (q >= num_states_ || t.next_state >= num_states_) {
    throw ContractViolation("state code out of range");
  }
  if (a >= alphabet_size_ || t.write >= alphabet_size_) {
    throw ContractViolation("symbol code out of range");
  }
  if (!table_.emplace(std::pair{q, a}, t).second) {
    throw ContractViolation("duplicate transition for (" + std::to_string(q) +
                            "," + std::to_string(a) + ")");
  }
}

std::optional<Transition> TmProgram::lookup(std::uint32_t q,
                                            std::uint32_t a) const {
  auto it = table_.find({q, a});
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t TmConfig::scanned() const {
  auto it = tape.find(head);
  return it == tape.end() ? kBlank : it->second;
}

std::vector<std::uint32_t> tape_window(const TmConfig& c, std::int64_t from,
                                       std::int64_t to) {
  std::vector<std::uint32_t> out;
  for (std::int64_t i = from; i <= to; ++i) {
    auto it = c.tape.find(i);
    out.push_back(it == c.tape.end() ? kBlank : it->second);
  }
  return out;
}

std::optional<TmConfig> step(const TmProgram& p, const TmConfig& c) {
  auto t = p.lookup(c.state, c.scanned());
  if (!t) return std::nullopt;
  TmConfig next = c;
  if (t->write == kBlank) {
    next.tape.erase(c.head);
  } else {
    next.tape[c.head] = t->write;
  }
  next.head += t->move == Move::kRight ? 1 : -1;
  next.state = t->next_state;
  return next;
}

BitVec instruction_bits(const StateId& s) {
  if (s.q >= kMaxTmStates || s.symbol >= kMaxTmSymbols) {
    throw ContractViolation("instruction " + s.to_string() +
                            " does not fit the 5-bit coding");
  }
  return BitVec(5, instruction_code(s.q, s.symbol));
}

EtaComponents eta_components(const TmProgram& p) {
  std::array<std::vector<std::uint8_t>, 6> tables;
  for (auto& t : tables) t.assign(32, 0);
  for (const auto& [key, t] : p.transitions()) {
    const std::uint32_t x = instruction_code(key.first, key.second);
    tables[0][x] = (t.next_state >> 2) & 1U;
    tables[1][x] = (t.next_state >> 1) & 1U;
    tables[2][x] = t.next_state & 1U;
    tables[3][x] = (t.write >> 1) & 1U;
    tables[4][x] = t.write & 1U;
    tables[5][x] = t.move == Move::kRight ? 1 : 0;
  }
  return {BoolFn(5, tables[0]), BoolFn(5, tables[1]), BoolFn(5, tables[2]),
          BoolFn(5, tables[3]), BoolFn(5, tables[4]), BoolFn(5, tables[5])};
}

Transition reassemble(const EtaComponents& eta, std::uint32_t q,
                      std::uint32_t a) {
  const BitVec x = instruction_bits({q, a});
  auto bit = [&](int k) { return static_cast<std::uint32_t>(eval(eta[k], x)); };
  return Transition{(bit(0) << 2) | (bit(1) << 1) | bit(2),
                    (bit(3) << 1) | bit(4),
                    bit(5) ? Move::kRight : Move::kLeft};
}

LevelSet eta3_fixture() { return level_set(eta3_fixture_fn(), true); }

BoolFn eta3_fixture_fn() {
  static constexpr std::array<std::pair<const char*, const char*>, 14> kTuples{{
      {"111", "00"}, {"110", "00"}, {"110", "01"}, {"110", "10"},
      {"101", "00"}, {"101", "01"}, {"101", "10"}, {"100", "00"},
      {"100", "10"}, {"011", "01"}, {"011", "10"}, {"010", "11"},
      {"010", "01"}, {"010", "00"},
  }};
  std::vector<BitVec> members;
  for (const auto& [q, a] : kTuples) {
    members.push_back(BitVec::from_string(std::string(q) + a));
  }
  return BoolFn::from_members(5, members);
}

TraceScheduler instruction_scheduler(const TmProgram& p,
                                     const TmConfig& initial,
                                     std::uint64_t horizon) {
  if (horizon < 1) throw ContractViolation("scheduler horizon must be >= 1");
  std::vector<StateId> seq;
  TmConfig c = initial;
  for (std::uint64_t j = 0; j < horizon; ++j) {
    auto next = step(p, c);
    if (!next) break;
    seq.push_back(c.instruction());
    c = std::move(*next);
  }
  return TraceScheduler(std::move(seq));
}

// --- file format -----------------------------------------------------------

namespace {

class LineReader {
 public:
  LineReader(std::string_view line, std::size_t number)
      : line_(line), number_(number) {}

  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) {
      ++pos_;
    }
  }
  bool done() {
    skip_space();
    return pos_ >= line_.size();
  }
  std::int64_t integer() {
    skip_space();
    std::int64_t v = 0;
    auto [ptr, ec] =
        std::from_chars(line_.data() + pos_, line_.data() + line_.size(), v);
    if (ec != std::errc()) fail("expected an integer");
    pos_ = static_cast<std::size_t>(ptr - line_.data());
    return v;
  }
  void expect(std::string_view tok) {
    skip_space();
    if (line_.substr(pos_, tok.size()) != tok) {
      fail("expected '" + std::string(tok) + "'");
    }
    pos_ += tok.size();
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char word_char() {
    skip_space();
    if (pos_ >= line_.size()) fail("unexpected end of line");
    return line_[pos_++];
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, number_, pos_ + 1);
  }

 private:
  std::string_view line_;
  std::size_t number_;
  std::size_t pos_ = 0;
};

std::uint32_t code(LineReader& r, std::uint32_t limit, const char* what) {
  auto v = r.integer();
  if (v < 0 || static_cast<std::uint64_t>(v) >= limit) {
    r.fail(std::string(what) + " code out of range");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

TmFile parse_tm(std::string_view text) {
  std::optional<std::uint32_t> states, alphabet;
  std::optional<TmProgram> program;
  TmConfig initial;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    LineReader r(raw, number);
    if (r.done()) continue;
    std::string_view line(raw);
    line.remove_prefix(line.find_first_not_of(" \t"));
    if (line.starts_with("states=")) {
      r.expect("states=");
      auto v = r.integer();
      if (v < 1 || v > kMaxTmStates) r.fail("states must be 1..8");
      states = static_cast<std::uint32_t>(v);
    } else if (line.starts_with("alphabet=")) {
      r.expect("alphabet=");
      auto v = r.integer();
      if (v < 1 || v > kMaxTmSymbols) r.fail("alphabet must be 1..4");
      alphabet = static_cast<std::uint32_t>(v);
    } else if (line.starts_with("tape=")) {
      if (!alphabet) r.fail("tape= must follow alphabet=");
      r.expect("tape=");
      initial.tape.clear();
      std::int64_t pos = 0;
      if (!r.accept('@')) {
        do {
          auto sym = code(r, *alphabet, "symbol");
          if (sym != kBlank) initial.tape[pos] = sym;
          ++pos;
        } while (r.accept(','));
        r.expect("@");
      }
      initial.head = r.integer();
    } else {
      if (!states || !alphabet) {
        r.fail("transitions must follow states= and alphabet=");
      }
      if (!program) program.emplace(*states, *alphabet);
      auto q = code(r, *states, "state");
      auto a = code(r, *alphabet, "symbol");
      r.expect("->");
      auto q2 = code(r, *states, "state");
      auto a2 = code(r, *alphabet, "symbol");
      char m = r.word_char();
      if (m != 'L' && m != 'R') r.fail("move must be L or R");
      try {
        program->add(q, a, {q2, a2, m == 'R' ? Move::kRight : Move::kLeft});
      } catch (const ContractViolation& e) {
        r.fail(e.what());
      }
    }
    if (!r.done()) r.fail("trailing characters");
  }
  if (!states || !alphabet) throw ParseError("missing states= or alphabet=", 0, 0);
  if (!program) program.emplace(*states, *alphabet);
  return TmFile{std::move(*program), std::move(initial)};
}

TmFile load_tm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open machine file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tm(ss.str());
}

std::string format_tm(const TmProgram& p, const TmConfig& initial) {
  std::ostringstream os;
  os << "states=" << p.num_states() << "\nalphabet=" << p.alphabet_size()
     << '\n';
  for (const auto& [key, t] : p.transitions()) {
    os << key.first << ' ' << key.second << " -> " << t.next_state << ' '
       << t.write << ' ' << (t.move == Move::kRight ? 'R' : 'L') << '\n';
  }
  // The file format starts cells at 0; shift the whole configuration.
  std::int64_t lo = initial.head;
  std::int64_t hi = initial.head;
  if (!initial.tape.empty()) {
    lo = std::min(lo, initial.tape.begin()->first);
    hi = std::max(hi, initial.tape.rbegin()->first);
  }
  os << "tape=";
  auto cells = tape_window(initial, lo, hi);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    os << (i ? "," : "") << cells[i];
  }
  os << '@' << (initial.head - lo) << '\n';
  return os.str();
}

}  // namespace dls
