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

// A minimal Active Element Machine.
//
// Time is discrete. Element e fires at tick t when
//   - a FireCmd scheduled it for t, or
//   - e is a Random element and the bound random-bit schedule says so, or
//   - e is not Random, is not refractory, and the amplitudes of the
//     connections (u -> e, delay d) whose source u fired at t - d sum to at
//     least threshold(e).
// An element is refractory at t if it fired in the `refractory` ticks
// before t. Connections are the ones in effect at t.
//
// Meta commands rewrite the machine's own rules. When the trigger of a
// registered meta command fires at t, its payload is applied after tick t
// is evaluated, so it takes effect at t + 1 and never alters the recorded
// past. set_dynamic_C (MC) payloads rewrite connections, set_dynamic_E (ME)
// payloads rewrite elements. Registering a meta command with the same kind
// and trigger as an existing one replaces it; an empty payload disables it.
//
// Text syntax, one command per line, '#' comments:
//   E <name> <threshold> <refractory> <random|computing|plain>
//   C <from> <to> <amplitude> <delay>     create or replace
//   D <from> <to>                         delete a connection
//   F <name> <tick>                       fire <tick> ticks after loading
//   MC <trigger> { <C|D lines> }
//   ME <trigger> { <E lines> }
// Meta blocks may span lines.

#ifndef DLS_AEM_HPP_
#define DLS_AEM_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace dls::aem {

using Tick = std::int64_t;

enum class ElementKind { kRandom, kComputing, kPlain };

struct Element {
  std::string name;
  int threshold = 1;
  int refractory = 0;
  ElementKind kind = ElementKind::kPlain;

  friend bool operator==(const Element&, const Element&) = default;
};

struct Connection {
  std::string from;
  std::string to;
  int amplitude = 1;
  int delay = 1;

  friend bool operator==(const Connection&, const Connection&) = default;
};

struct ElementCmd {
  Element element;
  friend bool operator==(const ElementCmd&, const ElementCmd&) = default;
};

struct ConnectionCmd {
  Connection connection;
  friend bool operator==(const ConnectionCmd&, const ConnectionCmd&) = default;
};

struct DeleteConnectionCmd {
  std::string from;
  std::string to;
  friend bool operator==(const DeleteConnectionCmd&,
                         const DeleteConnectionCmd&) = default;
};

struct FireCmd {
  std::string element;
  Tick tick = 0;
  friend bool operator==(const FireCmd&, const FireCmd&) = default;
};

enum class MetaKind { kSetDynamicC, kSetDynamicE };

using PayloadCmd = std::variant<ElementCmd, ConnectionCmd, DeleteConnectionCmd>;

struct MetaCmd {
  MetaKind kind = MetaKind::kSetDynamicC;
  std::string trigger;
  std::vector<PayloadCmd> payload;
  friend bool operator==(const MetaCmd&, const MetaCmd&) = default;
};

using Command = std::variant<ElementCmd, ConnectionCmd, DeleteConnectionCmd,
                             FireCmd, MetaCmd>;

struct AemProgram {
  std::vector<Command> commands;
  friend bool operator==(const AemProgram&, const AemProgram&) = default;
};

// Throws ParseError with line/column on syntax errors, duplicate top-level
// element names, payloads of the wrong kind, or names that no E command in
// the program declares.
AemProgram parse(std::string_view text);
std::string print(std::span<const Command> commands);
inline std::string print(const AemProgram& p) { return print(p.commands); }

struct TickRecord {
  Tick tick = 0;
  std::vector<std::string> fired;  // element creation order

  friend bool operator==(const TickRecord&, const TickRecord&) = default;
};

using FiringTrace = std::vector<TickRecord>;

// One {"tick":t,"fired":[...]} object per line.
std::string to_jsonl(std::span<const TickRecord> trace);

// Decides whether Random element `name` fires at `tick`.
using RandomBits = std::function<bool(const std::string& name, Tick tick)>;

class Machine {
 public:
  explicit Machine(RandomBits random = {});

  // Applies commands at the current tick. Element and connection commands
  // take effect immediately (before now() is evaluated); FireCmd ticks are
  // relative to now(). Throws ContractViolation for unknown names and for
  // payloads that do not match the meta kind.
  void apply(const Command& cmd);
  void apply(std::span<const Command> cmds);
  void load(const AemProgram& p) { apply(p.commands); }

  // Evaluates tick now() and advances the clock.
  TickRecord tick();
  FiringTrace run(Tick ticks);

  Tick now() const noexcept { return now_; }
  bool fired_at(std::string_view name, Tick t) const;
  const Element* element(std::string_view name) const;
  std::optional<Connection> connection(std::string_view from,
                                       std::string_view to) const;
  std::size_t element_count() const noexcept { return elements_.size(); }
  std::size_t meta_count() const noexcept { return metas_.size(); }

 private:
  struct Incoming {
    std::size_t from;
    int amplitude;
    int delay;
  };
  struct Slot {
    Element spec;
    std::vector<Incoming> incoming;
    std::vector<Tick> fire_ticks;  // ascending
  };
  struct Meta {
    MetaKind kind;
    std::size_t trigger;
    std::vector<PayloadCmd> payload;
  };

  std::size_t index_of(std::string_view name) const;
  bool fired_at(std::size_t idx, Tick t) const;
  void apply_payload(const PayloadCmd& cmd);
  void put_element(const Element& e);
  void put_connection(const Connection& c);
  void drop_connection(std::string_view from, std::string_view to);

  RandomBits random_;
  std::vector<Slot> elements_;
  std::unordered_map<std::string, std::size_t> names_;
  std::vector<Meta> metas_;
  std::map<Tick, std::vector<std::size_t>> forced_;
  Tick now_ = 0;
};

}  // namespace dls::aem

#endif  // DLS_AEM_HPP_
