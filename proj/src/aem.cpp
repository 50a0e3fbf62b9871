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

#include "dls/aem.hpp"

#include <algorithm>

#include "dls/error.hpp"
#include "json.hpp"

namespace dls::aem {

Machine::Machine(RandomBits random) : random_(std::move(random)) {}

std::size_t Machine::index_of(std::string_view name) const {
  auto it = names_.find(std::string(name));
  if (it == names_.end()) {
    throw ContractViolation("unknown element '" + std::string(name) + "'");
  }
  return it->second;
}

const Element* Machine::element(std::string_view name) const {
  auto it = names_.find(std::string(name));
  return it == names_.end() ? nullptr : &elements_[it->second].spec;
}

std::optional<Connection> Machine::connection(std::string_view from,
                                              std::string_view to) const {
  auto fi = names_.find(std::string(from));
  auto ti = names_.find(std::string(to));
  if (fi == names_.end() || ti == names_.end()) return std::nullopt;
  for (const auto& in : elements_[ti->second].incoming) {
    if (in.from == fi->second) {
      return Connection{std::string(from), std::string(to), in.amplitude,
                        in.delay};
    }
  }
  return std::nullopt;
}

void Machine::put_element(const Element& e) {
  if (e.refractory < 0) throw ContractViolation("refractory must be >= 0");
  auto it = names_.find(e.name);
  if (it != names_.end()) {
    elements_[it->second].spec = e;
    return;
  }
  names_.emplace(e.name, elements_.size());
  elements_.push_back(Slot{e, {}, {}});
}

void Machine::put_connection(const Connection& c) {
  if (c.delay < 1) throw ContractViolation("connection delay must be >= 1");
  const std::size_t from = index_of(c.from);
  auto& incoming = elements_[index_of(c.to)].incoming;
  for (auto& in : incoming) {
    if (in.from == from) {
      in.amplitude = c.amplitude;
      in.delay = c.delay;
      return;
    }
  }
  incoming.push_back({from, c.amplitude, c.delay});
}

void Machine::drop_connection(std::string_view from, std::string_view to) {
  const std::size_t f = index_of(from);
  auto& incoming = elements_[index_of(to)].incoming;
  std::erase_if(incoming, [f](const Incoming& in) { return in.from == f; });
}

void Machine::apply_payload(const PayloadCmd& cmd) {
  std::visit(
      [this](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ElementCmd>) {
          put_element(c.element);
        } else if constexpr (std::is_same_v<T, ConnectionCmd>) {
          put_connection(c.connection);
        } else {
          drop_connection(c.from, c.to);
        }
      },
      cmd);
}

void Machine::apply(const Command& cmd) {
  std::visit(
      [this](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ElementCmd>) {
          put_element(c.element);
        } else if constexpr (std::is_same_v<T, ConnectionCmd>) {
          put_connection(c.connection);
        } else if constexpr (std::is_same_v<T, DeleteConnectionCmd>) {
          drop_connection(c.from, c.to);
        } else if constexpr (std::is_same_v<T, FireCmd>) {
          if (c.tick < 0) throw ContractViolation("fire tick must be >= 0");
          forced_[now_ + c.tick].push_back(index_of(c.element));
        } else {
          const bool want_elements = c.kind == MetaKind::kSetDynamicE;
          for (const auto& p : c.payload) {
            if (std::holds_alternative<ElementCmd>(p) != want_elements) {
              throw ContractViolation(
                  "set_dynamic_C payloads rewrite connections and "
                  "set_dynamic_E payloads rewrite elements");
            }
          }
          const std::size_t trigger = index_of(c.trigger);
          auto it = std::find_if(metas_.begin(), metas_.end(), [&](const Meta& m) {
            return m.kind == c.kind && m.trigger == trigger;
          });
          if (c.payload.empty()) {
            if (it != metas_.end()) metas_.erase(it);
          } else if (it != metas_.end()) {
            it->payload = c.payload;
          } else {
            metas_.push_back(Meta{c.kind, trigger, c.payload});
          }
        }
      },
      cmd);
}

void Machine::apply(std::span<const Command> cmds) {
  for (const auto& c : cmds) apply(c);
}

bool Machine::fired_at(std::size_t idx, Tick t) const {
  const auto& ticks = elements_[idx].fire_ticks;
  return std::binary_search(ticks.begin(), ticks.end(), t);
}

bool Machine::fired_at(std::string_view name, Tick t) const {
  auto it = names_.find(std::string(name));
  return it != names_.end() && fired_at(it->second, t);
}

TickRecord Machine::tick() {
  std::vector<char> fire(elements_.size(), 0);
  if (auto it = forced_.find(now_); it != forced_.end()) {
    for (auto idx : it->second) fire[idx] = 1;
    forced_.erase(it);
  }
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (fire[i]) continue;
    const Slot& slot = elements_[i];
    if (slot.spec.kind == ElementKind::kRandom) {
      fire[i] = random_ && random_(slot.spec.name, now_);
      continue;
    }
    if (slot.spec.refractory > 0 && !slot.fire_ticks.empty() &&
        slot.fire_ticks.back() >= now_ - slot.spec.refractory) {
      continue;
    }
    long sum = 0;
    for (const auto& in : slot.incoming) {
      if (fired_at(in.from, now_ - in.delay)) sum += in.amplitude;
    }
    fire[i] = sum >= slot.spec.threshold;
  }

  TickRecord record{now_, {}};
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (!fire[i]) continue;
    elements_[i].fire_ticks.push_back(now_);
    record.fired.push_back(elements_[i].spec.name);
  }
  // Payloads may append elements; iterate by index over a stable count.
  const std::size_t metas = metas_.size();
  for (std::size_t m = 0; m < metas; ++m) {
    if (!fire[metas_[m].trigger]) continue;
    const auto payload = metas_[m].payload;
    for (const auto& p : payload) apply_payload(p);
  }
  ++now_;
  return record;
}

FiringTrace Machine::run(Tick ticks) {
  FiringTrace out;
  for (Tick i = 0; i < ticks; ++i) out.push_back(tick());
  return out;
}

std::string to_jsonl(std::span<const TickRecord> trace) {
  std::string out;
  for (const auto& rec : trace) {
    nlohmann::ordered_json j;
    j["tick"] = rec.tick;
    j["fired"] = rec.fired;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace dls::aem
