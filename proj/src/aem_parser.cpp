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

#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include "dls/aem.hpp"
#include "dls/error.hpp"

namespace dls::aem {

namespace {

struct Token {
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&]() {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance();
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
    } else if (c == '{' || c == '}') {
      out.push_back({std::string(1, c), line, col});
      advance();
    } else {
      Token t{"", line, col};
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != '{' && text[i] != '}' && text[i] != '#') {
        t.text += text[i];
        advance();
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

bool is_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

// A name reference, kept for the link check.
struct Ref {
  std::string name;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  AemProgram program() {
    AemProgram p;
    while (!at_end()) {
      const Token& kw = peek();
      if (kw.text == "MC" || kw.text == "ME") {
        p.commands.emplace_back(meta());
      } else if (kw.text == "F") {
        next();
        FireCmd f;
        f.element = name();
        f.tick = integer();
        if (f.tick < 0) fail(previous(), "fire tick must be >= 0");
        p.commands.emplace_back(std::move(f));
      } else {
        auto cmd = payload_command(/*top_level=*/true);
        std::visit([&](auto&& c) { p.commands.emplace_back(std::move(c)); },
                   std::move(cmd));
      }
    }
    link();
    return p;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token& peek() const { return tokens_[pos_]; }
  const Token& previous() const { return tokens_[pos_ - 1]; }
  const Token& next() {
    if (at_end()) {
      const Token* last = tokens_.empty() ? nullptr : &tokens_.back();
      throw ParseError("unexpected end of input", last ? last->line : 1,
                       last ? last->column + last->text.size() : 1);
    }
    return tokens_[pos_++];
  }
  [[noreturn]] void fail(const Token& t, const std::string& what) const {
    throw ParseError(what, t.line, t.column);
  }

  std::string name() {
    const Token& t = next();
    if (!is_name(t.text)) fail(t, "expected an element name, got '" + t.text + "'");
    refs_.push_back({t.text, t.line, t.column});
    return t.text;
  }

  long long integer() {
    const Token& t = next();
    long long v = 0;
    auto [ptr, ec] =
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      fail(t, "expected an integer, got '" + t.text + "'");
    }
    return v;
  }

  int small_int() {
    auto v = integer();
    if (v < INT32_MIN || v > INT32_MAX) fail(previous(), "integer out of range");
    return static_cast<int>(v);
  }

  PayloadCmd payload_command(bool top_level) {
    const Token& kw = next();
    if (kw.text == "E") {
      const Token& nt = peek();
      Element e;
      e.name = name();
      refs_.pop_back();  // a declaration, not a reference
      e.threshold = small_int();
      e.refractory = small_int();
      if (e.refractory < 0) fail(previous(), "refractory must be >= 0");
      const Token& kind = next();
      if (kind.text == "random") {
        e.kind = ElementKind::kRandom;
      } else if (kind.text == "computing") {
        e.kind = ElementKind::kComputing;
      } else if (kind.text == "plain") {
        e.kind = ElementKind::kPlain;
      } else {
        fail(kind, "element kind must be random, computing or plain");
      }
      if (top_level && !top_level_names_.insert(e.name).second) {
        fail(nt, "duplicate element name '" + e.name + "'");
      }
      declared_.insert(e.name);
      return ElementCmd{std::move(e)};
    }
    if (kw.text == "C") {
      Connection c;
      c.from = name();
      c.to = name();
      c.amplitude = small_int();
      c.delay = small_int();
      if (c.delay < 1) fail(previous(), "connection delay must be >= 1");
      return ConnectionCmd{std::move(c)};
    }
    if (kw.text == "D") {
      DeleteConnectionCmd d;
      d.from = name();
      d.to = name();
      return d;
    }
    fail(kw, "unknown command '" + kw.text + "'");
  }

  MetaCmd meta() {
    const Token& kw = next();
    MetaCmd m;
    m.kind = kw.text == "MC" ? MetaKind::kSetDynamicC : MetaKind::kSetDynamicE;
    m.trigger = name();
    const Token& open = next();
    if (open.text != "{") fail(open, "expected '{'");
    while (true) {
      if (at_end()) fail(open, "unterminated meta block");
      if (peek().text == "}") {
        next();
        break;
      }
      const Token& start = peek();
      if (start.text == "MC" || start.text == "ME" || start.text == "F") {
        fail(start, "meta payloads hold only E, C and D commands");
      }
      auto cmd = payload_command(/*top_level=*/false);
      const bool is_elem = std::holds_alternative<ElementCmd>(cmd);
      if (is_elem != (m.kind == MetaKind::kSetDynamicE)) {
        fail(start, m.kind == MetaKind::kSetDynamicE
                        ? "ME payloads hold only E commands"
                        : "MC payloads hold only C and D commands");
      }
      m.payload.push_back(std::move(cmd));
    }
    return m;
  }

  void link() const {
    for (const auto& r : refs_) {
      if (!declared_.count(r.name)) {
        throw ParseError("dangling reference to undeclared element '" +
                             r.name + "'",
                         r.line, r.column);
      }
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::set<std::string> top_level_names_;
  std::set<std::string> declared_;
  std::vector<Ref> refs_;
};

const char* kind_word(ElementKind k) {
  switch (k) {
    case ElementKind::kRandom:
      return "random";
    case ElementKind::kComputing:
      return "computing";
    default:
      return "plain";
  }
}

void print_payload(std::ostream& os, const PayloadCmd& cmd) {
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ElementCmd>) {
          os << "E " << c.element.name << ' ' << c.element.threshold << ' '
             << c.element.refractory << ' ' << kind_word(c.element.kind);
        } else if constexpr (std::is_same_v<T, ConnectionCmd>) {
          os << "C " << c.connection.from << ' ' << c.connection.to << ' '
             << c.connection.amplitude << ' ' << c.connection.delay;
        } else {
          os << "D " << c.from << ' ' << c.to;
        }
      },
      cmd);
}

}  // namespace

AemProgram parse(std::string_view text) {
  return Parser(tokenize(text)).program();
}

std::string print(std::span<const Command> commands) {
  std::ostringstream os;
  for (const auto& cmd : commands) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, FireCmd>) {
            os << "F " << c.element << ' ' << c.tick;
          } else if constexpr (std::is_same_v<T, MetaCmd>) {
            os << (c.kind == MetaKind::kSetDynamicC ? "MC " : "ME ")
               << c.trigger << " {";
            for (const auto& p : c.payload) {
              os << ' ';
              print_payload(os, p);
            }
            os << " }";
          } else {
            print_payload(os, PayloadCmd{c});
          }
        },
        cmd);
    os << '\n';
  }
  return os.str();
}

}  // namespace dls::aem
