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

#include "dls/map_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "dls/error.hpp"

namespace dls {

namespace {

std::string hex(std::uint32_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

struct Line {
  std::size_t number;
  std::string text;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back({n, line});
  }
  return out;
}

std::uint32_t parse_hex(std::string_view tok, std::size_t line) {
  if (tok.starts_with("0x") || tok.starts_with("0X")) tok.remove_prefix(2);
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, 16);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw ParseError("bad hex value '" + std::string(tok) + "'", line, 1);
  }
  return v;
}

// Splits "key=value" tokens.
std::string_view value_of(std::string_view tok, std::string_view key,
                          std::size_t line) {
  if (!tok.starts_with(key) || tok.size() <= key.size() ||
      tok[key.size()] != '=') {
    throw ParseError("expected " + std::string(key) + "=...", line, 1);
  }
  return tok.substr(key.size() + 1);
}

}  // namespace

std::string format_map(const InvertibleMap& map) {
  std::ostringstream os;
  const int w = map.width();
  std::visit(
      [&](const auto& rep) {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, PermTableRep>) {
          os << "width=" << w << " kind=perm\n";
          for (std::uint32_t x = 0; x < rep.image.size(); ++x) {
            os << hex(x) << ' ' << hex(rep.image[x]) << '\n';
          }
        } else if constexpr (std::is_same_v<T, AffineRep>) {
          os << "width=" << w << " kind=affine\n";
          for (auto r : rep.rows) os << hex(r) << '\n';
          os << hex(rep.offset) << '\n';
        } else {
          os << "width=" << w << " kind=xorfam\n";
          os << "mask0=" << hex(rep.mask0) << " mask1=" << hex(rep.mask1)
             << " flip=" << (rep.flip ? 1 : 0) << '\n';
        }
      },
      map.representation());
  return os.str();
}

InvertibleMap parse_map(std::string_view text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("empty map file", 0, 0);

  std::istringstream header(lines[0].text);
  std::string wtok, ktok;
  header >> wtok >> ktok;
  const std::size_t hl = lines[0].number;
  int width = 0;
  {
    auto v = value_of(wtok, "width", hl);
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), width);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw ParseError("bad width", hl, 1);
    }
  }
  if (width < 1 || width > BitVec::kMaxWidth) {
    throw ParseError("width out of range", hl, 1);
  }
  const auto kind = value_of(ktok, "kind", hl);

  if (kind == "perm") {
    const std::size_t size = std::size_t{1} << width;
    if (lines.size() - 1 != size) {
      throw ParseError("perm map needs 2^width rows", hl, 1);
    }
    std::vector<std::uint32_t> image(size);
    std::vector<bool> have(size, false);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      std::istringstream row(lines[i].text);
      std::string in, out;
      row >> in >> out;
      auto x = parse_hex(in, lines[i].number);
      auto y = parse_hex(out, lines[i].number);
      if (x >= size || y >= size || have[x]) {
        throw ParseError("perm row out of range or repeated", lines[i].number,
                         1);
      }
      have[x] = true;
      image[x] = y;
    }
    return InvertibleMap::perm_table(width, std::move(image));
  }
  if (kind == "affine") {
    if (lines.size() != static_cast<std::size_t>(width) + 2) {
      throw ParseError("affine map needs width rows plus an offset line", hl,
                       1);
    }
    std::vector<std::uint32_t> rows;
    for (int i = 0; i < width; ++i) {
      const auto& l = lines[static_cast<std::size_t>(i) + 1];
      rows.push_back(parse_hex(l.text, l.number));
    }
    const auto& last = lines.back();
    return InvertibleMap::affine(width, std::move(rows),
                                 parse_hex(last.text, last.number));
  }
  if (kind == "xorfam") {
    if (lines.size() != 2) throw ParseError("xorfam map needs one row", hl, 1);
    std::istringstream row(lines[1].text);
    std::string m0, m1, f;
    row >> m0 >> m1 >> f;
    const std::size_t ln = lines[1].number;
    auto flip = value_of(f, "flip", ln);
    if (flip != "0" && flip != "1") throw ParseError("flip must be 0 or 1", ln, 1);
    return InvertibleMap::xor_family(width, parse_hex(value_of(m0, "mask0", ln), ln),
                                     parse_hex(value_of(m1, "mask1", ln), ln),
                                     flip == "1");
  }
  throw ParseError("unknown map kind '" + std::string(kind) + "'", hl, 1);
}

InvertibleMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open map file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_map(ss.str());
}

void save_map(const InvertibleMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write map file " + path.string());
  out << format_map(map);
}

}  // namespace dls
