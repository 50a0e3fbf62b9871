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

#include "dls/bitcore.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <string>

#include "dls/error.hpp"

namespace dls {

namespace {

void check_width(int width) {
  if (width < 1 || width > BitVec::kMaxWidth) {
    throw ContractViolation("width " + std::to_string(width) +
                            " outside 1.." +
                            std::to_string(BitVec::kMaxWidth));
  }
}

void check_same_width(int a, int b, const char* op) {
  if (a != b) {
    throw ContractViolation(std::string(op) + ": width mismatch (" +
                            std::to_string(a) + " vs " + std::to_string(b) +
                            ")");
  }
}

}  // namespace

BitVec::BitVec(int width, std::uint32_t value) : width_(width), value_(value) {
  check_width(width);
  if ((value & ~width_mask(width)) != 0) {
    throw ContractViolation("value " + std::to_string(value) +
                            " does not fit in " + std::to_string(width) +
                            " bits");
  }
}

BitVec BitVec::from_bits(std::span<const bool> bits) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < bits.size() && i < 32; ++i) {
    if (bits[i]) v |= 1U << i;
  }
  return BitVec(static_cast<int>(bits.size()), v);
}

BitVec BitVec::from_string(std::string_view msb_first) {
  std::uint32_t v = 0;
  for (char c : msb_first) {
    if (c != '0' && c != '1') {
      throw ContractViolation("not a binary literal: " +
                              std::string(msb_first));
    }
    v = (v << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return BitVec(static_cast<int>(msb_first.size()), v);
}

BitVec BitVec::with_bit(int i, bool v) const {
  if (i < 0 || i >= width_) throw ContractViolation("coordinate out of range");
  std::uint32_t m = 1U << i;
  return BitVec(width_, v ? (value_ | m) : (value_ & ~m));
}

int BitVec::popcount() const noexcept { return std::popcount(value_); }

std::string BitVec::to_string() const {
  std::string s(static_cast<std::size_t>(width_), '0');
  for (int i = 0; i < width_; ++i) {
    if ((*this)[i]) s[static_cast<std::size_t>(width_ - 1 - i)] = '1';
  }
  return s;
}

BitVec concat(const BitVec& low, bool top) {
  return BitVec(low.width() + 1,
                low.value() | (static_cast<std::uint32_t>(top) << low.width()));
}

std::pair<BitVec, bool> split_top(const BitVec& v) {
  if (v.width() < 2) throw ContractViolation("split_top needs width >= 2");
  int w = v.width() - 1;
  return {BitVec(w, v.value() & width_mask(w)), v[w]};
}

// --- BoolFn / LevelSet -----------------------------------------------------

BoolFn::BoolFn(int domain_width, std::vector<std::uint8_t> table)
    : domain_width_(domain_width), table_(std::move(table)) {
  if (domain_width < 0 || domain_width > BitVec::kMaxWidth) {
    throw ContractViolation("BoolFn domain width out of range");
  }
  if (table_.size() != (std::size_t{1} << domain_width)) {
    throw ContractViolation("BoolFn table length must be 2^domain_width");
  }
  for (auto& e : table_) e = e ? 1 : 0;
}

BoolFn BoolFn::from_members(int domain_width, std::span<const BitVec> members) {
  std::vector<std::uint8_t> table(std::size_t{1} << domain_width, 0);
  for (const auto& m : members) {
    check_same_width(m.width(), domain_width, "BoolFn::from_members");
    table[m.value()] = 1;
  }
  return BoolFn(domain_width, std::move(table));
}

BoolFn BoolFn::constant(int domain_width, bool value) {
  return BoolFn(domain_width,
                std::vector<std::uint8_t>(std::size_t{1} << domain_width,
                                          value ? 1 : 0));
}

bool eval(const BoolFn& f, const BitVec& x) {
  check_same_width(x.width(), f.domain_width(), "eval");
  return f.table()[x.value()] != 0;
}

bool LevelSet::contains(const BitVec& x) const {
  return std::binary_search(members.begin(), members.end(), x);
}

LevelSet level_set(const BoolFn& f, bool c) {
  LevelSet out{f, c, {}};
  const auto& t = f.table();
  for (std::uint32_t x = 0; x < t.size(); ++x) {
    if ((t[x] != 0) == c) out.members.emplace_back(f.domain_width(), x);
  }
  return out;
}

// --- GF(2) -----------------------------------------------------------------

namespace gf2 {

int rank(std::vector<std::uint32_t> rows, int width) {
  int r = 0;
  for (int col = 0; col < width && r < static_cast<int>(rows.size()); ++col) {
    std::uint32_t bit = 1U << col;
    auto pivot = std::find_if(rows.begin() + r, rows.end(),
                              [bit](std::uint32_t row) { return row & bit; });
    if (pivot == rows.end()) continue;
    std::iter_swap(rows.begin() + r, pivot);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) != r && (rows[i] & bit)) rows[i] ^= rows[r];
    }
    ++r;
  }
  return r;
}

bool is_invertible(const std::vector<std::uint32_t>& rows, int width) {
  return static_cast<int>(rows.size()) == width && rank(rows, width) == width;
}

std::vector<std::uint32_t> inverse(const std::vector<std::uint32_t>& rows,
                                   int width) {
  if (static_cast<int>(rows.size()) != width) {
    throw NotABijection("matrix is not square");
  }
  // Gauss-Jordan on [A | I].
  std::vector<std::uint32_t> a = rows;
  std::vector<std::uint32_t> inv(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) inv[static_cast<std::size_t>(i)] = 1U << i;
  for (int col = 0; col < width; ++col) {
    std::uint32_t bit = 1U << col;
    int pivot = -1;
    for (int i = col; i < width; ++i) {
      if (a[static_cast<std::size_t>(i)] & bit) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) throw NotABijection("matrix is singular over GF(2)");
    std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
    std::swap(inv[static_cast<std::size_t>(col)],
              inv[static_cast<std::size_t>(pivot)]);
    for (int i = 0; i < width; ++i) {
      if (i != col && (a[static_cast<std::size_t>(i)] & bit)) {
        a[static_cast<std::size_t>(i)] ^= a[static_cast<std::size_t>(col)];
        inv[static_cast<std::size_t>(i)] ^= inv[static_cast<std::size_t>(col)];
      }
    }
  }
  return inv;
}

std::uint32_t apply(const std::vector<std::uint32_t>& rows, std::uint32_t x) {
  std::uint32_t y = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y |= static_cast<std::uint32_t>(std::popcount(rows[i] & x) & 1) << i;
  }
  return y;
}

std::vector<std::uint32_t> multiply(const std::vector<std::uint32_t>& a,
                                    const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if ((a[i] >> j) & 1U) out[i] ^= b[j];
    }
  }
  return out;
}

}  // namespace gf2

// --- InvertibleMap ---------------------------------------------------------

InvertibleMap InvertibleMap::identity(int width) {
  check_width(width);
  std::vector<std::uint32_t> rows(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) rows[static_cast<std::size_t>(i)] = 1U << i;
  return InvertibleMap(width, AffineRep{std::move(rows), 0});
}

InvertibleMap InvertibleMap::perm_table(int width,
                                        std::vector<std::uint32_t> image) {
  check_width(width);
  const std::size_t size = std::size_t{1} << width;
  if (image.size() != size) {
    throw ContractViolation("PermTable needs exactly 2^width entries");
  }
  std::vector<bool> seen(size, false);
  for (std::uint32_t y : image) {
    if (y >= size) throw ContractViolation("PermTable entry out of range");
    if (seen[y]) {
      throw NotABijection("PermTable entry " + std::to_string(y) +
                          " appears more than once");
    }
    seen[y] = true;
  }
  return InvertibleMap(width, PermTableRep{std::move(image)});
}

InvertibleMap InvertibleMap::affine(int width, std::vector<std::uint32_t> rows,
                                    std::uint32_t offset) {
  check_width(width);
  if (static_cast<int>(rows.size()) != width) {
    throw ContractViolation("affine map needs `width` matrix rows");
  }
  for (auto r : rows) {
    if (r & ~width_mask(width)) throw ContractViolation("matrix row too wide");
  }
  if (offset & ~width_mask(width)) throw ContractViolation("offset too wide");
  if (!gf2::is_invertible(rows, width)) {
    throw NotABijection("affine matrix is singular over GF(2)");
  }
  return InvertibleMap(width, AffineRep{std::move(rows), offset});
}

InvertibleMap InvertibleMap::xor_family(const BitVec& mask0,
                                        const BitVec& mask1, bool flip) {
  check_same_width(mask0.width(), mask1.width(), "xor_family");
  return xor_family(mask0.width() + 1, mask0.value(), mask1.value(), flip);
}

InvertibleMap InvertibleMap::xor_family(int width, std::uint32_t mask0,
                                        std::uint32_t mask1, bool flip) {
  check_width(width);
  if (width < 2) throw ContractViolation("xor family needs width >= 2");
  std::uint32_t m = width_mask(width - 1);
  if ((mask0 & ~m) || (mask1 & ~m)) {
    throw ContractViolation("xor family masks must have width-1 bits");
  }
  return InvertibleMap(width, XorFamilyRep{mask0, mask1, flip});
}

MapKind InvertibleMap::kind() const noexcept {
  switch (rep_.index()) {
    case 0:
      return MapKind::kPerm;
    case 1:
      return MapKind::kAffine;
    default:
      return MapKind::kXorFamily;
  }
}

std::uint32_t InvertibleMap::apply_raw(std::uint32_t x) const noexcept {
  if (const auto* p = std::get_if<PermTableRep>(&rep_)) return p->image[x];
  if (const auto* a = std::get_if<AffineRep>(&rep_)) {
    return gf2::apply(a->rows, x) ^ a->offset;
  }
  const auto& f = std::get<XorFamilyRep>(rep_);
  const int top = width_ - 1;
  const bool b = (x >> top) & 1U;
  const std::uint32_t low = x & width_mask(top);
  return (low ^ (b ? f.mask1 : f.mask0)) |
         (static_cast<std::uint32_t>(b != f.flip) << top);
}

std::vector<std::uint32_t> InvertibleMap::expand() const {
  if (const auto* p = std::get_if<PermTableRep>(&rep_)) return p->image;
  std::vector<std::uint32_t> out(std::size_t{1} << width_);
  for (std::uint32_t x = 0; x < out.size(); ++x) out[x] = apply_raw(x);
  return out;
}

BitVec apply(const InvertibleMap& map, const BitVec& x) {
  check_same_width(x.width(), map.width(), "apply");
  return BitVec(map.width(), map.apply_raw(x.value()));
}

InvertibleMap invert(const InvertibleMap& map) {
  const int width = map.width();
  return std::visit(
      [width](const auto& rep) -> InvertibleMap {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, PermTableRep>) {
          std::vector<std::uint32_t> inv(rep.image.size());
          std::vector<bool> seen(rep.image.size(), false);
          for (std::uint32_t x = 0; x < rep.image.size(); ++x) {
            std::uint32_t y = rep.image[x];
            if (seen[y]) throw NotABijection("PermTable has duplicate entries");
            seen[y] = true;
            inv[y] = x;
          }
          return InvertibleMap::perm_table(width, std::move(inv));
        } else if constexpr (std::is_same_v<T, AffineRep>) {
          // x = A^-1 (y xor c) = A^-1 y xor A^-1 c
          auto inv = gf2::inverse(rep.rows, width);
          std::uint32_t off = gf2::apply(inv, rep.offset);
          return InvertibleMap::affine(width, std::move(inv), off);
        } else {
          // (y, c) -> (y xor mask_{c xor flip}, c xor flip)
          std::uint32_t m0 = rep.flip ? rep.mask1 : rep.mask0;
          std::uint32_t m1 = rep.flip ? rep.mask0 : rep.mask1;
          return InvertibleMap::xor_family(width, m0, m1, rep.flip);
        }
      },
      map.representation());
}

InvertibleMap compose(const InvertibleMap& outer, const InvertibleMap& inner) {
  check_same_width(outer.width(), inner.width(), "compose");
  const int width = outer.width();
  const auto* ao = std::get_if<AffineRep>(&outer.representation());
  const auto* ai = std::get_if<AffineRep>(&inner.representation());
  if (ao && ai) {
    // A1 (A2 x + c2) + c1
    return InvertibleMap::affine(width, gf2::multiply(ao->rows, ai->rows),
                                 gf2::apply(ao->rows, ai->offset) ^ ao->offset);
  }
  std::vector<std::uint32_t> image(std::size_t{1} << width);
  for (std::uint32_t x = 0; x < image.size(); ++x) {
    image[x] = outer.apply_raw(inner.apply_raw(x));
  }
  return InvertibleMap::perm_table(width, std::move(image));
}

bool equivalent(const InvertibleMap& a, const InvertibleMap& b) {
  return a.width() == b.width() && a.expand() == b.expand();
}

InvertibleMap random_affine_invertible(int width, std::uint64_t seed) {
  check_width(width);
  std::mt19937_64 gen(seed);
  const std::uint32_t mask = width_mask(width);
  std::vector<std::uint32_t> rows(static_cast<std::size_t>(width));
  do {
    for (auto& r : rows) r = static_cast<std::uint32_t>(gen()) & mask;
  } while (!gf2::is_invertible(rows, width));
  const auto offset = static_cast<std::uint32_t>(gen()) & mask;
  return InvertibleMap::affine(width, std::move(rows), offset);
}

InvertibleMap coordinate_swap(int width, int i, int j) {
  check_width(width);
  if (i < 0 || j < 0 || i >= width || j >= width) {
    throw ContractViolation("coordinate_swap index out of range");
  }
  std::vector<std::uint32_t> rows(static_cast<std::size_t>(width));
  for (int k = 0; k < width; ++k) rows[static_cast<std::size_t>(k)] = 1U << k;
  std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
  return InvertibleMap::affine(width, std::move(rows), 0);
}

InvertibleMap coordinate_reversal(int width) {
  check_width(width);
  std::vector<std::uint32_t> rows(static_cast<std::size_t>(width));
  for (int k = 0; k < width; ++k) {
    rows[static_cast<std::size_t>(k)] = 1U << (width - 1 - k);
  }
  return InvertibleMap::affine(width, std::move(rows), 0);
}

bool is_bijection(std::span<const BitVec> table) {
  if (table.empty()) return false;
  const int width = table.front().width();
  const std::size_t size = std::size_t{1} << width;
  if (table.size() != size) {
    throw ContractViolation("is_bijection: table length must be 2^width");
  }
  std::vector<bool> seen(size, false);
  for (const auto& y : table) {
    if (y.width() != width) return false;
    if (seen[y.value()]) return false;
    seen[y.value()] = true;
  }
  return true;
}

}  // namespace dls
