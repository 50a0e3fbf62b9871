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

// Bit vectors, boolean functions, level sets and invertible maps on
// {0,1}^n.
//
// Coordinate i of a bit vector is bit i of its little-endian integer
// encoding. Every truth table and permutation table in this library is
// indexed by that encoding.

#ifndef DLS_BITCORE_HPP_
#define DLS_BITCORE_HPP_

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dls {

class BitVec {
 public:
  static constexpr int kMaxWidth = 24;

  // Throws ContractViolation unless 1 <= width <= kMaxWidth and
  // value < 2^width.
  BitVec(int width, std::uint32_t value);

  static BitVec zeros(int width) { return BitVec(width, 0); }
  // Builds from coordinates x_0, x_1, ... (index 0 is the lowest bit).
  static BitVec from_bits(std::span<const bool> bits);
  // Parses a binary literal written most-significant coordinate first,
  // e.g. "110" has x_2 = 1, x_1 = 1, x_0 = 0.
  static BitVec from_string(std::string_view msb_first);

  int width() const noexcept { return width_; }
  std::uint32_t value() const noexcept { return value_; }
  bool operator[](int i) const noexcept { return (value_ >> i) & 1U; }
  BitVec with_bit(int i, bool v) const;
  int popcount() const noexcept;

  // Most-significant coordinate first, matching from_string.
  std::string to_string() const;

  friend bool operator==(const BitVec&, const BitVec&) = default;
  friend auto operator<=>(const BitVec&, const BitVec&) = default;

 private:
  int width_;
  std::uint32_t value_;
};

// r || b: r occupies coordinates 0..w-1 and b lands on coordinate w.
BitVec concat(const BitVec& low, bool top);
// Inverse of concat: the first width-1 coordinates and coordinate width-1.
std::pair<BitVec, bool> split_top(const BitVec& v);

inline std::uint32_t width_mask(int width) {
  return width >= 32 ? 0xFFFFFFFFU : ((1U << width) - 1U);
}

// Truth table of a function {0,1}^n -> {0,1}. Width 0 is a constant.
class BoolFn {
 public:
  BoolFn(int domain_width, std::vector<std::uint8_t> table);

  template <typename F>
  static BoolFn from_function(int domain_width, F&& f) {
    std::vector<std::uint8_t> table(std::size_t{1} << domain_width);
    for (std::uint32_t x = 0; x < table.size(); ++x) {
      table[x] = f(x) ? 1 : 0;
    }
    return BoolFn(domain_width, std::move(table));
  }
  // Indicator of `members`.
  static BoolFn from_members(int domain_width, std::span<const BitVec> members);
  static BoolFn constant(int domain_width, bool value);

  int domain_width() const noexcept { return domain_width_; }
  const std::vector<std::uint8_t>& table() const noexcept { return table_; }

  friend bool operator==(const BoolFn&, const BoolFn&) = default;

 private:
  int domain_width_;
  std::vector<std::uint8_t> table_;
};

bool eval(const BoolFn& f, const BitVec& x);

struct LevelSet {
  BoolFn source;
  bool value;
  std::vector<BitVec> members;  // ascending by integer encoding

  bool contains(const BitVec& x) const;
  std::size_t size() const noexcept { return members.size(); }
};

LevelSet level_set(const BoolFn& f, bool c);

// y_i = parity(rows[i] & x) xor offset_i.
struct AffineRep {
  std::vector<std::uint32_t> rows;
  std::uint32_t offset = 0;
};

// B(x, b) = (x xor mask_b, b xor flip), b being coordinate width-1.
struct XorFamilyRep {
  std::uint32_t mask0 = 0;
  std::uint32_t mask1 = 0;
  bool flip = false;
};

struct PermTableRep {
  std::vector<std::uint32_t> image;
};

using MapRepresentation = std::variant<PermTableRep, AffineRep, XorFamilyRep>;

enum class MapKind { kPerm, kAffine, kXorFamily };

// A bijection on {0,1}^width. Constructors reject anything that is not a
// bijection, so every instance is invertible.
class InvertibleMap {
 public:
  static InvertibleMap identity(int width);
  // Throws NotABijection when `image` repeats an entry.
  static InvertibleMap perm_table(int width, std::vector<std::uint32_t> image);
  // Throws NotABijection when the matrix is singular over GF(2).
  static InvertibleMap affine(int width, std::vector<std::uint32_t> rows,
                              std::uint32_t offset);
  static InvertibleMap xor_family(const BitVec& mask0, const BitVec& mask1,
                                  bool flip);
  static InvertibleMap xor_family(int width, std::uint32_t mask0,
                                  std::uint32_t mask1, bool flip);

  int width() const noexcept { return width_; }
  MapKind kind() const noexcept;
  const MapRepresentation& representation() const noexcept { return rep_; }

  // No width check; `x` must be below 2^width.
  std::uint32_t apply_raw(std::uint32_t x) const noexcept;

  // Full forward table (PermTable normal form).
  std::vector<std::uint32_t> expand() const;

 private:
  InvertibleMap(int width, MapRepresentation rep)
      : width_(width), rep_(std::move(rep)) {}

  int width_;
  MapRepresentation rep_;
};

BitVec apply(const InvertibleMap& map, const BitVec& x);
InvertibleMap invert(const InvertibleMap& map);
// apply(compose(outer, inner), x) == apply(outer, apply(inner, x)).
InvertibleMap compose(const InvertibleMap& outer, const InvertibleMap& inner);
// Same function, compared through the PermTable normal form.
bool equivalent(const InvertibleMap& a, const InvertibleMap& b);

InvertibleMap random_affine_invertible(int width, std::uint64_t seed);
// Linear map exchanging coordinates i and j.
InvertibleMap coordinate_swap(int width, int i, int j);
// x_i -> x_{width-1-i}.
InvertibleMap coordinate_reversal(int width);

bool is_bijection(std::span<const BitVec> table);

namespace gf2 {

// Rows are bit masks: row i bit j is entry (i, j).
int rank(std::vector<std::uint32_t> rows, int width);
bool is_invertible(const std::vector<std::uint32_t>& rows, int width);
// Throws NotABijection for singular input.
std::vector<std::uint32_t> inverse(const std::vector<std::uint32_t>& rows,
                                   int width);
std::vector<std::uint32_t> multiply(const std::vector<std::uint32_t>& a,
                                    const std::vector<std::uint32_t>& b);
std::uint32_t apply(const std::vector<std::uint32_t>& rows, std::uint32_t x);

}  // namespace gf2

}  // namespace dls

#endif  // DLS_BITCORE_HPP_
