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

// Dynamic level set decomposition.
//
// A fixed boolean function f keeps its level sets; only their physical
// encoding changes. At step j the scheduler picks a state s = h(j), the
// random source supplies r (n-1 bits), the logical bit b = f(input_j) is
// placed at coordinate n-1, and the physical pattern is B_s(r || b).
// Decoding applies B_s^-1 and reads coordinate n-1 back.
//
// The observable part of a pattern is its first n-1 coordinates (the
// computing-element firing pattern); coordinate n-1 is internal.

#ifndef DLS_ENGINE_HPP_
#define DLS_ENGINE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dls/bitcore.hpp"
#include "dls/random_source.hpp"
#include "dls/scheduler.hpp"

namespace dls {

using Family = std::map<StateId, InvertibleMap>;

class DlsDecomposition {
 public:
  // Every family member must have width n; the scheduler must be non-null.
  DlsDecomposition(int width, Family family,
                   std::shared_ptr<const Scheduler> scheduler,
                   std::shared_ptr<RandomSource> source = nullptr);

  int width() const noexcept { return width_; }
  const Family& family() const noexcept { return family_; }
  const Scheduler& scheduler() const noexcept { return *scheduler_; }
  std::shared_ptr<const Scheduler> scheduler_ptr() const { return scheduler_; }
  // May be null; verify_invariance requires it.
  const std::shared_ptr<RandomSource>& source() const noexcept {
    return source_;
  }

  // Throws UnknownState.
  const InvertibleMap& map_for(const StateId& s) const;
  const InvertibleMap& inverse_for(const StateId& s) const;

 private:
  int width_;
  Family family_;
  Family inverses_;
  std::shared_ptr<const Scheduler> scheduler_;
  std::shared_ptr<RandomSource> source_;
};

struct Realization {
  std::uint64_t step = 0;
  StateId state;
  BitVec random_part{1, 0};
  bool logical_bit = false;
  BitVec physical{2, 0};

  BitVec observable() const { return split_top(physical).first; }
};

Realization realize_step(const DlsDecomposition& dls, std::uint64_t step,
                         const BitVec& random_part, bool logical_bit);

// (random part, logical bit) of B_s^-1(y).
std::pair<BitVec, bool> decode(const DlsDecomposition& dls, const StateId& s,
                               const BitVec& physical);

struct InvarianceViolation {
  std::uint64_t step = 0;
  bool expected = false;
  bool decoded = false;
  // The decoded random part differs from the one that was encoded.
  bool random_part_mismatch = false;
};

struct InvarianceReport {
  std::uint64_t steps = 0;
  std::vector<InvarianceViolation> violations;
  std::size_t distinct_observables = 0;
  // Steps whose observable differs from the previous step's.
  std::size_t observable_changes = 0;

  bool ok() const noexcept { return violations.empty(); }
  std::string summary() const;
};

// Produces the realizations of `steps` steps. The logical bit at step j is
// f(inputs[j mod inputs.size()]).
std::vector<Realization> realize_run(const DlsDecomposition& dls,
                                     const BoolFn& f,
                                     std::span<const BitVec> inputs,
                                     std::uint64_t steps, RandomSource& source);

// Decodes every realization and compares against f. Physical patterns are
// taken as given, so tampering shows up as violations.
InvarianceReport check_invariance(const DlsDecomposition& dls, const BoolFn& f,
                                  std::span<const BitVec> inputs,
                                  std::span<const Realization> realizations);

// realize_run with the decomposition's own source, then check_invariance.
InvarianceReport verify_invariance(const DlsDecomposition& dls,
                                   const BoolFn& f,
                                   std::span<const BitVec> inputs,
                                   std::uint64_t steps);

// --- Secrecy ---------------------------------------------------------------

// Non-negative fraction kept in lowest terms.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational make(std::uint64_t num, std::uint64_t den);
  std::string to_string() const;
  bool is_zero() const noexcept { return num == 0; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);
};

// Counts over the 2^(n-1) observables.
using Histogram = std::vector<std::uint32_t>;

inline constexpr int kMaxExhaustiveWidth = 20;

// Exact distribution of the observable for fixed (s, b), enumerating every
// random part. Throws ContractViolation when n > kMaxExhaustiveWidth.
Histogram secrecy_distribution(const DlsDecomposition& dls, const StateId& s,
                               bool b);

Rational total_variation(const Histogram& p, const Histogram& q);

struct SecrecyEntry {
  StateId state;
  bool logical_bit = false;
  Histogram histogram;
  Rational tv_to_ref;  // against the first entry
};

struct SecrecyReport {
  std::vector<SecrecyEntry> entries;
  Rational max_tv;  // over all pairs of entries

  bool pass() const noexcept { return max_tv.is_zero(); }
  // One "state=<s> b=<0|1> tv_to_ref=<p>/<q>" line per entry, then
  // "max_tv=<p>/<q> pass=<true|false>".
  std::string serialize() const;
};

// Throws ContractViolation on an empty family.
SecrecyReport verify_perfect_secrecy(const DlsDecomposition& dls);

struct SampledSecrecy {
  StateId state;
  std::uint64_t samples = 0;
  Histogram histogram;
  double chi_square = 0.0;
  double p_value = 0.0;
};

// Sampling mode for widths beyond exhaustive enumeration. Each sample draws
// n bits from `source`: the low n-1 are the random part, the top one the
// logical bit. The p-value is for the chi-square test against uniform.
SampledSecrecy sample_secrecy(const DlsDecomposition& dls, const StateId& s,
                              std::uint64_t samples, RandomSource& source);

// --- Family builders -------------------------------------------------------

// The first `count` instruction identifiers in (q, alpha) order with a
// 2-bit symbol: (0,0), (0,1), (0,2), (0,3), (1,0), ...
std::vector<StateId> instruction_states(std::size_t count);

// One XorFamily map per state, masks and flip drawn from mt19937_64(seed).
Family make_xor_family(int width, std::span<const StateId> states,
                       std::uint64_t seed);
// One random invertible affine map per state.
Family make_affine_family(int width, std::span<const StateId> states,
                          std::uint64_t seed);
// make_xor_family with the first state's map replaced by the swap of
// coordinates 0 and n-1. That map leaks b into observable coordinate 0.
Family make_swap_control_family(int width, std::span<const StateId> states,
                                std::uint64_t seed);

}  // namespace dls

#endif  // DLS_ENGINE_HPP_
