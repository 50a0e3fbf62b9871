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

#include "dls/engine.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include <boost/math/distributions/chi_squared.hpp>

#include "dls/error.hpp"

namespace dls {

DlsDecomposition::DlsDecomposition(int width, Family family,
                                   std::shared_ptr<const Scheduler> scheduler,
                                   std::shared_ptr<RandomSource> source)
    : width_(width),
      family_(std::move(family)),
      scheduler_(std::move(scheduler)),
      source_(std::move(source)) {
  if (width < 2 || width > BitVec::kMaxWidth) {
    throw ContractViolation("decomposition width must be in 2.." +
                            std::to_string(BitVec::kMaxWidth));
  }
  if (!scheduler_) throw ContractViolation("decomposition needs a scheduler");
  for (const auto& [s, map] : family_) {
    if (map.width() != width) {
      throw ContractViolation("family member " + s.to_string() +
                              " has width " + std::to_string(map.width()));
    }
    inverses_.emplace(s, invert(map));
  }
}

const InvertibleMap& DlsDecomposition::map_for(const StateId& s) const {
  auto it = family_.find(s);
  if (it == family_.end()) {
    throw UnknownState("no family member for state " + s.to_string());
  }
  return it->second;
}

const InvertibleMap& DlsDecomposition::inverse_for(const StateId& s) const {
  auto it = inverses_.find(s);
  if (it == inverses_.end()) {
    throw UnknownState("no family member for state " + s.to_string());
  }
  return it->second;
}

Realization realize_step(const DlsDecomposition& dls, std::uint64_t step,
                         const BitVec& random_part, bool logical_bit) {
  if (random_part.width() != dls.width() - 1) {
    throw ContractViolation("random part must have width n-1");
  }
  const StateId s = state_at(dls.scheduler(), step);
  const BitVec input = concat(random_part, logical_bit);
  return Realization{step, s, random_part, logical_bit,
                     apply(dls.map_for(s), input)};
}

std::pair<BitVec, bool> decode(const DlsDecomposition& dls, const StateId& s,
                               const BitVec& physical) {
  if (physical.width() != dls.width()) {
    throw ContractViolation("decode: pattern width must be n");
  }
  return split_top(apply(dls.inverse_for(s), physical));
}

std::string InvarianceReport::summary() const {
  std::ostringstream os;
  os << "steps=" << steps << " violations=" << violations.size()
     << " distinct_observables=" << distinct_observables
     << " observable_changes=" << observable_changes
     << " pass=" << (ok() ? "true" : "false");
  return os.str();
}

namespace {

const BitVec& input_at(std::span<const BitVec> inputs, std::uint64_t step) {
  return inputs[step % inputs.size()];
}

void check_inputs(const BoolFn& f, std::span<const BitVec> inputs) {
  if (inputs.empty()) throw ContractViolation("invariance check needs inputs");
  for (const auto& x : inputs) {
    if (x.width() != f.domain_width()) {
      throw ContractViolation("input width does not match f");
    }
  }
}

}  // namespace

std::vector<Realization> realize_run(const DlsDecomposition& dls,
                                     const BoolFn& f,
                                     std::span<const BitVec> inputs,
                                     std::uint64_t steps,
                                     RandomSource& source) {
  check_inputs(f, inputs);
  std::vector<Realization> out;
  out.reserve(steps);
  for (std::uint64_t j = 0; j < steps; ++j) {
    const bool b = eval(f, input_at(inputs, j));
    out.push_back(realize_step(dls, j, source.next_bits(dls.width() - 1), b));
  }
  return out;
}

InvarianceReport check_invariance(const DlsDecomposition& dls, const BoolFn& f,
                                  std::span<const BitVec> inputs,
                                  std::span<const Realization> realizations) {
  check_inputs(f, inputs);
  InvarianceReport report;
  report.steps = realizations.size();
  std::unordered_set<std::uint32_t> seen;
  std::optional<std::uint32_t> previous;
  for (const auto& rz : realizations) {
    const bool expected = eval(f, input_at(inputs, rz.step));
    const auto [r, b] = decode(dls, rz.state, rz.physical);
    if (b != expected || r != rz.random_part) {
      report.violations.push_back({rz.step, expected, b, r != rz.random_part});
    }
    const std::uint32_t obs = rz.observable().value();
    seen.insert(obs);
    if (previous && *previous != obs) ++report.observable_changes;
    previous = obs;
  }
  report.distinct_observables = seen.size();
  return report;
}

InvarianceReport verify_invariance(const DlsDecomposition& dls,
                                   const BoolFn& f,
                                   std::span<const BitVec> inputs,
                                   std::uint64_t steps) {
  if (steps < 1) throw ContractViolation("verify_invariance needs steps >= 1");
  if (!dls.source()) {
    throw ContractViolation("decomposition has no random source bound");
  }
  auto run = realize_run(dls, f, inputs, steps, *dls.source());
  return check_invariance(dls, f, inputs, run);
}

// --- Secrecy ---------------------------------------------------------------

Rational Rational::make(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw ContractViolation("zero denominator");
  if (num == 0) return Rational{0, 1};
  const std::uint64_t g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

std::string Rational::to_string() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  using u128 = unsigned __int128;
  const u128 lhs = static_cast<u128>(a.num) * b.den;
  const u128 rhs = static_cast<u128>(b.num) * a.den;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Histogram secrecy_distribution(const DlsDecomposition& dls, const StateId& s,
                               bool b) {
  const int n = dls.width();
  if (n > kMaxExhaustiveWidth) {
    throw ContractViolation("exhaustive secrecy needs n <= " +
                            std::to_string(kMaxExhaustiveWidth) +
                            "; use sampling mode");
  }
  const InvertibleMap& map = dls.map_for(s);
  const int low = n - 1;
  const std::uint32_t low_mask = width_mask(low);
  const std::uint32_t top = static_cast<std::uint32_t>(b) << low;
  Histogram h(std::size_t{1} << low, 0);
  for (std::uint32_t r = 0; r < h.size(); ++r) {
    ++h[map.apply_raw(r | top) & low_mask];
  }
  return h;
}

Rational total_variation(const Histogram& p, const Histogram& q) {
  if (p.size() != q.size()) {
    throw ContractViolation("histograms over different supports");
  }
  using u128 = unsigned __int128;
  const u128 tp = std::accumulate(p.begin(), p.end(), u128{0});
  const u128 tq = std::accumulate(q.begin(), q.end(), u128{0});
  if (tp == 0 || tq == 0) throw ContractViolation("empty histogram");
  // sum |p_i/P - q_i/Q| / 2 = sum |p_i Q - q_i P| / (2 P Q)
  u128 num = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const u128 a = static_cast<u128>(p[i]) * tq;
    const u128 c = static_cast<u128>(q[i]) * tp;
    num += a > c ? a - c : c - a;
  }
  u128 den = 2 * tp * tq;
  // Reduce in 128 bits before narrowing.
  u128 x = num, y = den;
  while (y != 0) {
    u128 t = x % y;
    x = y;
    y = t;
  }
  if (num == 0) return Rational{0, 1};
  num /= x;
  den /= x;
  if (den > UINT64_MAX) throw ContractViolation("total variation overflow");
  return Rational{static_cast<std::uint64_t>(num),
                  static_cast<std::uint64_t>(den)};
}

std::string SecrecyReport::serialize() const {
  std::ostringstream os;
  for (const auto& e : entries) {
    os << "state=" << e.state.to_string() << " b=" << (e.logical_bit ? 1 : 0)
       << " tv_to_ref=" << e.tv_to_ref.to_string() << '\n';
  }
  os << "max_tv=" << max_tv.to_string() << " pass=" << (pass() ? "true" : "false")
     << '\n';
  return os.str();
}

SecrecyReport verify_perfect_secrecy(const DlsDecomposition& dls) {
  if (dls.family().empty()) {
    throw ContractViolation("verify_perfect_secrecy: empty state space");
  }
  SecrecyReport report;
  for (const auto& entry : dls.family()) {
    for (bool b : {false, true}) {
      report.entries.push_back(
          {entry.first, b, secrecy_distribution(dls, entry.first, b), {}});
    }
  }
  const Histogram& ref = report.entries.front().histogram;
  for (auto& e : report.entries) e.tv_to_ref = total_variation(ref, e.histogram);
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    for (std::size_t j = i + 1; j < report.entries.size(); ++j) {
      report.max_tv = std::max(report.max_tv,
                               total_variation(report.entries[i].histogram,
                                               report.entries[j].histogram));
    }
  }
  return report;
}

SampledSecrecy sample_secrecy(const DlsDecomposition& dls, const StateId& s,
                              std::uint64_t samples, RandomSource& source) {
  if (samples == 0) throw ContractViolation("sample_secrecy needs samples > 0");
  const int n = dls.width();
  const InvertibleMap& map = dls.map_for(s);
  const std::uint32_t low_mask = width_mask(n - 1);
  SampledSecrecy out{s, samples, Histogram(std::size_t{1} << (n - 1), 0), 0, 0};
  for (std::uint64_t i = 0; i < samples; ++i) {
    ++out.histogram[map.apply_raw(source.next_bits(n).value()) & low_mask];
  }
  const double bins = static_cast<double>(out.histogram.size());
  const double expected = static_cast<double>(samples) / bins;
  double chi = 0.0;
  for (auto c : out.histogram) {
    const double d = static_cast<double>(c) - expected;
    chi += d * d / expected;
  }
  out.chi_square = chi;
  if (out.histogram.size() < 2) {
    out.p_value = 1.0;
  } else {
    boost::math::chi_squared dist(bins - 1.0);
    out.p_value = boost::math::cdf(boost::math::complement(dist, chi));
  }
  return out;
}

// --- Family builders -------------------------------------------------------

std::vector<StateId> instruction_states(std::size_t count) {
  std::vector<StateId> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({static_cast<std::uint32_t>(i / 4),
                   static_cast<std::uint32_t>(i % 4)});
  }
  return out;
}

Family make_xor_family(int width, std::span<const StateId> states,
                       std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const std::uint32_t mask = width_mask(width - 1);
  Family family;
  for (const auto& s : states) {
    const auto m0 = static_cast<std::uint32_t>(gen()) & mask;
    const auto m1 = static_cast<std::uint32_t>(gen()) & mask;
    const bool flip = gen() & 1U;
    family.insert_or_assign(s, InvertibleMap::xor_family(width, m0, m1, flip));
  }
  return family;
}

Family make_affine_family(int width, std::span<const StateId> states,
                          std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Family family;
  for (const auto& s : states) {
    family.insert_or_assign(s, random_affine_invertible(width, gen()));
  }
  return family;
}

Family make_swap_control_family(int width, std::span<const StateId> states,
                                std::uint64_t seed) {
  Family family = make_xor_family(width, states, seed);
  if (!states.empty()) {
    family.insert_or_assign(states.front(),
                            coordinate_swap(width, 0, width - 1));
  }
  return family;
}

}  // namespace dls
