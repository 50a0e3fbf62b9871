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

#include "dls/aem_compiler.hpp"

#include <memory>

#include "dls/error.hpp"

namespace dls::aem {

namespace {

constexpr int kDisarmed = 1 << 20;

std::string output_element(int k, int width) {
  return k == width - 1 ? std::string(kHiddenElement) : observable_element(k);
}

// Name of the input feeding coordinate i of r || b.
std::string input_element(int i, int width) {
  return i == width - 1 ? std::string(kLogicalElement) : random_element(i);
}

}  // namespace

std::string random_element(int i) { return "r" + std::to_string(i); }
std::string observable_element(int i) { return "d" + std::to_string(i); }

std::vector<Command> compile_step(const InvertibleMap& map, const BitVec& r,
                                  bool b) {
  const int n = map.width();
  if (r.width() != n - 1) {
    throw ContractViolation("compile_step: random part must have width " +
                            std::to_string(n - 1));
  }
  const BitVec x = concat(r, b);
  const BitVec y = apply(map, x);
  const int armed = 1 + x.popcount();

  std::vector<Command> out;
  for (int i = 0; i < n - 1; ++i) {
    out.emplace_back(ElementCmd{{random_element(i), 1, 0, ElementKind::kRandom}});
  }
  out.emplace_back(ElementCmd{{kLogicalElement, kDisarmed, 0, ElementKind::kPlain}});
  out.emplace_back(ElementCmd{{kClockElement, kDisarmed, 0, ElementKind::kPlain}});
  for (int k = 0; k < n; ++k) {
    out.emplace_back(
        ElementCmd{{output_element(k, n), kDisarmed, 0, ElementKind::kComputing}});
  }

  out.emplace_back(FireCmd{kClockElement, 0});
  for (int i = 0; i < n; ++i) {
    if (x[i]) out.emplace_back(FireCmd{input_element(i, n), 0});
  }

  // Static wiring from the truth-table row B(x).
  for (int k = 0; k < n; ++k) {
    const std::string out_name = output_element(k, n);
    if (!y[k]) {
      out.emplace_back(DeleteConnectionCmd{kClockElement, out_name});
      for (int i = 0; i < n; ++i) {
        out.emplace_back(DeleteConnectionCmd{input_element(i, n), out_name});
      }
      continue;
    }
    out.emplace_back(
        ConnectionCmd{{kClockElement, out_name, 1, static_cast<int>(kReadoutOffset)}});
    for (int i = 0; i < n - 1; ++i) {
      if (x[i]) {
        // Installed by the meta keyed to r_i.
        out.emplace_back(DeleteConnectionCmd{random_element(i), out_name});
      } else {
        out.emplace_back(ConnectionCmd{
            {random_element(i), out_name, -1, static_cast<int>(kReadoutOffset)}});
      }
    }
    out.emplace_back(ConnectionCmd{{kLogicalElement, out_name, b ? 1 : -1,
                                    static_cast<int>(kReadoutOffset)}});
  }

  // Reconfiguration keyed to the random elements that fire.
  for (int i = 0; i < n - 1; ++i) {
    MetaCmd meta{MetaKind::kSetDynamicC, random_element(i), {}};
    if (x[i]) {
      for (int k = 0; k < n; ++k) {
        if (y[k]) {
          meta.payload.emplace_back(ConnectionCmd{{random_element(i),
                                                   output_element(k, n), 1,
                                                   static_cast<int>(kReadoutOffset)}});
        }
      }
    }
    out.emplace_back(std::move(meta));
  }
  MetaCmd arm{MetaKind::kSetDynamicE, kClockElement, {}};
  for (int k = 0; k < n; ++k) {
    if (y[k]) {
      arm.payload.emplace_back(
          ElementCmd{{output_element(k, n), armed, 0, ElementKind::kComputing}});
    }
  }
  out.emplace_back(std::move(arm));
  return out;
}

StepRunner::StepRunner(int width) : width_(width) {
  if (width < 2 || width > BitVec::kMaxWidth) {
    throw ContractViolation("step runner width out of range");
  }
}

BitVec StepRunner::run_step(const InvertibleMap& map, const BitVec& r, bool b,
                            FiringTrace* trace) {
  if (map.width() != width_) throw ContractViolation("map width mismatch");
  machine_.apply(compile_step(map, r, b));
  const Tick readout = machine_.now() + kReadoutOffset;
  for (Tick t = 0; t < kEpochTicks; ++t) {
    auto rec = machine_.tick();
    if (trace) trace->push_back(std::move(rec));
  }
  std::uint32_t v = 0;
  for (int k = 0; k < width_; ++k) {
    if (machine_.fired_at(output_element(k, width_), readout)) v |= 1U << k;
  }
  return BitVec(width_, v);
}

UtmRun run_utm_realization(const TmProgram& tm, const DlsDecomposition& dls,
                           const TmConfig& initial, std::uint64_t steps,
                           RandomSource& source, const BoolFn& eta) {
  if (dls.width() != kUtmWidth) {
    throw ContractViolation("UTM realization needs a width-15 decomposition");
  }
  if (eta.domain_width() != 5) {
    throw ContractViolation("eta must be a function of the 5-bit instruction");
  }
  auto scheduler = std::make_shared<TraceScheduler>(
      instruction_scheduler(tm, initial, steps));
  const DlsDecomposition run_dls(dls.width(), dls.family(), scheduler);

  UtmRun out;
  out.requested_steps = steps;
  out.effective_steps = scheduler->horizon();

  StepRunner runner(dls.width());
  std::vector<BitVec> inputs;
  std::vector<Realization> realized;
  for (std::uint64_t j = 0; j < out.effective_steps; ++j) {
    const StateId s = scheduler->sequence()[j];
    const BitVec instr = instruction_bits(s);
    const bool b = eval(eta, instr);
    const BitVec r = source.next_bits(dls.width() - 1);
    const BitVec physical =
        runner.run_step(run_dls.map_for(s), r, b, &out.trace);
    if (physical != realize_step(run_dls, j, r, b).physical) {
      ++out.aem_mismatches;
    }
    inputs.push_back(instr);
    realized.push_back(Realization{j, s, r, b, physical});
    out.physical.push_back(physical);
  }
  if (!realized.empty()) {
    out.report = check_invariance(run_dls, eta, inputs, realized);
  }
  return out;
}

}  // namespace dls::aem
