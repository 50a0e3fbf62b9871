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

// Compiles one dynamic-level-set step into AEM commands and runs whole UTM
// realizations on a machine.
//
// Element layout for a width-n step:
//   r0..r{n-2}   random elements, fired according to the random part r
//   b3           carries the logical bit
//   clk          fires once per epoch
//   d0..d{n-2}   computing elements; their firing is the observable pattern
//   p3           computing element for coordinate n-1 (not observable)
//
// An epoch lasts three ticks: inputs fire at offset 0, the meta commands
// they trigger rewire the computing elements for offset 1, and the
// computing elements fire at offset 2 (the readout tick). Each output
// element whose bit in y = B_s(r || b) is 1 is wired as a detector of
// exactly the input pattern r || b:
//   - every input expected silent inhibits it (amplitude -1),
//   - every r_i expected to fire gets an excitatory link that only the
//     set_dynamic_C meta keyed to r_i installs,
//   - a set_dynamic_E meta keyed to clk arms its threshold at
//     1 + popcount(r || b).
// Output elements whose bit is 0 are disarmed and disconnected. Every step
// rewrites the whole configuration, so nothing leaks across steps.

#ifndef DLS_AEM_COMPILER_HPP_
#define DLS_AEM_COMPILER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dls/aem.hpp"
#include "dls/bitcore.hpp"
#include "dls/engine.hpp"
#include "dls/random_source.hpp"
#include "dls/tm.hpp"

namespace dls::aem {

inline constexpr Tick kEpochTicks = 3;
inline constexpr Tick kReadoutOffset = 2;

std::string random_element(int i);
std::string observable_element(int i);
inline constexpr const char* kLogicalElement = "b3";
inline constexpr const char* kHiddenElement = "p3";
inline constexpr const char* kClockElement = "clk";

// Throws ContractViolation unless r.width() == map.width() - 1.
std::vector<Command> compile_step(const InvertibleMap& map, const BitVec& r,
                                  bool b);

// Keeps one machine alive across steps and reads the physical pattern back
// from its firing record.
class StepRunner {
 public:
  explicit StepRunner(int width);

  // Loads compile_step(map, r, b), runs one epoch, appends its tick records
  // to `trace` when given, and returns the pattern fired at the readout
  // tick (d_i -> coordinate i, p3 -> coordinate n-1).
  BitVec run_step(const InvertibleMap& map, const BitVec& r, bool b,
                  FiringTrace* trace = nullptr);

  const Machine& machine() const noexcept { return machine_; }
  int width() const noexcept { return width_; }

 private:
  int width_;
  Machine machine_;
};

struct UtmRun {
  FiringTrace trace;
  InvarianceReport report;
  std::uint64_t requested_steps = 0;
  std::uint64_t effective_steps = 0;
  // Steps where the machine's pattern differs from realize_step's.
  std::uint64_t aem_mismatches = 0;
  std::vector<BitVec> physical;

  bool ok() const noexcept { return report.ok() && aem_mismatches == 0; }
};

inline constexpr int kUtmWidth = 15;

// Runs `tm` from `initial` for up to `steps` steps. Step j's logical bit is
// eta(q_j, a_j) and its map is dls's family member for (q_j, a_j). The
// decomposition's own scheduler is replaced by the instruction trace of
// this run. dls.width() must be 15.
UtmRun run_utm_realization(const TmProgram& tm, const DlsDecomposition& dls,
                           const TmConfig& initial, std::uint64_t steps,
                           RandomSource& source, const BoolFn& eta);

}  // namespace dls::aem

#endif  // DLS_AEM_COMPILER_HPP_
