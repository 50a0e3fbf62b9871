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

#ifndef DLS_SCHEDULER_HPP_
#define DLS_SCHEDULER_HPP_

#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dls {

// An instruction identifier (q, alpha). Plain indices are written as (k, 0).
struct StateId {
  std::uint32_t q = 0;
  std::uint32_t symbol = 0;

  friend bool operator==(const StateId&, const StateId&) = default;
  friend auto operator<=>(const StateId&, const StateId&) = default;

  std::string to_string() const {
    return "(" + std::to_string(q) + "," + std::to_string(symbol) + ")";
  }
};

inline constexpr std::uint64_t kUnboundedHorizon =
    std::numeric_limits<std::uint64_t>::max();

// Computable map from step index to state. Defined on [0, horizon()).
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::optional<StateId> at(std::uint64_t step) const = 0;
  virtual std::uint64_t horizon() const = 0;
  virtual std::string describe() const = 0;
};

// Throws SchedulerError past the horizon.
StateId state_at(const Scheduler& scheduler, std::uint64_t step);

// step -> table[step mod period].
class PeriodicScheduler final : public Scheduler {
 public:
  explicit PeriodicScheduler(std::vector<StateId> table,
                             std::uint64_t horizon = kUnboundedHorizon);

  std::optional<StateId> at(std::uint64_t step) const override;
  std::uint64_t horizon() const override { return horizon_; }
  std::string describe() const override;

  const std::vector<StateId>& table() const noexcept { return table_; }

 private:
  std::vector<StateId> table_;
  std::uint64_t horizon_;
};

// A recorded state sequence; defined only on the recorded prefix.
class TraceScheduler final : public Scheduler {
 public:
  explicit TraceScheduler(std::vector<StateId> sequence)
      : sequence_(std::move(sequence)) {}

  std::optional<StateId> at(std::uint64_t step) const override;
  std::uint64_t horizon() const override { return sequence_.size(); }
  std::string describe() const override;

  const std::vector<StateId>& sequence() const noexcept { return sequence_; }

 private:
  std::vector<StateId> sequence_;
};

// Folds another scheduler onto a fixed state list: state (q, a) of the base
// scheduler becomes targets[((q << 2) | a) mod targets.size()].
class RemappedScheduler final : public Scheduler {
 public:
  RemappedScheduler(std::shared_ptr<const Scheduler> base,
                    std::vector<StateId> targets);

  std::optional<StateId> at(std::uint64_t step) const override;
  std::uint64_t horizon() const override { return base_->horizon(); }
  std::string describe() const override;

 private:
  std::shared_ptr<const Scheduler> base_;
  std::vector<StateId> targets_;
};

}  // namespace dls

#endif  // DLS_SCHEDULER_HPP_
