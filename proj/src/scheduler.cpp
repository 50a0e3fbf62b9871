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

#include "dls/scheduler.hpp"

#include "dls/error.hpp"

namespace dls {

StateId state_at(const Scheduler& scheduler, std::uint64_t step) {
  auto s = scheduler.at(step);
  if (!s) {
    throw SchedulerError("scheduler undefined at step " + std::to_string(step) +
                         " (horizon " + std::to_string(scheduler.horizon()) +
                         ")");
  }
  return *s;
}

PeriodicScheduler::PeriodicScheduler(std::vector<StateId> table,
                                     std::uint64_t horizon)
    : table_(std::move(table)), horizon_(horizon) {
  if (table_.empty()) throw ContractViolation("periodic scheduler needs a table");
}

std::optional<StateId> PeriodicScheduler::at(std::uint64_t step) const {
  if (step >= horizon_) return std::nullopt;
  return table_[step % table_.size()];
}

std::string PeriodicScheduler::describe() const {
  return "periodic:" + std::to_string(table_.size());
}

std::optional<StateId> TraceScheduler::at(std::uint64_t step) const {
  if (step >= sequence_.size()) return std::nullopt;
  return sequence_[step];
}

std::string TraceScheduler::describe() const {
  return "trace:" + std::to_string(sequence_.size());
}

RemappedScheduler::RemappedScheduler(std::shared_ptr<const Scheduler> base,
                                     std::vector<StateId> targets)
    : base_(std::move(base)), targets_(std::move(targets)) {
  if (!base_) throw ContractViolation("remapped scheduler needs a base");
  if (targets_.empty()) throw ContractViolation("remapped scheduler needs targets");
}

std::optional<StateId> RemappedScheduler::at(std::uint64_t step) const {
  auto s = base_->at(step);
  if (!s) return std::nullopt;
  const std::uint64_t code = (std::uint64_t{s->q} << 2) | s->symbol;
  return targets_[code % targets_.size()];
}

std::string RemappedScheduler::describe() const {
  return base_->describe() + "->" + std::to_string(targets_.size());
}

}  // namespace dls
