// Copyright 2026 The MixTalk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Episode-aligned schedules, the sender x receiver tournament runner and the
// payoff tensor it produces.

#ifndef MIXTALK_TOURNAMENT_H_
#define MIXTALK_TOURNAMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "mixtalk/agents.h"
#include "mixtalk/episode_engine.h"
#include "mixtalk/playbook.h"
#include "mixtalk/trace.h"

namespace mixtalk {

struct VariantKey {
  std::string env_id;
  std::string story_id;

  auto operator<=>(const VariantKey&) const = default;
};

struct ScheduleEntry {
  std::string episode_id;  // "ep%06d" of the global index
  std::string env_id;
  std::string story_id;
  int episode_index = 0;     // global position in the schedule
  int index_in_variant = 0;  // how many earlier entries share this variant
  uint64_t seed = 0;
};

struct Schedule {
  std::vector<ScheduleEntry> entries;
  int episodes_per_pair = 0;
  uint64_t master_seed = 0;
};

// Round-robin over `variants`. Throws DivisibilityError unless the episode
// count is a positive multiple of the number of variants.
Schedule BuildSchedule(const std::vector<VariantKey>& variants, int episodes_per_pair,
                       uint64_t master_seed);

OrderedJson ScheduleToJson(const Schedule& schedule);

// Per-(sender, receiver, episode) utilities. Missing (failed) cells are NaN.
class PayoffTensor {
 public:
  PayoffTensor() = default;
  PayoffTensor(std::vector<std::string> senders, std::vector<std::string> receivers,
               std::vector<std::string> episode_ids);

  const std::vector<std::string>& senders() const { return senders_; }
  const std::vector<std::string>& receivers() const { return receivers_; }
  const std::vector<std::string>& episode_ids() const { return episode_ids_; }
  std::size_t num_senders() const { return senders_.size(); }
  std::size_t num_receivers() const { return receivers_.size(); }
  std::size_t num_episodes() const { return episode_ids_.size(); }

  void Set(std::size_t s, std::size_t r, std::size_t e, double u_s, double u_r);
  bool Has(std::size_t s, std::size_t r, std::size_t e) const;
  double SenderUtility(std::size_t s, std::size_t r, std::size_t e) const;
  double ReceiverUtility(std::size_t s, std::size_t r, std::size_t e) const;
  // Utility of the agent in `role`; `own` indexes that role's list.
  double Utility(Role role, std::size_t own, std::size_t opponent, std::size_t e) const;
  std::size_t FailureCount(std::size_t s, std::size_t r) const;
  std::size_t TotalFailures() const;

  int SenderIndex(const std::string& name) const;
  int ReceiverIndex(const std::string& name) const;
  int EpisodeIndex(const std::string& episode_id) const;

  bool operator==(const PayoffTensor& other) const;

 private:
  std::size_t Flat(std::size_t s, std::size_t r, std::size_t e) const;

  std::vector<std::string> senders_;
  std::vector<std::string> receivers_;
  std::vector<std::string> episode_ids_;
  std::vector<double> u_s_;
  std::vector<double> u_r_;
};

// Row index: sender; column index: receiver.
using Matrix = std::vector<std::vector<double>>;

struct PayoffMatrices {
  Matrix sender;
  Matrix receiver;
};

// Episode means per cell. Throws EmptyCell if a cell has no completed episode.
PayoffMatrices ComputePayoffMatrices(const PayoffTensor& tensor);

// Builds a tensor from stored traces; agent and episode axes sorted by name.
PayoffTensor TensorFromTraces(const std::vector<EpisodeTrace>& traces);

// Receives one pairing's records in schedule order.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  // Throws SinkError.
  virtual void WritePairing(const std::string& sender, const std::string& receiver,
                            const std::vector<std::string>& lines) = 0;
};

// One append-only JSONL file per pairing: <dir>/<sender>__<receiver>.jsonl.
class DirectorySink : public TraceSink {
 public:
  explicit DirectorySink(std::filesystem::path dir);
  void WritePairing(const std::string& sender, const std::string& receiver,
                    const std::vector<std::string>& lines) override;
  static std::string FileName(const std::string& sender, const std::string& receiver);

 private:
  std::filesystem::path dir_;
  std::mutex mu_;
};

class MemorySink : public TraceSink {
 public:
  void WritePairing(const std::string& sender, const std::string& receiver,
                    const std::vector<std::string>& lines) override;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> files;
};

struct TournamentOptions {
  int jobs = 1;
  // Playbooks by env_id, shown to every receiver (engine-enforced caps).
  std::map<std::string, Playbook> playbooks;
  // Overrides the HTTP client of remote agents.
  std::function<std::shared_ptr<TextGenerator>(const AgentRef&)> generator_factory;
  std::shared_ptr<const PromptTemplates> templates;
};

struct TournamentResult {
  PayoffTensor tensor;
  // Completed episodes, ordered by (sender, receiver, schedule position).
  std::vector<EpisodeTrace> traces;
  std::vector<EpisodeFailure> failures;
};

// `variants` must hold every (env_id, story_id) of the schedule. A null sink
// keeps results in memory only. Per-episode errors are recorded as failures;
// only sink errors abort.
TournamentResult RunTournament(const Schedule& schedule,
                               const std::map<VariantKey, Variant>& variants,
                               const std::vector<AgentRef>& senders,
                               const std::vector<AgentRef>& receivers, TraceSink* sink,
                               const TournamentOptions& options = {});

// Runs `fn(i)` for i in [0, n) on up to `jobs` threads. The first exception
// is rethrown after all workers stop.
void ParallelFor(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace mixtalk

#endif  // MIXTALK_TOURNAMENT_H_
