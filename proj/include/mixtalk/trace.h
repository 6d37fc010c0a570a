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


// Episode trace records and their JSON-lines form.
//
// A trace line carries the fields
//   episode_id, env_id, story_schema_id, model_sender, model_receiver,
//   message{claims[], statement},
//   tool_transcript[{attr_id, tool_id, cost, observed_value, status}],
//   theta_true, theta_hat,
//   payoffs{Score_R, Score_S, err_ratio, cost_ratio, claim_penalty,
//           caught_lie_perfect}
// followed by the run-only fields seed, regime and (TOPD mode) budget_cap.
// Readers accept lines without the run-only fields.
//
// A failed episode is written as the identity fields plus
//   "status": "FAILED", "error": "<message>".

#ifndef MIXTALK_TRACE_H_
#define MIXTALK_TRACE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mixtalk/game_model.h"

namespace mixtalk {

enum class ToolStatus { kOk, kUnavailable };

std::string_view ToString(ToolStatus s);

struct ToolOutcome {
  std::string attr_id;
  std::string tool_id;
  double cost_charged = 0.0;
  std::optional<int> observed_value;
  ToolStatus status = ToolStatus::kOk;
  // Set when the outcome came from a tool able to convict a lie (PERFECT, or
  // an AVAILABILITY tool that resolved).
  bool was_perfect = false;

  bool operator==(const ToolOutcome&) const = default;
};

struct PayoffBreakdown {
  double score_r = 0.0;
  double score_s = 0.0;
  double err_ratio = 0.0;
  double cost_ratio = 0.0;
  double claim_penalty = 0.0;
  double persuasion = 0.0;
  bool caught_lie_perfect = false;

  bool operator==(const PayoffBreakdown&) const = default;
};

struct EpisodeTrace {
  std::string episode_id;
  std::string env_id;
  std::string story_id;
  std::string sender_ref;
  std::string receiver_ref;
  std::optional<uint64_t> seed;
  Regime regime = Regime::kMixTalk;
  // 0 when no playbook cap was active.
  int budget_cap = 0;
  Message message;
  std::vector<ToolOutcome> tool_transcript;
  ThetaVector theta_true;
  ThetaVector theta_hat;
  PayoffBreakdown payoffs;

  bool operator==(const EpisodeTrace&) const = default;
};

// An episode that could not be completed. Excluded from payoff means.
struct EpisodeFailure {
  std::string episode_id;
  std::string env_id;
  std::string story_id;
  std::string sender_ref;
  std::string receiver_ref;
  std::optional<uint64_t> seed;
  Regime regime = Regime::kMixTalk;
  std::string error;
};

OrderedJson TraceToJson(const EpisodeTrace& trace, const GameConfig& config);
OrderedJson FailureToJson(const EpisodeFailure& failure);
std::string TraceToLine(const EpisodeTrace& trace, const GameConfig& config);

// Parses one trace object. `config` supplies the attribute order and the tool
// kinds (was_perfect is derived from the configured tool).
EpisodeTrace TraceFromJson(const Json& j, const GameConfig& config);
bool IsFailureRecord(const Json& j);
EpisodeFailure FailureFromJson(const Json& j);

// Resolves an env_id to its configuration.
using ConfigLookup = std::function<const GameConfig&(const std::string& env_id)>;

struct TraceFile {
  std::vector<EpisodeTrace> traces;
  std::vector<EpisodeFailure> failures;
};

// Reads a JSONL file. Blank lines are skipped; any malformed line throws
// ParseError naming the file and line.
TraceFile ReadTraceFile(const std::filesystem::path& path, const ConfigLookup& lookup);
// All *.jsonl files of a directory in filename order.
TraceFile ReadTraceDir(const std::filesystem::path& dir, const ConfigLookup& lookup);

}  // namespace mixtalk

#endif  // MIXTALK_TRACE_H_
