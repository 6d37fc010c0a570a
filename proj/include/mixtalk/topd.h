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


// Oracle-policy distillation for receivers: pick the oracle's episodes, keep
// those played against the strongest opponents, summarize verification
// behavior per environment, and replay stored messages against a receiver
// that follows the summary.

#ifndef MIXTALK_TOPD_H_
#define MIXTALK_TOPD_H_

#include <map>
#include <string>
#include <vector>

#include "mixtalk/agents.h"
#include "mixtalk/catalog.h"
#include "mixtalk/meta_analysis.h"
#include "mixtalk/playbook.h"
#include "mixtalk/prompts.h"
#include "mixtalk/tournament.h"
#include "mixtalk/trace.h"

namespace mixtalk {

inline constexpr double kDefaultKeepFraction = 0.5;
inline constexpr double kBudgetHeadroom = 1.25;

// Traces whose acting agent is the oracle's pick for that (opponent, episode).
std::vector<EpisodeTrace> SampleOracleEpisodes(const std::vector<EpisodeTrace>& traces,
                                               const OraclePolicy& oracle);

// Keeps the ceil(keep_fraction * n) episodes with the highest opponent
// utility; ties by episode_id, then by opponent name. Throws ValidationError
// unless 0 < keep_fraction <= 1.
std::vector<EpisodeTrace> FilterByOpponentUtility(std::vector<EpisodeTrace> episodes,
                                                  double keep_fraction,
                                                  Role role = Role::kReceiver);

// Throws EmptySample for no episodes and EnvMismatch for mixed environments.
Playbook SummarizeStructure(const std::vector<EpisodeTrace>& episodes, const GameConfig& config);

// Budget cap for a mean number of tool calls: ceil(1.25 * mean), clamped to
// [1, budget].
int BudgetCap(double mean_budget, int verification_budget);

struct DistillOptions {
  Role role = Role::kReceiver;
  double keep_fraction = kDefaultKeepFraction;
  std::string target_agent;
};

// Full pipeline over a trace store: one playbook per environment that has
// oracle episodes. Filtering happens within each environment.
std::map<std::string, Playbook> Distill(const std::vector<EpisodeTrace>& traces,
                                        const ConfigLookup& lookup,
                                        const DistillOptions& options = {});

struct ReplayOptions {
  int jobs = 1;
  // Suffix appended to the receiver name in replayed traces.
  std::string receiver_suffix = "+playbook";
  std::shared_ptr<TextGenerator> generator;
  std::shared_ptr<const PromptTemplates> templates;
};

// Replays every trace of `source_receiver` against `receiver`, with the
// environment's playbook when one exists. Order follows `traces`.
std::vector<EpisodeTrace> ReplayWithPlaybooks(const std::vector<EpisodeTrace>& traces,
                                              const std::string& source_receiver,
                                              const AgentRef& receiver,
                                              const std::map<std::string, Playbook>& playbooks,
                                              Catalog& catalog,
                                              const ReplayOptions& options = {});

struct ReplaySummary {
  int episodes = 0;
  double mean_cost = 0.0;      // total tool cost per episode
  double mean_calls = 0.0;     // tool calls per episode
  double mean_judgment = 0.0;  // receiver judgment
  double mean_score_r = 0.0;
};

ReplaySummary SummarizeReceiverTraces(const std::vector<EpisodeTrace>& traces,
                                      const ConfigLookup& lookup);

}  // namespace mixtalk

#endif  // MIXTALK_TOPD_H_
