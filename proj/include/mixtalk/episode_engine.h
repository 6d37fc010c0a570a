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


// One MixTalk episode: sender message, budgeted receiver loop, tool outcomes
// and scoring.

#ifndef MIXTALK_EPISODE_ENGINE_H_
#define MIXTALK_EPISODE_ENGINE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mixtalk/agents.h"
#include "mixtalk/game_model.h"
#include "mixtalk/playbook.h"
#include "mixtalk/prior_sampler.h"
#include "mixtalk/seeding.h"
#include "mixtalk/trace.h"

namespace mixtalk {

ToolOutcome ApplyTool(const ToolSpec& tool, int true_value, Rng& rng);

// True iff an outcome that can convict (was_perfect) contradicts a claim.
bool DetectPerfectLie(const Message& message, const std::vector<ToolOutcome>& transcript);

double ClaimCostTotal(const Message& message, const GameConfig& config);
double ClaimPenalty(const Message& message, const GameConfig& config);
double CostRatio(const std::vector<ToolOutcome>& transcript, const GameConfig& config);

struct ReceiverScore {
  double err_ratio = 0.0;
  double cost_ratio = 0.0;
  double score_r = 0.0;
};

struct SenderScore {
  double persuasion = 0.0;
  double claim_penalty = 0.0;
  double score_s = 0.0;
};

ReceiverScore ScoreReceiver(const ThetaVector& theta_true, const ThetaVector& theta_hat,
                            const std::vector<ToolOutcome>& transcript, bool caught,
                            const GameConfig& config);
SenderScore ScoreSender(const ThetaVector& theta_true, const ThetaVector& theta_hat,
                        const Message& message, bool caught, const GameConfig& config);

// Lie detection plus both scores.
PayoffBreakdown ScoreEpisode(const Message& message, const std::vector<ToolOutcome>& transcript,
                             const ThetaVector& theta_true, const ThetaVector& theta_hat,
                             const GameConfig& config);

// A config paired with a story, with the derived pieces every episode needs.
struct Variant {
  GameConfig config;  // regime applied
  StoryLayer story;
  PublicSpec spec;
  std::shared_ptr<const PriorSampler> sampler;

  std::string env_id() const { return config.env_id; }
  std::string story_id() const { return story.story_id; }
};

Variant MakeVariant(const GameConfig& config, const StoryLayer& story);

// The hidden state of an episode depends only on the variant and the seed.
ThetaVector EpisodeTheta(const Variant& variant, uint64_t seed);

struct EpisodeOptions {
  // Optional playbook shown to the receiver; its budget_cap is enforced.
  const Playbook* playbook = nullptr;
};

// Throws AgentProtocolError if the sender cannot produce a valid message and
// RejectionExhausted from the prior. Receiver protocol failures end in a
// forced FINAL rather than an error.
EpisodeTrace RunEpisode(const Variant& variant, SenderAgent& sender, ReceiverAgent& receiver,
                        uint64_t seed, const std::string& episode_id,
                        const EpisodeOptions& options = {});

// Re-runs the receiver side of a stored episode on its original message and
// hidden state.
EpisodeTrace ReplayEpisode(const Variant& variant, const EpisodeTrace& original,
                           ReceiverAgent& receiver, const EpisodeOptions& options = {});

}  // namespace mixtalk

#endif  // MIXTALK_EPISODE_ENGINE_H_
