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


// Trace-level credibility metrics for both roles and the cogency judge.
//
// D_dist(a, b) = |a - b| / 4 measures a discrepancy (fabrication,
// exaggeration); D_acc = 1 - D_dist measures accuracy (judgment).

#ifndef MIXTALK_BEHAVIOR_METRICS_H_
#define MIXTALK_BEHAVIOR_METRICS_H_

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mixtalk/game_model.h"
#include "mixtalk/prompts.h"
#include "mixtalk/remote_client.h"
#include "mixtalk/trace.h"

namespace mixtalk {

struct SenderBehavior {
  // Negated total claim cost; scale depends on the variant.
  double frugality = 0.0;
  // frugality divided by the claim cap max_claims * max_claim_cost.
  double frugality_normalized = 0.0;
  double omission = 0.0;
  double fabrication = 0.0;
  double exaggeration = 0.0;
  double cogency = 0.0;
};

struct ReceiverBehavior {
  double frugality = 0.0;
  double skepticism = 0.0;
  // Signed: negative values mean optimism about omitted attributes.
  double pessimism = 0.0;
  double paranoia = 0.0;
  double judgment = 0.0;
};

double DistDiscrepancy(int a, int b);
double DistAccuracy(int a, int b);

class Judge {
 public:
  virtual ~Judge() = default;
  // Raw score; JudgeCogency clamps. Throws JudgeUnavailable.
  virtual double Score(const Message& message, const ThetaVector& theta,
                       const PublicSpec& spec) = 0;
  virtual std::string Describe() const = 0;
};

class ConstantJudge : public Judge {
 public:
  explicit ConstantJudge(double value) : value_(value) {}
  double Score(const Message&, const ThetaVector&, const PublicSpec&) override { return value_; }
  std::string Describe() const override;

 private:
  double value_;
};

// Text-only proxy: rewards a statement that names the claimed attributes and
// has some substance, capped at 5.
class HeuristicJudge : public Judge {
 public:
  double Score(const Message& message, const ThetaVector& theta,
               const PublicSpec& spec) override;
  std::string Describe() const override { return "heuristic"; }
};

// Renders the rubric prompt and reads the first number of the reply.
class RemoteJudge : public Judge {
 public:
  RemoteJudge(std::shared_ptr<TextGenerator> generator,
              std::shared_ptr<const PromptTemplates> templates = nullptr);
  double Score(const Message& message, const ThetaVector& theta,
               const PublicSpec& spec) override;
  std::string Describe() const override { return "remote:" + generator_->Describe(); }

 private:
  std::shared_ptr<TextGenerator> generator_;
  std::shared_ptr<const PromptTemplates> templates_;
};

// Clamped to [0, 5]; 0 when `judge` is null or unavailable.
double JudgeCogency(Judge* judge, const Message& message, const ThetaVector& theta,
                    const PublicSpec& spec);

// `spec` is needed only for the judge and may be null when `judge` is null.
SenderBehavior ComputeSenderMetrics(const EpisodeTrace& trace, const GameConfig& config,
                                    Judge* judge = nullptr, const PublicSpec* spec = nullptr);
ReceiverBehavior ComputeReceiverMetrics(const EpisodeTrace& trace, const GameConfig& config);

// Means over traces, keyed by (agent, env_id). The env key "ALL" holds the
// mean over every trace of the agent.
inline constexpr const char* kAllEnvs = "ALL";

struct BehaviorTables {
  std::map<std::pair<std::string, std::string>, SenderBehavior> sender;
  std::map<std::pair<std::string, std::string>, ReceiverBehavior> receiver;
  std::map<std::pair<std::string, std::string>, int> sender_counts;
  std::map<std::pair<std::string, std::string>, int> receiver_counts;
};

// Public spec an episode was played under; needed only when judging.
using SpecLookup = std::function<const PublicSpec&(const EpisodeTrace&)>;

// Cogency is judged only when both `judge` and `spec_for` are set.
BehaviorTables AggregateBehavior(const std::vector<EpisodeTrace>& traces,
                                 const ConfigLookup& lookup, Judge* judge = nullptr,
                                 const SpecLookup& spec_for = nullptr);

}  // namespace mixtalk

#endif  // MIXTALK_BEHAVIOR_METRICS_H_
