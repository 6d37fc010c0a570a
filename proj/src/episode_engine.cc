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


#include "mixtalk/episode_engine.h"

#include <algorithm>
#include <cmath>

#include "mixtalk/errors.h"
#include "spdlog/spdlog.h"

namespace mixtalk {
namespace {

double UpTerm(int value) { return (value - kDomainMin) / kDomainSpan; }

uint64_t ReplaySeed(const EpisodeTrace& t) {
  return t.seed ? *t.seed : Mix64(Fnv1a64(t.episode_id));
}

EpisodeTrace RunReceiverSide(const Variant& variant, const Message& message,
                             const ThetaVector& theta, uint64_t seed, ReceiverAgent& receiver,
                             const EpisodeOptions& options) {
  const GameConfig& config = variant.config;
  const PublicSpec& spec = variant.spec;
  if (options.playbook != nullptr && options.playbook->env_id != config.env_id) {
    throw EnvMismatch("playbook for " + options.playbook->env_id + " used on " + config.env_id);
  }

  // Disclosure replaces claimed verifiable values with the truth, at no cost.
  Message delivered = message;
  std::vector<std::string> disclosed;
  if (config.regime == Regime::kDisclosure) {
    for (Claim& c : delivered.claims) {
      const int i = config.IndexOf(c.attr_id);
      if (config.attributes[i].verifiable) {
        c.value = theta[i];
        disclosed.push_back(c.attr_id);
      }
    }
  }

  int limit = config.EffectiveTools().empty() ? 0 : config.verification_budget;
  if (options.playbook != nullptr) limit = std::min(limit, options.playbook->budget_cap);

  std::vector<ToolOutcome> transcript;
  Rng tool_rng(DeriveSeed(seed, "tools"));
  Observation obs;
  obs.spec = &spec;
  obs.message = &delivered;
  obs.transcript = &transcript;
  obs.disclosed = disclosed;
  obs.playbook = options.playbook;
  obs.seed = DeriveSeed(seed, "receiver");

  std::optional<ThetaVector> estimate;
  while (!estimate) {
    obs.remaining_budget = limit - static_cast<int>(transcript.size());
    ReceiverAction action;
    try {
      action = receiver.Step(obs);
      if (action.kind == ReceiverAction::Kind::kCallTool && obs.remaining_budget <= 0) {
        throw BudgetViolation(receiver.name() + " called a tool with no budget left");
      }
    } catch (const AgentProtocolError& e) {
      spdlog::debug("forcing FINAL: {}", e.what());
      break;
    } catch (const BudgetViolation& e) {
      spdlog::debug("forcing FINAL: {}", e.what());
      break;
    }
    if (action.kind == ReceiverAction::Kind::kFinal) {
      const bool complete =
          action.estimate.size() == config.size() &&
          std::all_of(action.estimate.values.begin(), action.estimate.values.end(), InDomain);
      if (complete) estimate = action.estimate;
      break;
    }
    const ToolSpec* tool = config.FindTool(action.attr_id);
    if (tool == nullptr) {
      spdlog::debug("forcing FINAL: no tool for {}", action.attr_id);
      break;
    }
    transcript.push_back(ApplyTool(*tool, theta[config.IndexOf(action.attr_id)], tool_rng));
  }
  ThetaVector theta_hat = estimate ? *estimate : EvidenceEstimate(spec, delivered, transcript);
  for (const std::string& attr : disclosed) {
    const int i = config.IndexOf(attr);
    theta_hat[i] = theta[i];
  }

  EpisodeTrace t;
  t.env_id = config.env_id;
  t.story_id = variant.story.story_id;
  t.receiver_ref = receiver.name();
  t.seed = seed;
  t.regime = config.regime;
  t.budget_cap = options.playbook != nullptr ? options.playbook->budget_cap : 0;
  t.message = message;
  t.tool_transcript = std::move(transcript);
  t.theta_true = theta;
  t.theta_hat = std::move(theta_hat);
  t.payoffs = ScoreEpisode(t.message, t.tool_transcript, t.theta_true, t.theta_hat, config);
  return t;
}

}  // namespace

ToolOutcome ApplyTool(const ToolSpec& tool, int true_value, Rng& rng) {
  ToolOutcome out;
  out.attr_id = tool.attr_id;
  out.tool_id = tool.tool_id;
  out.cost_charged = tool.cost;
  switch (tool.kind) {
    case ToolKind::kPerfect:
      out.observed_value = true_value;
      out.was_perfect = true;
      break;
    case ToolKind::kNoisy:
      if (Uniform01(rng) < tool.noise_rate) {
        // Uniform over the other four values.
        const int k = kDomainMin + static_cast<int>(Uniform01(rng) * (kDomainSize - 1));
        out.observed_value = k < true_value ? k : k + 1;
      } else {
        out.observed_value = true_value;
      }
      break;
    case ToolKind::kAvailability:
      if (Uniform01(rng) < tool.unavailable_rate) {
        out.status = ToolStatus::kUnavailable;
      } else {
        out.observed_value = true_value;
        out.was_perfect = true;
      }
      break;
  }
  return out;
}

bool DetectPerfectLie(const Message& message, const std::vector<ToolOutcome>& transcript) {
  for (const ToolOutcome& o : transcript) {
    if (!o.was_perfect || o.status != ToolStatus::kOk || !o.observed_value) continue;
    const std::optional<int> claimed = message.ClaimedValue(o.attr_id);
    if (claimed && *claimed != *o.observed_value) return true;
  }
  return false;
}

double ClaimCostTotal(const Message& message, const GameConfig& config) {
  double total = 0.0;
  for (const Claim& c : message.claims) {
    const int i = config.IndexOf(c.attr_id);
    if (i < 0) throw UnknownAttribute("claim on unknown attribute '" + c.attr_id + "'");
    total += config.EffectiveClaimCost(i);
  }
  return total;
}

double ClaimPenalty(const Message& message, const GameConfig& config) {
  const double cap = config.max_claims * config.max_claim_cost;
  if (cap <= 0.0) return 0.0;
  return config.claim_scale * std::min(ClaimCostTotal(message, config), cap) / cap;
}

double CostRatio(const std::vector<ToolOutcome>& transcript, const GameConfig& config) {
  const double denom = config.max_tool_cost * config.verification_budget;
  if (transcript.empty() || denom <= 0.0) return 0.0;
  double total = 0.0;
  for (const ToolOutcome& o : transcript) total += o.cost_charged;
  return total / denom;
}

ReceiverScore ScoreReceiver(const ThetaVector& theta_true, const ThetaVector& theta_hat,
                            const std::vector<ToolOutcome>& transcript, bool caught,
                            const GameConfig& config) {
  ReceiverScore s;
  if (!caught) {
    for (std::size_t i = 0; i < config.size(); ++i) {
      const AttributeSpec& a = config.attributes[i];
      const double dif = a.sender_objective == Objective::kCoop
                             ? (theta_hat[i] != theta_true[i] ? 1.0 : 0.0)
                             : std::abs(theta_hat[i] - theta_true[i]) / kDomainSpan;
      s.err_ratio += a.weight_receiver * dif;
    }
  }
  s.cost_ratio = CostRatio(transcript, config);
  s.score_r = (1.0 - s.err_ratio) - config.tool_scale * s.cost_ratio;
  return s;
}

SenderScore ScoreSender(const ThetaVector& theta_true, const ThetaVector& theta_hat,
                        const Message& message, bool caught, const GameConfig& config) {
  SenderScore s;
  if (!caught) {
    for (std::size_t i = 0; i < config.size(); ++i) {
      const AttributeSpec& a = config.attributes[i];
      const double w = config.persuasion_weights == PersuasionWeights::kSender
                           ? a.weight_sender
                           : a.weight_receiver;
      const double term = a.sender_objective == Objective::kCoop
                              ? (theta_hat[i] == theta_true[i] ? 1.0 : 0.0)
                              : UpTerm(theta_hat[i]);
      s.persuasion += w * term;
    }
  }
  s.claim_penalty = ClaimPenalty(message, config);
  s.score_s = s.persuasion - s.claim_penalty;
  return s;
}

PayoffBreakdown ScoreEpisode(const Message& message, const std::vector<ToolOutcome>& transcript,
                             const ThetaVector& theta_true, const ThetaVector& theta_hat,
                             const GameConfig& config) {
  PayoffBreakdown p;
  p.caught_lie_perfect = DetectPerfectLie(message, transcript);
  const ReceiverScore r =
      ScoreReceiver(theta_true, theta_hat, transcript, p.caught_lie_perfect, config);
  const SenderScore s = ScoreSender(theta_true, theta_hat, message, p.caught_lie_perfect, config);
  p.err_ratio = r.err_ratio;
  p.cost_ratio = r.cost_ratio;
  p.score_r = r.score_r;
  p.persuasion = s.persuasion;
  p.claim_penalty = s.claim_penalty;
  p.score_s = s.score_s;
  return p;
}

Variant MakeVariant(const GameConfig& config, const StoryLayer& story) {
  Variant v;
  v.config = config;
  v.story = story;
  v.spec = RenderPublicSpec(config, story);
  v.sampler = std::make_shared<const PriorSampler>(config.prior);
  return v;
}

ThetaVector EpisodeTheta(const Variant& variant, uint64_t seed) {
  return variant.sampler->Sample(DeriveSeed(seed, "theta"));
}

EpisodeTrace RunEpisode(const Variant& variant, SenderAgent& sender, ReceiverAgent& receiver,
                        uint64_t seed, const std::string& episode_id,
                        const EpisodeOptions& options) {
  const ThetaVector theta = EpisodeTheta(variant, seed);
  Message message;
  try {
    message = sender.Act(theta, variant.spec, DeriveSeed(seed, "sender"));
    ValidateMessage(message, variant.config);
  } catch (const AgentProtocolError&) {
    throw;
  } catch (const Error& e) {
    throw AgentProtocolError(sender.name() + ": invalid message: " + e.what());
  }
  message.statement = TruncateStatement(std::move(message.statement), variant.config);
  EpisodeTrace t = RunReceiverSide(variant, message, theta, seed, receiver, options);
  t.episode_id = episode_id;
  t.sender_ref = sender.name();
  return t;
}

EpisodeTrace ReplayEpisode(const Variant& variant, const EpisodeTrace& original,
                           ReceiverAgent& receiver, const EpisodeOptions& options) {
  if (original.env_id != variant.config.env_id) {
    throw EnvMismatch("trace " + original.episode_id + " is from " + original.env_id);
  }
  EpisodeTrace t = RunReceiverSide(variant, original.message, original.theta_true,
                                   ReplaySeed(original), receiver, options);
  t.episode_id = original.episode_id;
  t.sender_ref = original.sender_ref;
  t.story_id = original.story_id;
  t.seed = original.seed;
  return t;
}

}  // namespace mixtalk
