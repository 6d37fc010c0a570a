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

// Configuration and message types for one MixTalk environment variant, plus
// loading/validation of variant and story-layer files.
//
// A variant file is a single JSON object:
//
//   {
//     "env_id": "variables_12_v2",
//     "regime": "MIXTALK",                 // MIXTALK | CHEAPTALK | DISCLOSURE
//     "verification_budget": 4,
//     "tool_scale": 2.0, "claim_scale": 7,
//     "max_claims": 12, "max_claim_cost": 2.0, "max_tool_cost": 5.0,
//     "statement_max_tokens": 200,
//     "persuasion_weights": "sender",      // optional: sender | receiver
//     "attributes": [{"id": "V1", "verifiable": true,
//                     "sender_objective": "COOP",
//                     "weight_sender": 0.1, "weight_receiver": 0.09,
//                     "claim_cost": 0.05}, ...],
//     "tools": [{"tool_id": "T_V1", "attr_id": "V1", "cost": 0.5,
//                "kind": "PERFECT"}, ...],   // NOISY: noise_rate,
//                                            // AVAILABILITY: unavailable_rate
//     "prior": {"marginals": {"V1": [p0, p1, p2, p3, p4], ...},
//               "correlations": [{"a": "V3", "b": "U1", "rho": 0.6}],
//               "constraints": [{"lower": "U4", "upper": "V6"}]}
//   }
//
// A story file maps the same attribute ids to readable names:
//
//   {"story_id": "story_12_I", "scenario_text": "...",
//    "attr_names": {"V1": "Work authorization status", ...}}

#ifndef MIXTALK_GAME_MODEL_H_
#define MIXTALK_GAME_MODEL_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mixtalk {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

inline constexpr int kDomainMin = 0;
inline constexpr int kDomainMax = 4;
inline constexpr int kDomainSize = kDomainMax - kDomainMin + 1;
inline constexpr double kDomainSpan = kDomainMax - kDomainMin;

enum class Objective { kCoop, kUp };
enum class ToolKind { kPerfect, kNoisy, kAvailability };
enum class Regime { kMixTalk, kCheapTalk, kDisclosure };
enum class PersuasionWeights { kSender, kReceiver };
enum class Role { kSender, kReceiver };

std::string_view ToString(Objective v);
std::string_view ToString(ToolKind v);
std::string_view ToString(Regime v);
std::string_view ToString(PersuasionWeights v);
std::string_view ToString(Role v);
Objective ParseObjective(std::string_view s);
ToolKind ParseToolKind(std::string_view s);
// Accepts upper or lower case ("cheaptalk", "CHEAPTALK").
Regime ParseRegime(std::string_view s);
Role ParseRole(std::string_view s);

inline bool InDomain(int v) { return v >= kDomainMin && v <= kDomainMax; }

struct AttributeSpec {
  std::string id;
  bool verifiable = false;
  Objective sender_objective = Objective::kCoop;
  double weight_sender = 0.0;
  double weight_receiver = 0.0;
  double claim_cost = 0.0;

  bool operator==(const AttributeSpec&) const = default;
};

struct ToolSpec {
  std::string tool_id;
  std::string attr_id;
  double cost = 0.0;
  ToolKind kind = ToolKind::kPerfect;
  double noise_rate = 0.0;
  double unavailable_rate = 0.0;

  // PERFECT tools, and AVAILABILITY tools that resolve, can convict a lie.
  bool CanConvict() const { return kind != ToolKind::kNoisy; }

  bool operator==(const ToolSpec&) const = default;
};

struct Correlation {
  std::string a;
  std::string b;
  double rho = 0.0;

  bool operator==(const Correlation&) const = default;
};

// value(lower) <= value(upper) must hold for every sampled vector.
struct Constraint {
  std::string lower;
  std::string upper;

  bool operator==(const Constraint&) const = default;
};

using Marginal = std::array<double, kDomainSize>;

struct PriorStructure {
  // Index-aligned with `marginals`, and with GameConfig::attributes when the
  // prior belongs to a config.
  std::vector<std::string> attr_ids;
  std::vector<Marginal> marginals;
  std::vector<Correlation> correlations;
  std::vector<Constraint> constraints;

  // -1 when absent.
  int IndexOf(std::string_view id) const;
  std::size_t size() const { return attr_ids.size(); }

  bool operator==(const PriorStructure&) const = default;
};

struct GameConfig {
  std::string env_id;
  std::string description;
  std::vector<AttributeSpec> attributes;
  std::vector<ToolSpec> tools;
  int verification_budget = 1;
  double tool_scale = 1.0;
  double claim_scale = 1.0;
  int max_claims = 1;
  double max_claim_cost = 1.0;
  double max_tool_cost = 1.0;
  int statement_max_tokens = 1;
  PriorStructure prior;
  Regime regime = Regime::kMixTalk;
  PersuasionWeights persuasion_weights = PersuasionWeights::kSender;

  std::size_t size() const { return attributes.size(); }
  // -1 when absent.
  int IndexOf(std::string_view attr_id) const;
  // Throws UnknownAttribute.
  const AttributeSpec& Attribute(std::string_view attr_id) const;

  // Regime-adjusted views. CHEAPTALK zeroes claim costs and disables tools.
  double EffectiveClaimCost(std::size_t index) const;
  const std::vector<ToolSpec>& EffectiveTools() const;
  // nullptr when the attribute has no usable tool in this regime.
  const ToolSpec* FindTool(std::string_view attr_id) const;

  GameConfig WithRegime(Regime r) const;

  bool operator==(const GameConfig&) const = default;
};

// Validates every invariant and applies weight normalization in place.
// Throws ValidationError naming the offending field.
void ValidateConfig(GameConfig& config);

GameConfig ConfigFromJson(const Json& j);
OrderedJson ConfigToJson(const GameConfig& config);
GameConfig ParseConfig(std::string_view text);
GameConfig LoadConfig(const std::filesystem::path& path);

struct StoryLayer {
  std::string story_id;
  std::string scenario_text;
  std::map<std::string, std::string> attr_names;

  bool Covers(const GameConfig& config) const;
};

StoryLayer ParseStory(std::string_view text);
StoryLayer LoadStory(const std::filesystem::path& path);

// Hidden attribute vector, index-aligned with GameConfig::attributes.
struct ThetaVector {
  std::vector<int> values;

  int operator[](std::size_t i) const { return values[i]; }
  int& operator[](std::size_t i) { return values[i]; }
  std::size_t size() const { return values.size(); }
  bool operator==(const ThetaVector&) const = default;
};

// {"V1": 4, ...}; keys in config order.
OrderedJson ThetaToJson(const ThetaVector& theta, const GameConfig& config);
// Requires every attribute, in-domain integers, and no unknown ids.
ThetaVector ThetaFromJson(const Json& j, const GameConfig& config);

struct Claim {
  std::string attr_id;
  int value = 0;

  bool operator==(const Claim&) const = default;
};

struct Message {
  std::vector<Claim> claims;
  std::string statement;

  std::optional<int> ClaimedValue(std::string_view attr_id) const;
  bool operator==(const Message&) const = default;
};

// Throws UnknownAttribute, DuplicateClaim, OutOfDomainValue, TooManyClaims.
void ValidateMessage(const Message& message, const GameConfig& config);
// Character budget of 4 chars per token.
std::size_t StatementCharBudget(const GameConfig& config);
std::string TruncateStatement(std::string statement, const GameConfig& config);

OrderedJson MessageToJson(const Message& message);
// Structural parse only; see ValidateMessage for config checks.
Message MessageFromJson(const Json& j);

// What both agents see. Holds the regime-adjusted config.
struct PublicSpec {
  GameConfig config;
  std::string story_id;
  std::string scenario;
  std::vector<std::string> attr_names;  // config order
  ThetaVector prior_default;
  std::vector<double> prior_means;

  OrderedJson ToJson() const;
  std::string Serialize() const;
};

// Throws CoverageError when the story is missing a name.
PublicSpec RenderPublicSpec(const GameConfig& config, const StoryLayer& story);

}  // namespace mixtalk

#endif  // MIXTALK_GAME_MODEL_H_
