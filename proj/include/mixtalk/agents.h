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


// Sender and receiver policies: scripted baselines and remote text-generation
// agents, plus strict parsing of agent output.
//
// Scripted strategy ids (parameters after a colon):
//   senders:   honest, omit-low:t, exaggerate:k, fabricate:k, adaptive:k
//   receivers: trusting, prior-only, audit-greedy, audit-all-random
// Remote agents are written remote:<endpoint-name>.

#ifndef MIXTALK_AGENTS_H_
#define MIXTALK_AGENTS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixtalk/game_model.h"
#include "mixtalk/playbook.h"
#include "mixtalk/prompts.h"
#include "mixtalk/remote_client.h"
#include "mixtalk/trace.h"

namespace mixtalk {

enum class AgentKind { kScripted, kRemote };

struct AgentRef {
  std::string name;
  Role role = Role::kSender;
  AgentKind kind = AgentKind::kScripted;
  std::string strategy;  // scripted strategy id, or the endpoint name
  int param = 0;
  std::optional<EndpointConfig> endpoint;

  // Strategy and parameter, plus the implementation revision of scripted
  // policies; recorded in run manifests.
  std::string Version() const;
};

// Parses "omit-low:2", "trusting", "remote:gpt" and so on. Remote refs are
// resolved against `endpoints`. Throws ValidationError for unknown ids or
// strategies that do not fit the role.
AgentRef ParseAgentRef(std::string_view spec, Role role,
                       const std::map<std::string, EndpointConfig>& endpoints = {});

// What a receiver sees at each step.
struct Observation {
  const PublicSpec* spec = nullptr;
  // The message as delivered (claims overridden by truth where disclosed).
  const Message* message = nullptr;
  const std::vector<ToolOutcome>* transcript = nullptr;
  // Attributes whose true value was disclosed with the message.
  std::vector<std::string> disclosed;
  int remaining_budget = 0;
  const Playbook* playbook = nullptr;
  // Episode-specific stream for randomized receivers.
  uint64_t seed = 0;
};

struct ReceiverAction {
  enum class Kind { kCallTool, kFinal };
  Kind kind = Kind::kFinal;
  std::string attr_id;   // kCallTool
  ThetaVector estimate;  // kFinal

  static ReceiverAction CallTool(std::string attr_id);
  static ReceiverAction Final(ThetaVector estimate);
  bool operator==(const ReceiverAction&) const = default;
};

class SenderAgent {
 public:
  virtual ~SenderAgent() = default;
  virtual const std::string& name() const = 0;
  // Throws AgentProtocolError when no valid message can be produced.
  virtual Message Act(const ThetaVector& theta, const PublicSpec& spec, uint64_t seed) = 0;
};

class ReceiverAgent {
 public:
  virtual ~ReceiverAgent() = default;
  virtual const std::string& name() const = 0;
  // Throws AgentProtocolError when no valid action can be produced.
  virtual ReceiverAction Step(const Observation& obs) = 0;
};

// Builds the policy for a ref. `generator` overrides the HTTP client for
// remote refs (tests pass fakes). `templates` may be null for defaults.
std::unique_ptr<SenderAgent> MakeSender(const AgentRef& ref,
                                        std::shared_ptr<TextGenerator> generator = nullptr,
                                        std::shared_ptr<const PromptTemplates> templates = nullptr);
std::unique_ptr<ReceiverAgent> MakeReceiver(
    const AgentRef& ref, std::shared_ptr<TextGenerator> generator = nullptr,
    std::shared_ptr<const PromptTemplates> templates = nullptr);

// Final estimate from evidence: OK observations first (latest wins), then
// claims in the delivered message, then the prior default.
ThetaVector EvidenceEstimate(const PublicSpec& spec, const Message& message,
                             const std::vector<ToolOutcome>& transcript);

// Returns the first balanced {...} object in `text`, skipping braces inside
// strings. Throws ParseError when none exists.
std::string ExtractFirstJsonObject(std::string_view text);

// Strict parsers. Throws ParseError or one of its subclasses.
Message ParseSenderOutput(std::string_view text, const GameConfig& config);
ReceiverAction ParseReceiverOutput(std::string_view text, const GameConfig& config);

// Serializations the parsers accept, used by scripted agents' round-trip
// checks and by test doubles.
std::string SerializeReceiverAction(const ReceiverAction& action, const GameConfig& config);

}  // namespace mixtalk

#endif  // MIXTALK_AGENTS_H_
