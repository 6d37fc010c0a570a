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


#include "mixtalk/agents.h"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <set>

#include "mixtalk/errors.h"
#include "mixtalk/seeding.h"

namespace mixtalk {
namespace {

constexpr int kScriptedRevision = 1;
constexpr int kMaxOutputAttempts = 3;

const std::set<std::string, std::less<>> kSenderStrategies = {
    "honest", "omit-low", "exaggerate", "fabricate", "adaptive"};
const std::set<std::string, std::less<>> kReceiverStrategies = {
    "trusting", "prior-only", "audit-greedy", "audit-all-random"};

int DefaultParam(std::string_view strategy) {
  if (strategy == "omit-low") return 2;
  if (strategy == "exaggerate" || strategy == "fabricate" || strategy == "adaptive") return 1;
  return 0;
}

bool TakesParam(std::string_view strategy) { return DefaultParam(strategy) != 0; }

// Short cover note naming the claimed attributes.
std::string ScriptedStatement(const PublicSpec& spec, const std::vector<Claim>& claims) {
  if (claims.empty()) return "I prefer to keep the details private for now.";
  std::string out = "Here is an overview covering ";
  for (std::size_t i = 0; i < claims.size(); ++i) {
    const int idx = spec.config.IndexOf(claims[i].attr_id);
    if (i > 0) out += (i + 1 == claims.size()) ? " and " : ", ";
    out += spec.attr_names[idx];
  }
  out += ". Supporting records are available on request.";
  return out;
}

bool IsUp(const AttributeSpec& a) { return a.sender_objective == Objective::kUp; }

class ScriptedSender : public SenderAgent {
 public:
  explicit ScriptedSender(AgentRef ref) : ref_(std::move(ref)) {}

  const std::string& name() const override { return ref_.name; }

  Message Act(const ThetaVector& theta, const PublicSpec& spec, uint64_t) override {
    const GameConfig& config = spec.config;
    const int k = ref_.param;
    Message m;
    for (std::size_t i = 0; i < config.size(); ++i) {
      const AttributeSpec& a = config.attributes[i];
      const int truth = theta[i];
      int value = truth;
      bool include = true;
      if (ref_.strategy == "omit-low") {
        include = !IsUp(a) || truth >= k;
      } else if (ref_.strategy == "exaggerate") {
        if (IsUp(a) && !a.verifiable) value = std::min(truth + k, kDomainMax);
      } else if (ref_.strategy == "fabricate") {
        if (IsUp(a) && a.verifiable) value = std::min(truth + k, kDomainMax);
      } else if (ref_.strategy == "adaptive") {
        if (IsUp(a) && InflatesUnder(config, a)) value = std::min(truth + k, kDomainMax);
      }
      if (include) m.claims.push_back({a.id, value});
    }
    if (m.claims.size() > static_cast<std::size_t>(config.max_claims)) {
      m.claims.resize(config.max_claims);
    }
    m.statement = ScriptedStatement(spec, m.claims);
    return m;
  }

 private:
  // The credibility-aware sender inflates only where a lie cannot be exposed
  // in the active regime.
  static bool InflatesUnder(const GameConfig& config, const AttributeSpec& a) {
    if (!a.verifiable) return true;
    switch (config.regime) {
      case Regime::kCheapTalk:
        return true;
      case Regime::kDisclosure:
        return false;
      case Regime::kMixTalk: {
        const ToolSpec* tool = config.FindTool(a.id);
        return tool == nullptr || !tool->CanConvict();
      }
    }
    return false;
  }

  AgentRef ref_;
};

std::set<std::string> Queried(const Observation& obs) {
  std::set<std::string> out;
  for (const ToolOutcome& o : *obs.transcript) out.insert(o.attr_id);
  return out;
}

bool Disclosed(const Observation& obs, const std::string& attr) {
  return std::find(obs.disclosed.begin(), obs.disclosed.end(), attr) != obs.disclosed.end();
}

// Seeded coin for a playbook-following auditor: verify `attr` iff u < p.
bool PlaybookAllows(const Observation& obs, const std::string& attr) {
  if (obs.playbook == nullptr) return true;
  Rng rng(DeriveSeed(obs.seed, "playbook:" + attr));
  return Uniform01(rng) < obs.playbook->Propensity(attr);
}

class ScriptedReceiver : public ReceiverAgent {
 public:
  explicit ScriptedReceiver(AgentRef ref) : ref_(std::move(ref)) {}

  const std::string& name() const override { return ref_.name; }

  ReceiverAction Step(const Observation& obs) override {
    const PublicSpec& spec = *obs.spec;
    if (ref_.strategy == "prior-only") return ReceiverAction::Final(spec.prior_default);
    if (ref_.strategy == "trusting") {
      return ReceiverAction::Final(EvidenceEstimate(spec, *obs.message, {}));
    }
    if (obs.remaining_budget > 0) {
      const std::vector<std::string> plan = ref_.strategy == "audit-greedy"
                                                ? GreedyPlan(obs)
                                                : RandomPlan(obs);
      const std::set<std::string> queried = Queried(obs);
      for (const std::string& attr : plan) {
        if (queried.count(attr) == 0) return ReceiverAction::CallTool(attr);
      }
    }
    return ReceiverAction::Final(EvidenceEstimate(spec, *obs.message, *obs.transcript));
  }

 private:
  // Claimed verifiable attributes with a tool, by receiver weight per unit
  // cost, descending.
  static std::vector<std::string> GreedyPlan(const Observation& obs) {
    const GameConfig& config = obs.spec->config;
    std::vector<std::pair<double, std::string>> ranked;
    for (const Claim& c : obs.message->claims) {
      const ToolSpec* tool = config.FindTool(c.attr_id);
      if (tool == nullptr || Disclosed(obs, c.attr_id) || !PlaybookAllows(obs, c.attr_id)) {
        continue;
      }
      const double w = config.Attribute(c.attr_id).weight_receiver;
      const double ratio =
          tool->cost > 0.0 ? w / tool->cost : std::numeric_limits<double>::infinity();
      ranked.emplace_back(ratio, c.attr_id);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::vector<std::string> out;
    for (auto& r : ranked) out.push_back(std::move(r.second));
    return out;
  }

  // Every tool in a seeded random order. With a playbook, only claimed
  // attributes that pass the propensity coin.
  static std::vector<std::string> RandomPlan(const Observation& obs) {
    const GameConfig& config = obs.spec->config;
    std::vector<std::string> attrs;
    for (const ToolSpec& t : config.EffectiveTools()) {
      if (Disclosed(obs, t.attr_id)) continue;
      if (obs.playbook != nullptr &&
          (!obs.message->ClaimedValue(t.attr_id) || !PlaybookAllows(obs, t.attr_id))) {
        continue;
      }
      attrs.push_back(t.attr_id);
    }
    Rng rng(DeriveSeed(obs.seed, "audit-order"));
    // Fisher-Yates with our own uniform draws for portability.
    for (std::size_t i = attrs.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(Uniform01(rng) * static_cast<double>(i));
      std::swap(attrs[i - 1], attrs[std::min(j, i - 1)]);
    }
    return attrs;
  }

  AgentRef ref_;
};

class RemoteSender : public SenderAgent {
 public:
  RemoteSender(AgentRef ref, std::shared_ptr<TextGenerator> generator,
               std::shared_ptr<const PromptTemplates> templates)
      : ref_(std::move(ref)), generator_(std::move(generator)), templates_(std::move(templates)) {}

  const std::string& name() const override { return ref_.name; }

  Message Act(const ThetaVector& theta, const PublicSpec& spec, uint64_t) override {
    const std::string prompt = RenderSenderPrompt(*templates_, spec, theta);
    std::string last_error;
    for (int attempt = 1; attempt <= kMaxOutputAttempts; ++attempt) {
      const std::string text = generator_->Generate(
          attempt == 1 ? prompt
                       : prompt + "\nYour previous output was rejected: " + last_error +
                             "\nReturn one valid JSON object.\n");
      try {
        return ParseSenderOutput(text, spec.config);
      } catch (const ParseError& e) {
        last_error = e.what();
      }
    }
    throw AgentProtocolError(ref_.name + ": no valid message after " +
                             std::to_string(kMaxOutputAttempts) + " attempts: " + last_error);
  }

 private:
  AgentRef ref_;
  std::shared_ptr<TextGenerator> generator_;
  std::shared_ptr<const PromptTemplates> templates_;
};

class RemoteReceiver : public ReceiverAgent {
 public:
  RemoteReceiver(AgentRef ref, std::shared_ptr<TextGenerator> generator,
                 std::shared_ptr<const PromptTemplates> templates)
      : ref_(std::move(ref)), generator_(std::move(generator)), templates_(std::move(templates)) {}

  const std::string& name() const override { return ref_.name; }

  ReceiverAction Step(const Observation& obs) override {
    // The whole transcript is resent each step; there is no hidden state.
    const std::string prompt = RenderReceiverPrompt(*templates_, *obs.spec, *obs.message,
                                                    *obs.transcript, obs.remaining_budget,
                                                    obs.playbook);
    std::string last_error;
    for (int attempt = 1; attempt <= kMaxOutputAttempts; ++attempt) {
      const std::string text = generator_->Generate(
          attempt == 1 ? prompt
                       : prompt + "\nYour previous output was rejected: " + last_error +
                             "\nReturn one valid JSON object.\n");
      try {
        return ParseReceiverOutput(text, obs.spec->config);
      } catch (const ParseError& e) {
        last_error = e.what();
      }
    }
    throw AgentProtocolError(ref_.name + ": no valid action after " +
                             std::to_string(kMaxOutputAttempts) + " attempts: " + last_error);
  }

 private:
  AgentRef ref_;
  std::shared_ptr<TextGenerator> generator_;
  std::shared_ptr<const PromptTemplates> templates_;
};

std::shared_ptr<TextGenerator> GeneratorFor(const AgentRef& ref,
                                            std::shared_ptr<TextGenerator> generator) {
  if (generator) return generator;
  if (!ref.endpoint) throw ValidationError("agent", ref.name + " has no endpoint");
  return std::make_shared<ChatCompletionClient>(*ref.endpoint);
}

std::shared_ptr<const PromptTemplates> TemplatesOrDefault(
    std::shared_ptr<const PromptTemplates> templates) {
  if (templates) return templates;
  return std::make_shared<const PromptTemplates>(DefaultTemplates());
}

}  // namespace

std::string AgentRef::Version() const {
  if (kind == AgentKind::kRemote) {
    return "remote/" + strategy + "/" + (endpoint ? endpoint->model : std::string("?"));
  }
  std::string out = "scripted/" + strategy;
  if (TakesParam(strategy)) out += ":" + std::to_string(param);
  return out + "@r" + std::to_string(kScriptedRevision);
}

AgentRef ParseAgentRef(std::string_view spec, Role role,
                       const std::map<std::string, EndpointConfig>& endpoints) {
  AgentRef ref;
  ref.name = std::string(spec);
  ref.role = role;
  const std::size_t colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view tail =
      colon == std::string_view::npos ? std::string_view() : spec.substr(colon + 1);
  if (head == "remote") {
    auto it = endpoints.find(std::string(tail));
    if (tail.empty() || it == endpoints.end()) {
      throw ValidationError("agent", "unknown endpoint in '" + ref.name + "'");
    }
    ref.kind = AgentKind::kRemote;
    ref.strategy = std::string(tail);
    ref.endpoint = it->second;
    return ref;
  }
  const auto& known = role == Role::kSender ? kSenderStrategies : kReceiverStrategies;
  if (known.count(head) == 0) {
    throw ValidationError("agent", "unknown " + std::string(ToString(role)) + " strategy '" +
                                       ref.name + "'");
  }
  ref.strategy = std::string(head);
  ref.param = DefaultParam(head);
  if (!tail.empty()) {
    if (!TakesParam(head)) {
      throw ValidationError("agent", "strategy '" + ref.strategy + "' takes no parameter");
    }
    int value = 0;
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), value);
    if (ec != std::errc() || ptr != tail.data() + tail.size() || !InDomain(value)) {
      throw ValidationError("agent", "bad parameter in '" + ref.name + "'");
    }
    ref.param = value;
  }
  return ref;
}

ReceiverAction ReceiverAction::CallTool(std::string attr_id) {
  ReceiverAction a;
  a.kind = Kind::kCallTool;
  a.attr_id = std::move(attr_id);
  return a;
}

ReceiverAction ReceiverAction::Final(ThetaVector estimate) {
  ReceiverAction a;
  a.kind = Kind::kFinal;
  a.estimate = std::move(estimate);
  return a;
}

std::unique_ptr<SenderAgent> MakeSender(const AgentRef& ref,
                                        std::shared_ptr<TextGenerator> generator,
                                        std::shared_ptr<const PromptTemplates> templates) {
  if (ref.role != Role::kSender) throw ValidationError("agent", ref.name + " is not a sender");
  if (ref.kind == AgentKind::kScripted) return std::make_unique<ScriptedSender>(ref);
  return std::make_unique<RemoteSender>(ref, GeneratorFor(ref, std::move(generator)),
                                        TemplatesOrDefault(std::move(templates)));
}

std::unique_ptr<ReceiverAgent> MakeReceiver(const AgentRef& ref,
                                            std::shared_ptr<TextGenerator> generator,
                                            std::shared_ptr<const PromptTemplates> templates) {
  if (ref.role != Role::kReceiver) {
    throw ValidationError("agent", ref.name + " is not a receiver");
  }
  if (ref.kind == AgentKind::kScripted) return std::make_unique<ScriptedReceiver>(ref);
  return std::make_unique<RemoteReceiver>(ref, GeneratorFor(ref, std::move(generator)),
                                          TemplatesOrDefault(std::move(templates)));
}

ThetaVector EvidenceEstimate(const PublicSpec& spec, const Message& message,
                             const std::vector<ToolOutcome>& transcript) {
  ThetaVector out = spec.prior_default;
  for (const Claim& c : message.claims) {
    const int i = spec.config.IndexOf(c.attr_id);
    if (i >= 0 && InDomain(c.value)) out[i] = c.value;
  }
  for (const ToolOutcome& o : transcript) {
    const int i = spec.config.IndexOf(o.attr_id);
    if (i >= 0 && o.status == ToolStatus::kOk && o.observed_value) out[i] = *o.observed_value;
  }
  return out;
}

std::string ExtractFirstJsonObject(std::string_view text) {
  for (std::size_t start = text.find('{'); start != std::string_view::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        return std::string(text.substr(start, i - start + 1));
      }
    }
  }
  throw ParseError("no JSON object found in agent output");
}

namespace {

Json ParseObject(std::string_view text) {
  const std::string object = ExtractFirstJsonObject(text);
  try {
    return Json::parse(object);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON object: ") + e.what());
  }
}

}  // namespace

Message ParseSenderOutput(std::string_view text, const GameConfig& config) {
  Message m = MessageFromJson(ParseObject(text));
  try {
    ValidateMessage(m, config);
  } catch (const UnknownAttribute& e) {
    throw ParseError(e.what());
  }
  return m;
}

ReceiverAction ParseReceiverOutput(std::string_view text, const GameConfig& config) {
  const Json j = ParseObject(text);
  if (!j.contains("action") || !j.at("action").is_string()) {
    throw ParseError("missing string 'action'");
  }
  const std::string action = j.at("action").get<std::string>();
  if (action == "CALL_TOOL") {
    if (!j.contains("tool") || !j.at("tool").is_object() || !j.at("tool").contains("attr_id") ||
        !j.at("tool").at("attr_id").is_string()) {
      throw ParseError("CALL_TOOL needs tool.attr_id");
    }
    const std::string attr = j.at("tool").at("attr_id").get<std::string>();
    if (config.FindTool(attr) == nullptr) throw UnknownTool("no tool for attribute '" + attr + "'");
    return ReceiverAction::CallTool(attr);
  }
  if (action == "FINAL") {
    if (!j.contains("estimate")) throw ParseError("FINAL needs 'estimate'");
    return ReceiverAction::Final(ThetaFromJson(j.at("estimate"), config));
  }
  throw ParseError("unknown action '" + action + "'");
}

std::string SerializeReceiverAction(const ReceiverAction& action, const GameConfig& config) {
  OrderedJson j;
  if (action.kind == ReceiverAction::Kind::kCallTool) {
    j["action"] = "CALL_TOOL";
    j["tool"] = {{"attr_id", action.attr_id}};
  } else {
    j["action"] = "FINAL";
    j["estimate"] = ThetaToJson(action.estimate, config);
  }
  return j.dump();
}

}  // namespace mixtalk
