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


#include "mixtalk/prompts.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mixtalk/errors.h"

namespace mixtalk {
namespace {

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string TwoDecimals(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", p);
  return buf;
}

OrderedJson TranscriptJson(const std::vector<ToolOutcome>& transcript) {
  OrderedJson out = OrderedJson::array();
  for (const ToolOutcome& o : transcript) {
    out.push_back({{"attr_id", o.attr_id},
                   {"tool_id", o.tool_id},
                   {"cost", o.cost_charged},
                   {"observed_value", o.observed_value ? OrderedJson(*o.observed_value)
                                                       : OrderedJson()},
                   {"status", ToString(o.status)}});
  }
  return out;
}

}  // namespace

const PromptTemplates& DefaultTemplates() {
  static const PromptTemplates kDefaults{std::string(EmbeddedAsset("sender_v1.txt")),
                                         std::string(EmbeddedAsset("receiver_v1.txt")),
                                         std::string(EmbeddedAsset("judge_v1.txt"))};
  return kDefaults;
}

PromptTemplates LoadTemplates(const std::filesystem::path& dir) {
  PromptTemplates t = DefaultTemplates();
  if (std::filesystem::exists(dir / "sender_v1.txt")) t.sender = ReadText(dir / "sender_v1.txt");
  if (std::filesystem::exists(dir / "receiver_v1.txt")) {
    t.receiver = ReadText(dir / "receiver_v1.txt");
  }
  if (std::filesystem::exists(dir / "judge_v1.txt")) t.judge = ReadText(dir / "judge_v1.txt");
  return t;
}

std::string FillTemplate(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    if (tmpl.find("{" + key + "}") == std::string_view::npos) {
      throw TemplateError("template has no placeholder {" + key + "}");
    }
  }
  // Single pass, so substituted text is never rescanned.
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find('{', pos);
    if (open == std::string_view::npos) break;
    const std::size_t close = tmpl.find('}', open + 1);
    if (close == std::string_view::npos) break;
    auto it = values.find(std::string(tmpl.substr(open + 1, close - open - 1)));
    if (it == values.end()) {
      out.append(tmpl.substr(pos, open + 1 - pos));
      pos = open + 1;
      continue;
    }
    out.append(tmpl.substr(pos, open - pos));
    out.append(it->second);
    pos = close + 1;
  }
  out.append(tmpl.substr(pos));
  return out;
}

std::string RenderSenderPrompt(const PromptTemplates& templates, const PublicSpec& spec,
                               const ThetaVector& theta) {
  std::string out = FillTemplate(
      templates.sender,
      {{"STATEMENT_MAX_TOKENS", std::to_string(spec.config.statement_max_tokens)},
       {"MAX_CLAIMS", std::to_string(spec.config.max_claims)}});
  out += "\n\nPUBLIC SPECIFICATION:\n";
  out += spec.Serialize();
  out += "\n\nYOUR PRIVATE TRUE VALUES:\n";
  out += ThetaToJson(theta, spec.config).dump();
  out += "\n";
  return out;
}

std::string PlaybookGuidance(const Playbook& playbook) {
  std::string out = "\n\n=== PLAYBOOK GUIDANCE (" + playbook.env_id + ") ===\n";
  if (!playbook.propensities.empty()) {
    out += "When the sender claims one of these attributes, verify it with roughly the given "
           "probability:\n";
    for (const auto& [attr, p] : playbook.propensities) {
      out += "- " + attr + ": verify with probability ~" + TwoDecimals(p) + " when claimed\n";
    }
    out += "- any other claimed verifiable attribute: verify with probability ~" +
           TwoDecimals(playbook.fallback_rate) + "\n";
  }
  out += "Use at most " + std::to_string(playbook.budget_cap) + " tool calls in this episode.\n";
  out += "=== END PLAYBOOK GUIDANCE ===";
  return out;
}

std::string InjectPlaybook(std::string_view base_prompt, const Playbook& playbook,
                           const PublicSpec& spec) {
  if (playbook.env_id != spec.config.env_id) {
    throw EnvMismatch("playbook for " + playbook.env_id + " applied to " + spec.config.env_id);
  }
  return std::string(base_prompt) + PlaybookGuidance(playbook);
}

std::string RenderReceiverPrompt(const PromptTemplates& templates, const PublicSpec& spec,
                                 const Message& message,
                                 const std::vector<ToolOutcome>& transcript,
                                 int remaining_budget, const Playbook* playbook) {
  std::string out = FillTemplate(
      templates.receiver, {{"BUDGET_B", std::to_string(spec.config.verification_budget)}});
  if (playbook != nullptr) out = InjectPlaybook(out, *playbook, spec);
  out += "\n\nPUBLIC SPECIFICATION:\n";
  out += spec.Serialize();
  out += "\n\nSENDER MESSAGE:\n";
  out += MessageToJson(message).dump(2);
  out += "\n\nTOOL RESULTS SO FAR:\n";
  out += TranscriptJson(transcript).dump(2);
  out += "\n\nREMAINING TOOL CALLS: " + std::to_string(remaining_budget) + "\n";
  return out;
}

std::string RenderJudgePrompt(const PromptTemplates& templates, const PublicSpec& spec,
                              const Message& message, const ThetaVector& theta) {
  OrderedJson claims = OrderedJson::array();
  for (const Claim& c : message.claims) {
    const int i = spec.config.IndexOf(c.attr_id);
    claims.push_back({{"attribute", i >= 0 ? spec.attr_names[i] : c.attr_id},
                      {"value", c.value}});
  }
  OrderedJson truth = OrderedJson::object();
  for (std::size_t i = 0; i < spec.config.size(); ++i) truth[spec.attr_names[i]] = theta[i];
  return FillTemplate(templates.judge, {{"SCENARIO", spec.scenario},
                                        {"CLAIMS", claims.dump(2)},
                                        {"STATEMENT", message.statement},
                                        {"THETA", truth.dump(2)}});
}

}  // namespace mixtalk
