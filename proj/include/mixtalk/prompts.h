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


// Prompt templates and their rendering. The shipped templates are compiled
// in from assets/prompts/ and can be overridden from a directory holding
// sender_v1.txt, receiver_v1.txt and judge_v1.txt.

#ifndef MIXTALK_PROMPTS_H_
#define MIXTALK_PROMPTS_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mixtalk/game_model.h"
#include "mixtalk/playbook.h"
#include "mixtalk/trace.h"

namespace mixtalk {

struct PromptTemplates {
  std::string sender;
  std::string receiver;
  std::string judge;
};

// Compiled-in asset by file name, e.g. "sender_v1.txt". Throws TemplateError.
std::string_view EmbeddedAsset(std::string_view name);

const PromptTemplates& DefaultTemplates();
// Defaults with any file present in `dir` taking precedence.
PromptTemplates LoadTemplates(const std::filesystem::path& dir);

// Replaces every {KEY}. Each key must occur at least once in the template,
// otherwise TemplateError.
std::string FillTemplate(std::string_view tmpl, const std::map<std::string, std::string>& values);

std::string RenderSenderPrompt(const PromptTemplates& templates, const PublicSpec& spec,
                               const ThetaVector& theta);

// `playbook` may be null. The template section is unchanged either way; the
// guidance block goes right after it.
std::string RenderReceiverPrompt(const PromptTemplates& templates, const PublicSpec& spec,
                                 const Message& message,
                                 const std::vector<ToolOutcome>& transcript,
                                 int remaining_budget, const Playbook* playbook);

// Appends the guidance block for `playbook`. Throws EnvMismatch.
std::string InjectPlaybook(std::string_view base_prompt, const Playbook& playbook,
                           const PublicSpec& spec);
std::string PlaybookGuidance(const Playbook& playbook);

std::string RenderJudgePrompt(const PromptTemplates& templates, const PublicSpec& spec,
                              const Message& message, const ThetaVector& theta);

}  // namespace mixtalk

#endif  // MIXTALK_PROMPTS_H_
