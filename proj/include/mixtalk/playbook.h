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


// Receiver playbook produced by distillation and consumed at inference time.
//
// JSON form:
//   {"env_id": "...", "propensities": {"V2": 0.8, ...}, "fallback_rate": 0.5,
//    "mean_budget": 2.0, "budget_cap": 3,
//    "provenance": {"target_agent": "...", "episodes": 45, "tool_calls": 90,
//                   "claimed": {"V2": 10, ...}, "queried": {"V2": 8, ...}}}

#ifndef MIXTALK_PLAYBOOK_H_
#define MIXTALK_PLAYBOOK_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "mixtalk/game_model.h"

namespace mixtalk {

struct PlaybookProvenance {
  // Receiver the playbook was distilled for, if named.
  std::string target_agent;
  int episodes = 0;
  int tool_calls = 0;
  // Per verifiable attribute: episodes where it was claimed, and where it was
  // both claimed and queried.
  std::map<std::string, int> claimed;
  std::map<std::string, int> queried;

  bool operator==(const PlaybookProvenance&) const = default;
};

struct Playbook {
  std::string env_id;
  // P(tool call on i | i claimed), for attributes claimed at least once.
  std::map<std::string, double> propensities;
  double fallback_rate = 0.0;
  double mean_budget = 0.0;
  int budget_cap = 1;
  PlaybookProvenance provenance;

  // Falls back to fallback_rate for attributes without their own estimate.
  double Propensity(std::string_view attr_id) const;

  bool operator==(const Playbook&) const = default;
};

OrderedJson PlaybookToJson(const Playbook& playbook);
Playbook PlaybookFromJson(const Json& j);

// A playbook file holds either one playbook object or a list of them (one
// per environment).
std::map<std::string, Playbook> LoadPlaybooks(const std::filesystem::path& path);
void SavePlaybooks(const std::map<std::string, Playbook>& playbooks,
                   const std::filesystem::path& path);

}  // namespace mixtalk

#endif  // MIXTALK_PLAYBOOK_H_
