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


#include "mixtalk/playbook.h"

#include <fstream>

#include "mixtalk/errors.h"

namespace mixtalk {

double Playbook::Propensity(std::string_view attr_id) const {
  auto it = propensities.find(std::string(attr_id));
  return it == propensities.end() ? fallback_rate : it->second;
}

OrderedJson PlaybookToJson(const Playbook& p) {
  OrderedJson j;
  j["env_id"] = p.env_id;
  j["propensities"] = p.propensities;
  j["fallback_rate"] = p.fallback_rate;
  j["mean_budget"] = p.mean_budget;
  j["budget_cap"] = p.budget_cap;
  j["provenance"] = {{"target_agent", p.provenance.target_agent},
                     {"episodes", p.provenance.episodes},
                     {"tool_calls", p.provenance.tool_calls},
                     {"claimed", p.provenance.claimed},
                     {"queried", p.provenance.queried}};
  return j;
}

Playbook PlaybookFromJson(const Json& j) {
  try {
    Playbook p;
    p.env_id = j.at("env_id").get<std::string>();
    p.propensities = j.value("propensities", std::map<std::string, double>{});
    p.fallback_rate = j.value("fallback_rate", 0.0);
    p.mean_budget = j.value("mean_budget", 0.0);
    p.budget_cap = j.at("budget_cap").get<int>();
    if (j.contains("provenance")) {
      const Json& pr = j.at("provenance");
      p.provenance.target_agent = pr.value("target_agent", "");
      p.provenance.episodes = pr.value("episodes", 0);
      p.provenance.tool_calls = pr.value("tool_calls", 0);
      p.provenance.claimed = pr.value("claimed", std::map<std::string, int>{});
      p.provenance.queried = pr.value("queried", std::map<std::string, int>{});
    }
    for (const auto& [attr, prob] : p.propensities) {
      if (!(prob >= 0.0 && prob <= 1.0)) {
        throw ValidationError("propensities", "probability of " + attr + " outside [0, 1]");
      }
    }
    if (!(p.fallback_rate >= 0.0 && p.fallback_rate <= 1.0)) {
      throw ValidationError("fallback_rate", "outside [0, 1]");
    }
    if (p.budget_cap < 1) throw ValidationError("budget_cap", "must be >= 1");
    return p;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("playbook: ") + e.what());
  }
}

std::map<std::string, Playbook> LoadPlaybooks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open playbook " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError("playbook " + path.string() + ": " + e.what());
  }
  std::map<std::string, Playbook> out;
  const Json list = j.is_array() ? j : Json::array({j});
  for (const Json& item : list) {
    Playbook p = PlaybookFromJson(item);
    out.emplace(p.env_id, std::move(p));
  }
  return out;
}

void SavePlaybooks(const std::map<std::string, Playbook>& playbooks,
                   const std::filesystem::path& path) {
  OrderedJson list = OrderedJson::array();
  for (const auto& [env, p] : playbooks) list.push_back(PlaybookToJson(p));
  std::ofstream out(path);
  if (!out) throw SinkError("cannot write playbook " + path.string());
  out << list.dump(2) << "\n";
  if (!out) throw SinkError("failed writing playbook " + path.string());
}

}  // namespace mixtalk
