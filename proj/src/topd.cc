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


#include "mixtalk/topd.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "mixtalk/behavior_metrics.h"
#include "mixtalk/errors.h"

namespace mixtalk {
namespace {

double OpponentUtility(const EpisodeTrace& t, Role role) {
  return role == Role::kReceiver ? t.payoffs.score_s : t.payoffs.score_r;
}

const std::string& ActingAgent(const EpisodeTrace& t, Role role) {
  return role == Role::kReceiver ? t.receiver_ref : t.sender_ref;
}

const std::string& Opponent(const EpisodeTrace& t, Role role) {
  return role == Role::kReceiver ? t.sender_ref : t.receiver_ref;
}

}  // namespace

std::vector<EpisodeTrace> SampleOracleEpisodes(const std::vector<EpisodeTrace>& traces,
                                               const OraclePolicy& oracle) {
  std::vector<EpisodeTrace> out;
  for (const EpisodeTrace& t : traces) {
    const auto o = std::find(oracle.opponents.begin(), oracle.opponents.end(),
                             Opponent(t, oracle.role));
    const auto e = std::find(oracle.episode_ids.begin(), oracle.episode_ids.end(), t.episode_id);
    if (o == oracle.opponents.end() || e == oracle.episode_ids.end()) continue;
    const OracleCell& cell =
        oracle.cells[o - oracle.opponents.begin()][e - oracle.episode_ids.begin()];
    if (cell.agent >= 0 && oracle.agents[cell.agent] == ActingAgent(t, oracle.role)) {
      out.push_back(t);
    }
  }
  return out;
}

std::vector<EpisodeTrace> FilterByOpponentUtility(std::vector<EpisodeTrace> episodes,
                                                  double keep_fraction, Role role) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw ValidationError("keep_fraction", "must lie in (0, 1]");
  }
  std::stable_sort(episodes.begin(), episodes.end(),
                   [role](const EpisodeTrace& a, const EpisodeTrace& b) {
                     const double ua = OpponentUtility(a, role);
                     const double ub = OpponentUtility(b, role);
                     if (ua != ub) return ua > ub;
                     if (a.episode_id != b.episode_id) return a.episode_id < b.episode_id;
                     return Opponent(a, role) < Opponent(b, role);
                   });
  // The epsilon keeps 0.5 * 6 from rounding up to 4.
  const auto keep = static_cast<std::size_t>(
      std::ceil(keep_fraction * static_cast<double>(episodes.size()) - 1e-9));
  episodes.resize(std::min(keep, episodes.size()));
  return episodes;
}

int BudgetCap(double mean_budget, int verification_budget) {
  const int cap = static_cast<int>(std::ceil(kBudgetHeadroom * mean_budget - 1e-9));
  return std::clamp(cap, 1, std::max(1, verification_budget));
}

Playbook SummarizeStructure(const std::vector<EpisodeTrace>& episodes, const GameConfig& config) {
  if (episodes.empty()) throw EmptySample("no episodes to summarize for " + config.env_id);
  Playbook p;
  p.env_id = config.env_id;
  int total_calls = 0;
  for (const EpisodeTrace& t : episodes) {
    if (t.env_id != config.env_id) {
      throw EnvMismatch("episode " + t.episode_id + " is from " + t.env_id + ", not " +
                        config.env_id);
    }
    total_calls += static_cast<int>(t.tool_transcript.size());
    std::set<std::string> queried;
    for (const ToolOutcome& o : t.tool_transcript) queried.insert(o.attr_id);
    for (const ToolSpec& tool : config.tools) {
      if (!t.message.ClaimedValue(tool.attr_id)) continue;
      ++p.provenance.claimed[tool.attr_id];
      if (queried.count(tool.attr_id) > 0) ++p.provenance.queried[tool.attr_id];
    }
  }
  int claimed_total = 0;
  int queried_total = 0;
  for (const auto& [attr, claimed] : p.provenance.claimed) {
    const int queried = p.provenance.queried.count(attr) ? p.provenance.queried.at(attr) : 0;
    p.propensities[attr] = static_cast<double>(queried) / claimed;
    claimed_total += claimed;
    queried_total += queried;
  }
  p.fallback_rate = claimed_total > 0 ? static_cast<double>(queried_total) / claimed_total : 0.0;
  p.mean_budget = static_cast<double>(total_calls) / episodes.size();
  p.budget_cap = BudgetCap(p.mean_budget, config.verification_budget);
  p.provenance.episodes = static_cast<int>(episodes.size());
  p.provenance.tool_calls = total_calls;
  return p;
}

std::map<std::string, Playbook> Distill(const std::vector<EpisodeTrace>& traces,
                                        const ConfigLookup& lookup,
                                        const DistillOptions& options) {
  const PayoffTensor tensor = TensorFromTraces(traces);
  const OraclePolicy oracle = BuildOraclePolicy(tensor, options.role);
  std::map<std::string, std::vector<EpisodeTrace>> by_env;
  for (EpisodeTrace& t : SampleOracleEpisodes(traces, oracle)) {
    by_env[t.env_id].push_back(std::move(t));
  }
  std::map<std::string, Playbook> out;
  for (auto& [env, episodes] : by_env) {
    Playbook p = SummarizeStructure(
        FilterByOpponentUtility(std::move(episodes), options.keep_fraction, options.role),
        lookup(env));
    p.provenance.target_agent = options.target_agent;
    out.emplace(env, std::move(p));
  }
  return out;
}

std::vector<EpisodeTrace> ReplayWithPlaybooks(const std::vector<EpisodeTrace>& traces,
                                              const std::string& source_receiver,
                                              const AgentRef& receiver,
                                              const std::map<std::string, Playbook>& playbooks,
                                              Catalog& catalog, const ReplayOptions& options) {
  std::vector<const EpisodeTrace*> selected;
  for (const EpisodeTrace& t : traces) {
    if (t.receiver_ref == source_receiver) selected.push_back(&t);
  }
  const std::string name = receiver.name + options.receiver_suffix;
  std::vector<EpisodeTrace> out(selected.size());
  ParallelFor(selected.size(), options.jobs, [&](std::size_t i) {
    const EpisodeTrace& original = *selected[i];
    const Variant& variant = catalog.Get(original.env_id, original.story_id, original.regime);
    EpisodeOptions episode_options;
    if (auto it = playbooks.find(original.env_id); it != playbooks.end()) {
      episode_options.playbook = &it->second;
    }
    // One agent per episode, so remote agents never share a transcript.
    std::unique_ptr<ReceiverAgent> agent =
        MakeReceiver(receiver, options.generator, options.templates);
    out[i] = ReplayEpisode(variant, original, *agent, episode_options);
    out[i].receiver_ref = name;
  });
  return out;
}

ReplaySummary SummarizeReceiverTraces(const std::vector<EpisodeTrace>& traces,
                                      const ConfigLookup& lookup) {
  ReplaySummary s;
  for (const EpisodeTrace& t : traces) {
    const GameConfig config = lookup(t.env_id).WithRegime(t.regime);
    for (const ToolOutcome& o : t.tool_transcript) s.mean_cost += o.cost_charged;
    s.mean_calls += static_cast<double>(t.tool_transcript.size());
    s.mean_judgment += ComputeReceiverMetrics(t, config).judgment;
    s.mean_score_r += t.payoffs.score_r;
    ++s.episodes;
  }
  if (s.episodes > 0) {
    s.mean_cost /= s.episodes;
    s.mean_calls /= s.episodes;
    s.mean_judgment /= s.episodes;
    s.mean_score_r /= s.episodes;
  }
  return s;
}

}  // namespace mixtalk
