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

#include <filesystem>

#include "doctest.h"
#include "mixtalk/errors.h"
#include "test_util.h"

namespace mixtalk {
namespace {

EpisodeTrace Stub(const std::string& episode, const std::string& sender,
                  const std::string& receiver, double u_s, double u_r) {
  EpisodeTrace t;
  t.episode_id = episode;
  t.env_id = "tiny";
  t.sender_ref = sender;
  t.receiver_ref = receiver;
  t.payoffs.score_s = u_s;
  t.payoffs.score_r = u_r;
  return t;
}

ToolOutcome Call(const std::string& attr) {
  ToolOutcome o;
  o.attr_id = attr;
  o.tool_id = "T_" + attr;
  o.cost_charged = 0.5;
  o.observed_value = 2;
  return o;
}

TEST_CASE("oracle episode sampling picks the per-episode best receiver") {
  const std::vector<EpisodeTrace> traces = {
      Stub("e1", "s", "a", 0, 0.5), Stub("e2", "s", "a", 0, 0.7),
      Stub("e1", "s", "b", 0, 0.6), Stub("e2", "s", "b", 0, 0.6)};
  const auto oracle = BuildOraclePolicy(TensorFromTraces(traces), Role::kReceiver);
  const auto picked = SampleOracleEpisodes(traces, oracle);
  REQUIRE(picked.size() == 2);
  CHECK(picked[0].episode_id == "e2");
  CHECK(picked[0].receiver_ref == "a");
  CHECK(picked[1].episode_id == "e1");
  CHECK(picked[1].receiver_ref == "b");
}

TEST_CASE("filtering keeps the strongest opponents") {
  const std::vector<EpisodeTrace> eps = {Stub("e1", "weak", "r", 0.1, 0),
                                         Stub("e2", "mid", "r", 0.5, 0),
                                         Stub("e3", "strong", "r", 0.9, 0)};
  auto kept = FilterByOpponentUtility(eps, 1.0 / 3);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].sender_ref == "strong");
  CHECK(FilterByOpponentUtility(eps, 0.5).size() == 2);
  CHECK(FilterByOpponentUtility(eps, 1.0).size() == 3);
  CHECK_THROWS_AS(FilterByOpponentUtility(eps, 0.0), ValidationError);
  CHECK_THROWS_AS(FilterByOpponentUtility(eps, 1.5), ValidationError);

  // Equal utilities: episode id first, then opponent name.
  const std::vector<EpisodeTrace> ties = {Stub("e2", "x", "r", 0.4, 0),
                                          Stub("e1", "z", "r", 0.4, 0),
                                          Stub("e1", "y", "r", 0.4, 0)};
  kept = FilterByOpponentUtility(ties, 0.5);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].sender_ref == "y");
  CHECK(kept[1].sender_ref == "z");

  // Six episodes at one half keep exactly three.
  std::vector<EpisodeTrace> six;
  for (int i = 0; i < 6; ++i) six.push_back(Stub("e" + std::to_string(i), "s", "r", i, 0));
  CHECK(FilterByOpponentUtility(six, 0.5).size() == 3);
}

TEST_CASE("structure summary") {
  const GameConfig c = testing::ShippedConfig("variables_12_v2");
  REQUIRE(c.verification_budget == 4);
  REQUIRE(c.FindTool("V2") != nullptr);
  std::vector<EpisodeTrace> eps;
  for (int i = 0; i < 10; ++i) {
    EpisodeTrace t = Stub("e" + std::to_string(i), "s", "r", 0, 0);
    t.env_id = c.env_id;
    t.message.claims = {{"V2", 3}};
    // Eight queries on V2, and 20 calls overall.
    if (i < 8) t.tool_transcript.push_back(Call("V2"));
    while (t.tool_transcript.size() < 2) t.tool_transcript.push_back(Call("V1"));
    eps.push_back(t);
  }
  const Playbook p = SummarizeStructure(eps, c);
  CHECK(p.propensities.at("V2") == doctest::Approx(0.8));
  CHECK(p.provenance.claimed.at("V2") == 10);
  CHECK(p.provenance.queried.at("V2") == 8);
  CHECK(p.mean_budget == doctest::Approx(2.0));
  CHECK(p.budget_cap == 3);
  CHECK(p.fallback_rate == doctest::Approx(0.8));
  // V1 was queried but never claimed, so it has no estimate of its own.
  CHECK(p.propensities.count("V1") == 0);
  CHECK(p.Propensity("V1") == doctest::Approx(0.8));

  CHECK_THROWS_AS(SummarizeStructure({}, c), EmptySample);
  eps[3].env_id = "variables_12_v1";
  CHECK_THROWS_AS(SummarizeStructure(eps, c), EnvMismatch);

  EpisodeTrace silent = Stub("e", "s", "r", 0, 0);
  silent.env_id = c.env_id;
  const Playbook empty = SummarizeStructure({silent}, c);
  CHECK(empty.propensities.empty());
  CHECK(empty.fallback_rate == 0.0);
  CHECK(empty.budget_cap == 1);
}

TEST_CASE("budget cap") {
  CHECK(BudgetCap(2.0, 4) == 3);
  CHECK(BudgetCap(0.0, 4) == 1);
  CHECK(BudgetCap(0.8, 4) == 1);
  CHECK(BudgetCap(4.0, 4) == 4);
  CHECK(BudgetCap(2.4, 5) == 3);
}

TEST_CASE("playbooks round-trip through JSON and disk") {
  Playbook p;
  p.env_id = "variables_12_v2";
  p.propensities = {{"V2", 0.8}, {"V5", 0.25}};
  p.fallback_rate = 0.6;
  p.mean_budget = 2.0;
  p.budget_cap = 3;
  p.provenance.target_agent = "audit-greedy";
  p.provenance.episodes = 10;
  p.provenance.tool_calls = 20;
  p.provenance.claimed = {{"V2", 10}};
  p.provenance.queried = {{"V2", 8}};
  CHECK(PlaybookFromJson(Json::parse(PlaybookToJson(p).dump())) == p);
  const auto path = std::filesystem::temp_directory_path() / "mixtalk_playbook_test.json";
  SavePlaybooks({{p.env_id, p}}, path);
  CHECK(LoadPlaybooks(path).at(p.env_id) == p);
  std::filesystem::remove(path);
}

struct Fixture {
  Catalog catalog;
  std::vector<EpisodeTrace> traces;

  Fixture() {
    catalog.LoadConfigDir(testing::ConfigDir());
    catalog.LoadStoryDir(testing::StoryDir());
    std::map<VariantKey, Variant> variants;
    std::vector<VariantKey> keys;
    // One story per environment, five environments.
    for (const auto& [env, story] : catalog.CoveringVariants()) {
      if (keys.size() == 5) break;
      if (!keys.empty() && keys.back().env_id == env) continue;
      keys.push_back({env, story});
      variants[{env, story}] = catalog.Get(env, story, Regime::kMixTalk);
    }
    const Schedule s = BuildSchedule(keys, 40, 9);
    std::vector<AgentRef> senders, receivers;
    for (const char* n : {"honest", "exaggerate:2", "fabricate:2", "adaptive:1"}) {
      senders.push_back(ParseAgentRef(n, Role::kSender));
    }
    for (const char* n : {"audit-greedy", "audit-all-random", "prior-only"}) {
      receivers.push_back(ParseAgentRef(n, Role::kReceiver));
    }
    traces = RunTournament(s, variants, senders, receivers, nullptr).traces;
  }
};

TEST_CASE("distillation and replay") {
  Fixture f;
  const auto lookup = f.catalog.Lookup();
  DistillOptions opt;
  opt.target_agent = "audit-greedy";
  const auto books = Distill(f.traces, lookup, opt);
  CHECK(books.size() == 5);
  CHECK(Distill(f.traces, lookup, opt) == books);
  for (const auto& [env, p] : books) {
    CHECK(p.env_id == env);
    CHECK(p.provenance.target_agent == "audit-greedy");
    CHECK(p.budget_cap >= 1);
    CHECK(p.budget_cap <= lookup(env).verification_budget);
    for (const auto& [attr, rate] : p.propensities) {
      CHECK(rate >= 0.0);
      CHECK(rate <= 1.0);
    }
  }

  const AgentRef greedy = ParseAgentRef("audit-greedy", Role::kReceiver);
  const auto replayed = ReplayWithPlaybooks(f.traces, "audit-greedy", greedy, books, f.catalog);
  const auto plain = ReplayWithPlaybooks(f.traces, "audit-greedy", greedy, {}, f.catalog);
  REQUIRE(replayed.size() == 160);
  REQUIRE(plain.size() == 160);
  CHECK(replayed[0].receiver_ref == "audit-greedy+playbook");
  for (std::size_t i = 0; i < replayed.size(); ++i) {
    CHECK(replayed[i].message == plain[i].message);
    CHECK(replayed[i].theta_true == plain[i].theta_true);
    CHECK(replayed[i].tool_transcript.size() <= static_cast<std::size_t>(replayed[i].budget_cap));
  }
  const ReplaySummary capped = SummarizeReceiverTraces(replayed, lookup);
  const ReplaySummary uncapped = SummarizeReceiverTraces(plain, lookup);
  CHECK(capped.episodes == 160);
  CHECK(capped.mean_cost <= uncapped.mean_cost + 1e-12);
  CHECK(capped.mean_calls <= uncapped.mean_calls + 1e-12);

  ReplayOptions four;
  four.jobs = 4;
  CHECK(ReplayWithPlaybooks(f.traces, "audit-greedy", greedy, books, f.catalog, four) ==
        replayed);
}

}  // namespace
}  // namespace mixtalk
