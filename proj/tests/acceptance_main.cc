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


// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fmt/core.h"
#include "mixtalk/behavior_metrics.h"
#include "mixtalk/catalog.h"
#include "mixtalk/cli.h"
#include "mixtalk/episode_engine.h"
#include "mixtalk/meta_analysis.h"
#include "mixtalk/prior_sampler.h"
#include "mixtalk/report.h"
#include "mixtalk/seeding.h"
#include "mixtalk/topd.h"
#include "mixtalk/tournament.h"
#include "oracles/brute_oracles.h"
#include "spdlog/spdlog.h"
#include "test_util.h"

namespace mixtalk {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

void LoadShipped(Catalog& catalog) {
  catalog.LoadConfigDir(testing::ConfigDir());
  catalog.LoadStoryDir(testing::StoryDir());
}

std::vector<VariantKey> AllVariants(const Catalog& catalog) {
  std::vector<VariantKey> keys;
  for (const auto& [env, story] : catalog.CoveringVariants()) keys.push_back({env, story});
  return keys;
}

std::map<VariantKey, Variant> Materialize(Catalog& catalog, const std::vector<VariantKey>& keys,
                                          Regime regime) {
  std::map<VariantKey, Variant> out;
  for (const VariantKey& k : keys) out[k] = catalog.Get(k.env_id, k.story_id, regime);
  return out;
}

std::vector<AgentRef> Refs(const std::vector<std::string>& specs, Role role) {
  std::vector<AgentRef> out;
  for (const std::string& s : specs) out.push_back(ParseAgentRef(s, role));
  return out;
}

bool Near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path GoldenFile() { return testing::GoldenDir() / "ep000003.jsonl"; }

int Cli(std::vector<std::string> args) {
  args.insert(args.begin() + 1, {"--config-dir", testing::ConfigDir().string(), "--stories",
                                 testing::StoryDir().string()});
  std::ostringstream out, err;
  return RunCli(args, out, err);
}

Outcome GoldenTrace() {
  Outcome o;
  Catalog catalog;
  LoadShipped(catalog);
  const TraceFile file = ReadTraceFile(GoldenFile(), catalog.Lookup());
  o.Require(file.traces.size() == 1, "golden file must hold one trace");
  if (!o.pass) return o;
  const EpisodeTrace& t = file.traces[0];
  const GameConfig& c = catalog.Config(t.env_id);
  const ReceiverScore r = ScoreReceiver(t.theta_true, t.theta_hat, t.tool_transcript, false, c);
  const SenderScore s = ScoreSender(t.theta_true, t.theta_hat, t.message, false, c);
  o.Require(c.tool_scale == 2.0, "tool_scale");
  o.Require(Near(r.err_ratio, 0.0823, 1e-4), fmt::format("err_ratio {}", r.err_ratio));
  o.Require(Near(r.cost_ratio, 0.1125, 1e-4), fmt::format("cost_ratio {}", r.cost_ratio));
  o.Require(Near(r.score_r, 0.6927, 1e-4), fmt::format("Score_R {}", r.score_r));
  o.Require(Near(s.claim_penalty, 0.35, 1e-4), fmt::format("penalty {}", s.claim_penalty));
  o.Require(Near(s.score_s, 0.40, 1e-4), fmt::format("Score_S {}", s.score_s));
  o.Require(Near(s.persuasion, 0.75, 1e-4), fmt::format("persuasion {}", s.persuasion));
  o.Require(Near(s.persuasion, s.score_s + s.claim_penalty, 1e-12), "persuasion relation");
  o.Require(Near(1.0 - 0.0823 - 2.0 * 0.1125, 0.6927, 1e-4), "receiver formula on stored inputs");
  o.Require(Cli({"audit", "--traces", testing::GoldenDir().string()}) == kExitOk,
            "audit of the golden trace");
  o.detail = o.pass ? fmt::format("Score_R {:.4f}, persuasion {:.4f} = {:.4f} + {:.4f}", r.score_r,
                                  s.persuasion, s.score_s, s.claim_penalty)
                    : o.detail;
  return o;
}

Outcome CostFormulas() {
  Outcome o;
  Catalog catalog;
  LoadShipped(catalog);
  const TraceFile file = ReadTraceFile(GoldenFile(), catalog.Lookup());
  const EpisodeTrace& t = file.traces.at(0);
  const GameConfig& c = catalog.Config("variables_12_v2");
  o.Require(c.claim_scale == 7.0 && c.max_claims * c.max_claim_cost == 24.0,
            "variables_12_v2 claim parameters");
  const double cost = CostRatio(t.tool_transcript, c);
  o.Require(Near(cost, 2.25 / (5.0 * 4), 1e-9), fmt::format("cost_ratio {}", cost));
  o.Require(Near(cost, 0.1125, 1e-9), "cost_ratio literal");
  const double total = ClaimCostTotal(t.message, c);
  const double penalty = ClaimPenalty(t.message, c);
  o.Require(Near(total, 1.2, 1e-9), fmt::format("claim cost total {}", total));
  o.Require(Near(penalty, 0.35, 1e-9), fmt::format("claim penalty {}", penalty));
  if (o.pass) o.detail = fmt::format("cost_ratio {:.10f}, claim_penalty {:.10f}", cost, penalty);
  return o;
}

Outcome LiePunishment() {
  Outcome o;
  Catalog catalog;
  LoadShipped(catalog);
  std::vector<VariantKey> keys;
  for (const VariantKey& k : AllVariants(catalog)) {
    for (const ToolSpec& tool : catalog.Config(k.env_id).tools) {
      if (tool.kind == ToolKind::kPerfect) {
        keys.push_back(k);
        break;
      }
    }
  }
  o.Require(!keys.empty(), "no variant with a PERFECT tool");
  if (!o.pass) return o;
  const int per_variant = (1000 + static_cast<int>(keys.size()) - 1) / static_cast<int>(keys.size());
  const auto variants = Materialize(catalog, keys, Regime::kMixTalk);
  const auto result =
      RunTournament(BuildSchedule(keys, per_variant * static_cast<int>(keys.size()), 3), variants,
                    Refs({"fabricate:2"}, Role::kSender),
                    Refs({"audit-all-random"}, Role::kReceiver), nullptr);
  int caught = 0, violations = 0;
  for (const EpisodeTrace& t : result.traces) {
    if (!t.payoffs.caught_lie_perfect) continue;
    ++caught;
    const bool ok = t.payoffs.persuasion == 0.0 && t.payoffs.err_ratio == 0.0 &&
                    t.payoffs.score_s == -t.payoffs.claim_penalty;
    violations += ok ? 0 : 1;
  }
  o.Require(result.traces.size() >= 1000, "fewer than 1000 episodes");
  o.Require(caught > 0, "no lie was caught");
  o.Require(violations == 0, fmt::format("{} violations", violations));
  if (o.pass) {
    o.detail = fmt::format("{} episodes, {} caught, 0 violations", result.traces.size(), caught);
  }
  return o;
}

Outcome Sampler() {
  Outcome o;
  const GameConfig c = testing::ShippedConfig("variables_12_v2");
  const PriorSampler sampler(c.prior);
  constexpr int kSamples = 100000;
  const std::size_t n = c.size();
  const int u4 = c.IndexOf("U4"), v6 = c.IndexOf("V6");
  std::vector<std::array<double, kDomainSize>> freq(n);
  std::vector<double> sum(n, 0.0);
  std::vector<std::vector<double>> cross(n, std::vector<double>(n, 0.0));
  int violations = 0;
  for (int k = 0; k < kSamples; ++k) {
    const DetailedSample d = sampler.SampleDetailed(DeriveSeed(2026, std::to_string(k)));
    violations += d.theta[u4] > d.theta[v6] ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i) {
      freq[i][d.theta[i]] += 1.0 / kSamples;
      sum[i] += d.latent[i];
      for (std::size_t j = i; j < n; ++j) cross[i][j] += d.latent[i] * d.latent[j];
    }
  }
  double worst_marginal = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int v = 0; v < kDomainSize; ++v) {
      worst_marginal = std::max(worst_marginal, std::abs(freq[i][v] - c.prior.marginals[i][v]));
    }
  }
  double worst_corr = 0.0;
  for (const Correlation& corr : c.prior.correlations) {
    const int a = std::min(c.IndexOf(corr.a), c.IndexOf(corr.b));
    const int b = std::max(c.IndexOf(corr.a), c.IndexOf(corr.b));
    const double ma = sum[a] / kSamples, mb = sum[b] / kSamples;
    const double cov = cross[a][b] / kSamples - ma * mb;
    const double va = cross[a][a] / kSamples - ma * ma, vb = cross[b][b] / kSamples - mb * mb;
    worst_corr = std::max(worst_corr, std::abs(cov / std::sqrt(va * vb) - corr.rho));
  }
  o.Require(violations == 0, fmt::format("{} U4 <= V6 violations", violations));
  o.Require(worst_marginal <= 0.01, fmt::format("marginal off by {:.4f}", worst_marginal));
  o.Require(worst_corr <= 0.05, fmt::format("latent correlation off by {:.4f}", worst_corr));
  if (o.pass) {
    o.detail = fmt::format("100000 samples, 0 violations, marginal error {:.4f}, latent error {:.4f}",
                           worst_marginal, worst_corr);
  }
  return o;
}

Outcome RankingOracles() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(1, 3), eps(1, 4), eighths(-8, 8);
  int tor_mismatch = 0;
  for (int game = 0; game < 1000; ++game) {
    oracles::TinyGame g;
    const int ns = size(rng), nr = size(rng), ne = eps(rng);
    g.u_s.assign(ns, std::vector<std::vector<double>>(nr, std::vector<double>(ne)));
    g.u_r = g.u_s;
    std::vector<std::string> sn, rn, en;
    for (int s = 0; s < ns; ++s) sn.push_back("s" + std::to_string(s));
    for (int r = 0; r < nr; ++r) rn.push_back("r" + std::to_string(r));
    for (int e = 0; e < ne; ++e) en.push_back("e" + std::to_string(e));
    PayoffTensor t(sn, rn, en);
    for (int s = 0; s < ns; ++s) {
      for (int r = 0; r < nr; ++r) {
        for (int e = 0; e < ne; ++e) {
          g.u_s[s][r][e] = eighths(rng) / 8.0;
          g.u_r[s][r][e] = eighths(rng) / 8.0;
          t.Set(s, r, e, g.u_s[s][r][e], g.u_r[s][r][e]);
        }
      }
    }
    for (int r = 0; r < nr; ++r) {
      tor_mismatch += TournamentOracleRegret(t, rn[r], Role::kReceiver) !=
                      oracles::BruteTor(g, r, true);
    }
  }
  o.Require(tor_mismatch == 0, fmt::format("{} TOR mismatches", tor_mismatch));

  std::uniform_int_distribution<int> dim(2, 3), pop(2, 10);
  std::uniform_real_distribution<double> unif(0.0, 1.0), alpha(0.1, 5.0);
  double worst_alpha = 0.0;
  for (int game = 0; game < 200; ++game) {
    const int ns = dim(rng), nr = dim(rng);
    oracles::Grid us(ns, std::vector<double>(nr)), ur = us;
    for (auto& row : us) for (double& x : row) x = unif(rng);
    for (auto& row : ur) for (double& x : row) x = unif(rng);
    const double a = alpha(rng);
    const int m = pop(rng);
    const auto got = AlphaRank(us, ur, a, m);
    const auto want = oracles::BruteAlphaRank(us, ur, a, m);
    for (std::size_t i = 0; i < want.profile.size(); ++i) {
      worst_alpha = std::max(worst_alpha, std::abs(got.profile_mass[i] - want.profile[i]));
    }
  }
  o.Require(worst_alpha <= 1e-9, fmt::format("alpha-rank off by {:.3g}", worst_alpha));
  const auto drift = AlphaRank({{0.2, 0.7}, {0.5, 0.1}}, {{0.9, 0.3}, {0.4, 0.6}}, 1e-8, 50);
  for (double x : drift.profile_mass) o.Require(std::abs(x - 0.25) <= 1e-6, "alpha -> 0 not uniform");
  const auto dom = AlphaRank({{1.0, 0.8}, {0.2, 0.0}}, {{1.0, 0.2}, {0.8, 0.0}}, kDefaultAlpha,
                             kDefaultPopulation);
  o.Require(dom.profile_mass[0] > 0.99, fmt::format("dominant mass {}", dom.profile_mass[0]));

  const double strength[] = {1.0, 0.5, 0.25};
  const std::vector<std::string> names = {"p0", "p1", "p2"};
  std::uniform_real_distribution<double> draw(0.0, 1.0);
  std::vector<Comparison> cs;
  oracles::Grid wins(3, std::vector<double>(3, 0.0));
  for (int k = 0; k < 10000; ++k) {
    const int i = k % 3, j = (i + 1 + (k / 3) % 2) % 3;
    const bool i_wins = draw(rng) < strength[i] / (strength[i] + strength[j]);
    const int w = i_wins ? i : j, l = i_wins ? j : i;
    cs.push_back({names[w], names[l]});
    wins[w][l] += 1;
  }
  constexpr double kStep = 0.0005;
  const BtRatings bt = FitBradleyTerry(names, cs);
  const auto grid = oracles::BruteBt(wins, kBtPseudoCount, kStep);
  o.Require(bt.ratings[0] > bt.ratings[1] && bt.ratings[1] > bt.ratings[2], "BT ordering");
  double worst_bt = 0.0;
  for (int i = 0; i < 3; ++i) worst_bt = std::max(worst_bt, std::abs(bt.log_ratings[i] - grid[i]));
  o.Require(worst_bt <= 2 * kStep, fmt::format("BT off the grid optimum by {:.5f}", worst_bt));
  if (o.pass) {
    o.detail = fmt::format(
        "TOR 1000/1000 exact, alpha-rank max error {:.2g}, dominant mass {:.4f}, BT grid gap {:.5f}",
        worst_alpha, dom.profile_mass[0], worst_bt);
  }
  return o;
}

Outcome Behavior() {
  Outcome o;
  // Hand examples on fixed inputs.
  {
    const GameConfig c = testing::ShippedConfig("variables_12_v2");
    ThetaVector theta{std::vector<int>(12, 2)};
    theta.values[c.IndexOf("V1")] = 0;
    EpisodeTrace t;
    t.theta_true = theta;
    t.theta_hat = theta;
    for (const AttributeSpec& a : c.attributes) {
      t.message.claims.push_back({a.id, theta[c.IndexOf(a.id)]});
    }
    const SenderBehavior honest = ComputeSenderMetrics(t, c);
    o.Require(honest.omission == 0 && honest.fabrication == 0 && honest.exaggeration == 0,
              "honest full disclosure");
    const ReceiverBehavior exact = ComputeReceiverMetrics(t, c);
    o.Require(exact.skepticism == 0 && exact.paranoia == 0, "exact estimate skepticism");
    o.Require(Near(exact.judgment, 1.0, 1e-12), "perfect prediction judgment");
    t.message.claims = {{"V1", 4}};
    o.Require(Near(ComputeSenderMetrics(t, c).fabrication, 0.1, 1e-12), "fabrication 0.1");

    GameConfig uniform = c;
    for (AttributeSpec& a : uniform.attributes) a.weight_sender = 1.0 / 12;
    t.message.claims.clear();
    for (int i = 0; i < 6; ++i) t.message.claims.push_back({c.attributes[i].id, theta[i]});
    o.Require(Near(ComputeSenderMetrics(t, uniform).omission, 0.5, 1e-12), "omission 0.5");

    Json j = testing::TinyConfigJson();
    const double w[] = {0.1, 0.3, 0.3, 0.3};
    for (int i = 0; i < 4; ++i) j["attributes"][i]["weight_receiver"] = w[i];
    const GameConfig tiny = ConfigFromJson(j);
    EpisodeTrace p;
    p.theta_true = testing::Theta({2, 3, 1, 4});
    p.theta_hat = testing::Theta({1, 3, 1, 4});
    p.message.claims = {{"V2", 3}, {"U1", 1}, {"U2", 4}};
    o.Require(Near(ComputeReceiverMetrics(p, tiny).pessimism, 0.1, 1e-12), "pessimism 0.1");
  }

  Catalog catalog;
  LoadShipped(catalog);
  const auto keys = AllVariants(catalog);
  const auto variants = Materialize(catalog, keys, Regime::kMixTalk);
  const auto result = RunTournament(
      BuildSchedule(keys, 9 * static_cast<int>(keys.size()), 6), variants,
      Refs({"honest", "omit-low:2", "exaggerate:2", "fabricate:2", "adaptive:1"}, Role::kSender),
      Refs({"trusting", "prior-only", "audit-greedy", "audit-all-random"}, Role::kReceiver),
      nullptr);
  int paranoia = 0, honest_fab = 0;
  for (const EpisodeTrace& t : result.traces) {
    const GameConfig& c = catalog.Config(t.env_id);
    const ReceiverBehavior r = ComputeReceiverMetrics(t, c);
    paranoia += r.paranoia > r.skepticism + 1e-15 ? 1 : 0;
    if (t.sender_ref == "honest") honest_fab += ComputeSenderMetrics(t, c).fabrication != 0.0;
  }
  o.Require(result.traces.size() >= 5000, "fewer than 5000 episodes");
  o.Require(paranoia == 0, fmt::format("{} traces with paranoia > skepticism", paranoia));
  o.Require(honest_fab == 0, fmt::format("{} honest traces with fabrication", honest_fab));
  if (o.pass) {
    o.detail = fmt::format("hand examples exact; {} traces, 0 violations", result.traces.size());
  }
  return o;
}

Outcome Counterfactual() {
  Outcome o;
  Catalog catalog;
  LoadShipped(catalog);
  const auto keys = AllVariants(catalog);
  const auto senders = Refs({"exaggerate:1", "exaggerate:2", "fabricate:1", "fabricate:2",
                             "adaptive:1", "adaptive:2"},
                            Role::kSender);
  const auto trusting = Refs({"trusting"}, Role::kReceiver);
  struct Stats {
    double lying = 0.0;
    double judgment = 0.0;
    std::size_t n = 0;
  };
  std::map<Regime, Stats> stats;
  for (Regime regime : {Regime::kCheapTalk, Regime::kMixTalk, Regime::kDisclosure}) {
    const auto variants = Materialize(catalog, keys, regime);
    const auto result = RunTournament(BuildSchedule(keys, 6 * static_cast<int>(keys.size()), 8),
                                      variants, senders, trusting, nullptr);
    Stats& s = stats[regime];
    for (const EpisodeTrace& t : result.traces) {
      const GameConfig& c = variants.at({t.env_id, t.story_id}).config;
      const SenderBehavior b = ComputeSenderMetrics(t, c);
      s.lying += b.fabrication + b.exaggeration;
      s.judgment += ComputeReceiverMetrics(t, c).judgment;
      ++s.n;
    }
    s.lying /= s.n;
    s.judgment /= s.n;
    o.Require(s.n >= 1000, "fewer than 1000 episodes per regime");
  }
  const Stats& cheap = stats[Regime::kCheapTalk];
  const Stats& mix = stats[Regime::kMixTalk];
  const Stats& disc = stats[Regime::kDisclosure];
  o.Require(cheap.lying >= mix.lying && mix.lying >= disc.lying, "lying order");
  o.Require(disc.judgment >= mix.judgment && mix.judgment >= cheap.judgment, "judgment order");
  o.detail += (o.detail.empty() ? "" : "; ") +
              fmt::format("fab+exag C/M/D {:.4f} >= {:.4f} >= {:.4f}; trusting judgment D/M/C "
                          "{:.4f} >= {:.4f} >= {:.4f}; {} episodes per regime",
                          cheap.lying, mix.lying, disc.lying, disc.judgment, mix.judgment,
                          cheap.judgment, mix.n);
  return o;
}

Outcome TopdEfficacy() {
  Outcome o;
  Catalog catalog;
  LoadShipped(catalog);
  const auto keys = AllVariants(catalog);
  const auto variants = Materialize(catalog, keys, Regime::kMixTalk);
  const auto result = RunTournament(
      BuildSchedule(keys, 8 * static_cast<int>(keys.size()), 21), variants,
      Refs({"honest", "omit-low:2", "exaggerate:2", "fabricate:2", "adaptive:1"}, Role::kSender),
      Refs({"trusting", "prior-only", "audit-greedy", "audit-all-random"}, Role::kReceiver),
      nullptr);
  const auto lookup = catalog.Lookup();
  DistillOptions distill;
  distill.target_agent = "audit-all-random";
  const auto playbooks = Distill(result.traces, lookup, distill);
  const AgentRef auditor = ParseAgentRef("audit-all-random", Role::kReceiver);
  const auto replayed =
      ReplayWithPlaybooks(result.traces, "audit-all-random", auditor, playbooks, catalog);
  std::vector<EpisodeTrace> originals;
  for (const EpisodeTrace& t : result.traces) {
    if (t.receiver_ref == "audit-all-random") originals.push_back(t);
  }
  int over_cap = 0;
  for (const EpisodeTrace& t : replayed) {
    over_cap += t.budget_cap > 0 && static_cast<int>(t.tool_transcript.size()) > t.budget_cap;
  }
  const ReplaySummary before = SummarizeReceiverTraces(originals, lookup);
  const ReplaySummary after = SummarizeReceiverTraces(replayed, lookup);
  const double reduction = before.mean_cost > 0 ? 1.0 - after.mean_cost / before.mean_cost : 0.0;
  const double drop = before.mean_judgment - after.mean_judgment;
  o.Require(after.episodes >= 1000, "fewer than 1000 replayed episodes");
  o.Require(over_cap == 0, fmt::format("{} episodes over the cap", over_cap));
  o.Require(reduction >= 0.10, "cost reduction below 10%");
  o.Require(drop <= 0.02, "judgment dropped by more than 0.02");
  o.detail += (o.detail.empty() ? "" : "; ") +
              fmt::format("{} episodes, cost {:.4f} -> {:.4f} ({:.1f}% less), judgment {:.4f} "
                          "-> {:.4f}",
                          after.episodes, before.mean_cost, after.mean_cost, 100 * reduction,
                          before.mean_judgment, after.mean_judgment);
  return o;
}

Outcome Reproducibility() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "mixtalk_acceptance_repro";
  fs::remove_all(root);
  for (const char* name : {"a", "b"}) {
    const fs::path dir = root / name;
    o.Require(Cli({"run", "--senders", "honest,omit-low:2,fabricate:2,adaptive:1", "--receivers",
                   "trusting,audit-greedy,audit-all-random", "--episodes", "90", "--seed", "42",
                   "--jobs", "4", "--out", (dir / "traces").string()}) == kExitOk,
              "run failed");
    o.Require(Cli({"rank", "--traces", (dir / "traces").string(), "--out",
                   (dir / "report").string()}) == kExitOk,
              "rank failed");
  }
  if (!o.pass) return o;
  int compared = 0;
  for (const char* sub : {"traces", "report"}) {
    for (const auto& entry : fs::directory_iterator(root / "a" / sub)) {
      const std::string name = entry.path().filename().string();
      // The manifest records wall-clock times and output paths.
      if (name == "manifest.json") continue;
      const fs::path other = root / "b" / sub / name;
      o.Require(fs::exists(other) && Slurp(entry.path()) == Slurp(other), name + " differs");
      ++compared;
    }
  }
  Catalog catalog;
  LoadShipped(catalog);
  const auto ta = ReadTraceDir(root / "a" / "traces", catalog.Lookup());
  const auto tb = ReadTraceDir(root / "b" / "traces", catalog.Lookup());
  o.Require(TensorFromTraces(ta.traces) == TensorFromTraces(tb.traces), "payoff tensors differ");
  if (o.pass) o.detail = fmt::format("{} files byte-identical across two --jobs 4 runs", compared);
  fs::remove_all(root);
  return o;
}

Outcome ScheduleFidelity() {
  Outcome o;
  Catalog catalog;
  LoadShipped(catalog);
  std::vector<VariantKey> keys;
  for (const VariantKey& k : AllVariants(catalog)) {
    if (k.env_id.rfind("variables_12_", 0) == 0) keys.push_back(k);
  }
  o.Require(keys.size() == 15, fmt::format("{} variants instead of 15", keys.size()));
  if (!o.pass) return o;
  const Schedule schedule = BuildSchedule(keys, 90, 2026);
  std::map<VariantKey, int> per_variant;
  for (const ScheduleEntry& e : schedule.entries) ++per_variant[{e.env_id, e.story_id}];
  for (const auto& [k, n] : per_variant) {
    o.Require(n == 6, fmt::format("{}/{} has {} episodes", k.env_id, k.story_id, n));
  }
  o.Require(per_variant.size() == 15, "not every variant scheduled");
  const auto result = RunTournament(schedule, Materialize(catalog, keys, Regime::kMixTalk),
                                    Refs({"honest", "fabricate:1", "adaptive:1"}, Role::kSender),
                                    Refs({"trusting", "audit-greedy"}, Role::kReceiver), nullptr);
  std::map<std::pair<std::string, std::string>, std::multiset<std::pair<std::string, uint64_t>>>
      plays;
  for (const EpisodeTrace& t : result.traces) {
    plays[{t.sender_ref, t.receiver_ref}].insert({t.env_id, t.seed.value_or(0)});
  }
  o.Require(plays.size() == 6, "missing pairings");
  for (const auto& [pair, set] : plays) {
    o.Require(set.size() == 90 && set == plays.begin()->second,
              pair.first + " vs " + pair.second + " played a different (env, seed) multiset");
  }
  if (o.pass) o.detail = "15 variants x 6 episodes; 6 pairings share one (env_id, seed) multiset";
  return o;
}

}  // namespace
}  // namespace mixtalk

int main() {
  using mixtalk::Outcome;
  spdlog::set_level(spdlog::level::warn);
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "golden trace", 1.0, mixtalk::GoldenTrace},
      {2, "cost formulas", 0, mixtalk::CostFormulas},
      {3, "lie punishment", 0, mixtalk::LiePunishment},
      {4, "prior sampler", 30.0, mixtalk::Sampler},
      {5, "ranking oracles", 120.0, mixtalk::RankingOracles},
      {6, "behavioral metrics", 0, mixtalk::Behavior},
      {7, "counterfactual regimes", 0, mixtalk::Counterfactual},
      {8, "TOPD efficacy", 0, mixtalk::TopdEfficacy},
      {9, "reproducibility", 0, mixtalk::Reproducibility},
      {10, "schedule fidelity", 0, mixtalk::ScheduleFidelity},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      o.pass = false;
      o.detail += fmt::format("; took {:.2f}s, limit {:.0f}s", seconds, c.budget_seconds);
    }
    failed += o.pass ? 0 : 1;
    std::cout << fmt::format("criterion {:>2} {:<24} {}  [{:.2f}s] {}\n", c.id, c.name,
                             o.pass ? "PASS" : "FAIL", seconds, o.detail);
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed,
                           criteria.size());
  return failed == 0 ? 0 : 1;
}
