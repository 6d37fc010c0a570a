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


#include "mixtalk/cli.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "mixtalk/agents.h"
#include "mixtalk/behavior_metrics.h"
#include "mixtalk/catalog.h"
#include "mixtalk/errors.h"
#include "mixtalk/playbook.h"
#include "mixtalk/prompts.h"
#include "mixtalk/remote_client.h"
#include "mixtalk/report.h"
#include "mixtalk/topd.h"
#include "mixtalk/tournament.h"
#include "mixtalk/trace.h"

namespace mixtalk {
namespace {

namespace fs = std::filesystem;

struct CommonFlags {
  std::string config_dir = "data/configs";
  std::string stories = "data/stories";
  std::string regime;
  std::string endpoints;
  std::string prompts;
};

struct RunFlags {
  std::vector<std::string> senders;
  std::vector<std::string> receivers;
  int episodes = 90;
  uint64_t seed = 0;
  int jobs = 1;
  std::string out;
  std::string playbook;
  std::vector<std::string> envs;
  std::vector<std::string> story_ids;
};

struct RankFlags {
  std::string traces;
  std::string out;
  double alpha = kDefaultAlpha;
  int pop = kDefaultPopulation;
  std::string judge = "none";
};

struct DistillFlags {
  std::string traces;
  std::string out;
  double keep = kDefaultKeepFraction;
  std::string role = "receiver";
  std::string agent;
};

struct ReplayFlags {
  std::string traces;
  std::string receiver;
  std::string agent;
  std::string playbook;
  std::string out;
  int jobs = 1;
};

struct AuditFlags {
  std::string traces;
};

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void LoadCatalog(const CommonFlags& flags, Catalog& catalog, bool with_stories) {
  catalog.LoadConfigDir(flags.config_dir);
  if (with_stories) catalog.LoadStoryDir(flags.stories);
}

std::optional<Regime> RegimeOverride(const CommonFlags& flags) {
  if (flags.regime.empty()) return std::nullopt;
  return ParseRegime(flags.regime);
}

std::map<std::string, EndpointConfig> Endpoints(const CommonFlags& flags) {
  if (flags.endpoints.empty()) return {};
  return LoadEndpoints(flags.endpoints);
}

std::shared_ptr<const PromptTemplates> Templates(const CommonFlags& flags) {
  if (flags.prompts.empty()) return nullptr;
  return std::make_shared<const PromptTemplates>(LoadTemplates(flags.prompts));
}

TraceFile ReadTraces(const std::string& path, const ConfigLookup& lookup) {
  if (!fs::exists(path)) throw Error("trace path does not exist: " + path);
  return fs::is_directory(path) ? ReadTraceDir(path, lookup) : ReadTraceFile(path, lookup);
}

// Hashes of every config and story file that the run could read.
OrderedJson HashDir(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  OrderedJson out = OrderedJson::object();
  for (const fs::path& p : files) out[p.filename().string()] = Sha256File(p.string());
  return out;
}

std::string PayoffsCsv(const TournamentResult& result, const Schedule& schedule) {
  const PayoffTensor& t = result.tensor;
  std::string out = "sender,receiver,episode_id,env_id,story_id,score_s,score_r\n";
  for (std::size_t s = 0; s < t.num_senders(); ++s) {
    for (std::size_t r = 0; r < t.num_receivers(); ++r) {
      for (std::size_t e = 0; e < t.num_episodes(); ++e) {
        const ScheduleEntry& entry = schedule.entries[e];
        const bool has = t.Has(s, r, e);
        out += fmt::format("{},{},{},{},{},{},{}\n", CsvField(t.senders()[s]),
                           CsvField(t.receivers()[r]), entry.episode_id, entry.env_id,
                           entry.story_id,
                           has ? FormatNumber(t.SenderUtility(s, r, e)) : "FAILED",
                           has ? FormatNumber(t.ReceiverUtility(s, r, e)) : "FAILED");
      }
    }
  }
  return out;
}

void WriteFile(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  if (!out) throw SinkError("cannot write " + path.string());
}

int CmdRun(const CommonFlags& common, const RunFlags& flags, const std::string& command_line,
           std::ostream& out) {
  const std::string started = UtcTimestamp();
  Catalog catalog;
  LoadCatalog(common, catalog, true);
  const auto endpoints = Endpoints(common);
  std::vector<AgentRef> senders;
  std::vector<AgentRef> receivers;
  for (const std::string& s : flags.senders) {
    senders.push_back(ParseAgentRef(s, Role::kSender, endpoints));
  }
  for (const std::string& r : flags.receivers) {
    receivers.push_back(ParseAgentRef(r, Role::kReceiver, endpoints));
  }

  const std::set<std::string> env_filter(flags.envs.begin(), flags.envs.end());
  const std::set<std::string> story_filter(flags.story_ids.begin(), flags.story_ids.end());
  std::vector<VariantKey> keys;
  for (const VariantKey& k : catalog.CoveringVariants()) {
    if (!env_filter.empty() && env_filter.count(k.env_id) == 0) continue;
    if (!story_filter.empty() && story_filter.count(k.story_id) == 0) continue;
    keys.push_back(k);
  }
  if (keys.empty()) throw ValidationError("envs", "no (env, story) variant matches the filters");
  const Schedule schedule = BuildSchedule(keys, flags.episodes, flags.seed);

  const std::optional<Regime> regime = RegimeOverride(common);
  std::map<VariantKey, Variant> variants;
  for (const VariantKey& k : keys) {
    variants.emplace(k, catalog.Get(k.env_id, k.story_id,
                                    regime.value_or(catalog.Config(k.env_id).regime)));
  }

  TournamentOptions options;
  options.jobs = flags.jobs;
  options.templates = Templates(common);
  if (!flags.playbook.empty()) options.playbooks = LoadPlaybooks(flags.playbook);

  const fs::path out_dir = flags.out;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw SinkError("cannot create output directory " + out_dir.string());
  }
  DirectorySink sink(out_dir);
  const TournamentResult result =
      RunTournament(schedule, variants, senders, receivers, &sink, options);
  WriteFile(out_dir / "payoffs.csv", PayoffsCsv(result, schedule));

  OrderedJson manifest;
  manifest["command_line"] = command_line;
  manifest["master_seed"] = flags.seed;
  manifest["episodes_per_pair"] = flags.episodes;
  manifest["jobs"] = flags.jobs;
  manifest["regime_override"] = common.regime.empty() ? OrderedJson() : OrderedJson(common.regime);
  manifest["config_hashes"] = HashDir(common.config_dir);
  manifest["story_hashes"] = HashDir(common.stories);
  if (!flags.playbook.empty()) manifest["playbook_hash"] = Sha256File(flags.playbook);
  OrderedJson versions = OrderedJson::object();
  for (const AgentRef& a : senders) versions["sender:" + a.name] = a.Version();
  for (const AgentRef& a : receivers) versions["receiver:" + a.name] = a.Version();
  manifest["agent_versions"] = versions;
  OrderedJson files = OrderedJson::array();
  for (const AgentRef& s : senders) {
    for (const AgentRef& r : receivers) files.push_back(DirectorySink::FileName(s.name, r.name));
  }
  manifest["trace_files"] = files;
  manifest["payoffs"] = "payoffs.csv";
  manifest["schedule"] = ScheduleToJson(schedule);
  manifest["started_at"] = started;
  manifest["finished_at"] = UtcTimestamp();
  manifest["completed_episodes"] = result.traces.size();
  manifest["failed_episodes"] = result.failures.size();
  WriteFile(out_dir / "manifest.json", manifest.dump(2) + "\n");

  out << fmt::format("{} episodes completed, {} failed; traces in {}\n", result.traces.size(),
                     result.failures.size(), out_dir.string());
  return kExitOk;
}

int CmdRank(const CommonFlags& common, const RankFlags& flags, std::ostream& out) {
  Catalog catalog;
  const bool judging = flags.judge != "none";
  LoadCatalog(common, catalog, judging);
  const TraceFile data = ReadTraces(flags.traces, catalog.Lookup());

  std::unique_ptr<Judge> judge;
  if (flags.judge == "heuristic") {
    judge = std::make_unique<HeuristicJudge>();
  } else if (flags.judge.rfind("remote:", 0) == 0) {
    const auto endpoints = Endpoints(common);
    const auto it = endpoints.find(flags.judge.substr(7));
    if (it == endpoints.end()) throw ValidationError("judge", "unknown endpoint " + flags.judge);
    judge = std::make_unique<RemoteJudge>(std::make_shared<ChatCompletionClient>(it->second),
                                          Templates(common));
  } else if (judging) {
    throw ValidationError("judge", "expected none, heuristic or remote:<endpoint>");
  }

  ReportOptions options;
  options.alpha = flags.alpha;
  options.population = flags.pop;
  options.judge = judge.get();
  if (judge) {
    options.spec_for = [&catalog](const EpisodeTrace& t) -> const PublicSpec& {
      return catalog.Get(t.env_id, t.story_id, t.regime).spec;
    };
  }
  const ReportFiles files = BuildReport(data, catalog.Lookup(), options);
  WriteReport(flags.out, files);
  out << files.at("summary.txt");
  return kExitOk;
}

int CmdDistill(const CommonFlags& common, const DistillFlags& flags, std::ostream& out) {
  Catalog catalog;
  LoadCatalog(common, catalog, false);
  const TraceFile data = ReadTraces(flags.traces, catalog.Lookup());
  DistillOptions options;
  options.role = ParseRole(flags.role);
  options.keep_fraction = flags.keep;
  options.target_agent = flags.agent;
  const auto playbooks = Distill(data.traces, catalog.Lookup(), options);
  if (playbooks.empty()) throw EmptySample("no oracle episodes to distill");
  SavePlaybooks(playbooks, flags.out);
  for (const auto& [env, p] : playbooks) {
    out << PlaybookGuidance(p) << "\n";
  }
  return kExitOk;
}

int CmdReplay(const CommonFlags& common, const ReplayFlags& flags, std::ostream& out) {
  Catalog catalog;
  LoadCatalog(common, catalog, true);
  const TraceFile data = ReadTraces(flags.traces, catalog.Lookup());
  const AgentRef agent = ParseAgentRef(flags.agent.empty() ? flags.receiver : flags.agent,
                                       Role::kReceiver, Endpoints(common));
  std::map<std::string, Playbook> playbooks;
  if (!flags.playbook.empty()) playbooks = LoadPlaybooks(flags.playbook);
  ReplayOptions options;
  options.jobs = flags.jobs;
  options.templates = Templates(common);
  if (playbooks.empty()) options.receiver_suffix = "+replay";
  const std::vector<EpisodeTrace> replayed =
      ReplayWithPlaybooks(data.traces, flags.receiver, agent, playbooks, catalog, options);
  if (replayed.empty()) throw EmptySample("no traces for receiver " + flags.receiver);

  std::vector<EpisodeTrace> originals;
  for (const EpisodeTrace& t : data.traces) {
    if (t.receiver_ref == flags.receiver) originals.push_back(t);
  }
  std::map<std::string, std::vector<std::string>> by_sender;
  for (const EpisodeTrace& t : replayed) {
    by_sender[t.sender_ref].push_back(TraceToLine(t, catalog.Config(t.env_id)));
  }
  std::error_code ec;
  fs::create_directories(flags.out, ec);
  DirectorySink sink(flags.out);
  for (const auto& [sender, lines] : by_sender) {
    sink.WritePairing(sender, replayed.front().receiver_ref, lines);
  }

  const ReplaySummary before = SummarizeReceiverTraces(originals, catalog.Lookup());
  const ReplaySummary after = SummarizeReceiverTraces(replayed, catalog.Lookup());
  out << fmt::format("replayed {} as {} into {}\n", flags.receiver,
                     replayed.front().receiver_ref, flags.out);
  out << fmt::format("{:<10} {:>8} {:>10} {:>10} {:>10} {:>10}\n", "", "episodes", "cost",
                     "calls", "judgment", "Score_R");
  for (const auto& [label, s] : {std::pair{"original", before}, std::pair{"replayed", after}}) {
    out << fmt::format("{:<10} {:>8} {:>10} {:>10} {:>10} {:>10}\n", label, s.episodes,
                       FormatNumber(s.mean_cost), FormatNumber(s.mean_calls),
                       FormatNumber(s.mean_judgment), FormatNumber(s.mean_score_r));
  }
  return kExitOk;
}

int CmdAudit(const CommonFlags& common, const AuditFlags& flags, std::ostream& out,
             std::ostream& err) {
  Catalog catalog;
  LoadCatalog(common, catalog, false);
  const TraceFile data = ReadTraces(flags.traces, catalog.Lookup());
  const std::vector<AuditMismatch> mismatches = AuditTraces(data.traces, catalog.Lookup());
  if (mismatches.empty()) {
    out << fmt::format("audit ok: {} traces match their stored payoffs\n", data.traces.size());
    return kExitOk;
  }
  std::set<std::string> seen;
  for (const AuditMismatch& m : mismatches) {
    err << fmt::format("mismatch {} ({} vs {}): {} stored {} recomputed {}\n", m.episode_id,
                       m.sender, m.receiver, m.field, m.stored, m.recomputed);
    seen.insert(m.episode_id);
  }
  err << fmt::format("audit failed: {} mismatched episodes\n", seen.size());
  return kExitRuntime;
}

void AddCommon(CLI::App* app, CommonFlags& flags, bool regime) {
  app->add_option("--config-dir", flags.config_dir, "Directory of variant configs")
      ->capture_default_str();
  app->add_option("--stories", flags.stories, "Directory of story layers")
      ->capture_default_str();
  app->add_option("--endpoints", flags.endpoints, "JSON list of remote endpoints");
  app->add_option("--prompts", flags.prompts, "Directory overriding the prompt templates");
  if (regime) {
    app->add_option("--regime", flags.regime, "Override the configured regime")
        ->check(CLI::IsMember({"mixtalk", "cheaptalk", "disclosure", "MIXTALK", "CHEAPTALK",
                               "DISCLOSURE"}));
  }
}

}  // namespace

std::string Sha256File(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed for " + path);
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"MixTalk tournaments, rankings and playbook distillation", "mixtalk"};
  app.require_subcommand(1);
  CommonFlags common;
  RunFlags run;
  RankFlags rank;
  DistillFlags distill;
  ReplayFlags replay;
  AuditFlags audit;

  CLI::App* run_cmd = app.add_subcommand("run", "Run a sender x receiver tournament");
  AddCommon(run_cmd, common, true);
  run_cmd->add_option("--senders", run.senders, "Sender specs, comma separated")
      ->required()
      ->delimiter(',');
  run_cmd->add_option("--receivers", run.receivers, "Receiver specs, comma separated")
      ->required()
      ->delimiter(',');
  run_cmd->add_option("--episodes", run.episodes, "Episodes per pairing")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run.seed, "Master seed")->capture_default_str();
  run_cmd->add_option("--jobs", run.jobs, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--playbook", run.playbook, "Playbook JSON shown to receivers");
  run_cmd->add_option("--envs", run.envs, "Restrict to these env ids")->delimiter(',');
  run_cmd->add_option("--story-ids", run.story_ids, "Restrict to these story ids")
      ->delimiter(',');

  CLI::App* rank_cmd = app.add_subcommand("rank", "Rank agents and write report tables");
  rank_cmd->alias("report");
  AddCommon(rank_cmd, common, false);
  rank_cmd->add_option("--traces", rank.traces, "Trace directory or file")->required();
  rank_cmd->add_option("--out", rank.out, "Report directory")->required();
  rank_cmd->add_option("--alpha", rank.alpha, "alpha-Rank selection intensity")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  rank_cmd->add_option("--pop", rank.pop, "alpha-Rank population size")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000000));
  rank_cmd->add_option("--judge", rank.judge, "none | heuristic | remote:<endpoint>")
      ->capture_default_str();

  CLI::App* distill_cmd = app.add_subcommand("distill", "Distill a playbook from traces");
  AddCommon(distill_cmd, common, false);
  distill_cmd->add_option("--traces", distill.traces, "Trace directory or file")->required();
  distill_cmd->add_option("--out", distill.out, "Playbook JSON to write")->required();
  distill_cmd->add_option("--keep", distill.keep, "Fraction of oracle episodes kept")
      ->capture_default_str();
  distill_cmd->add_option("--role", distill.role, "Role to distill")
      ->capture_default_str()
      ->check(CLI::IsMember({"receiver"}));
  distill_cmd->add_option("--agent", distill.agent, "Target agent recorded in provenance");

  CLI::App* replay_cmd =
      app.add_subcommand("replay", "Replay stored sender messages against a receiver");
  AddCommon(replay_cmd, common, false);
  replay_cmd->add_option("--traces", replay.traces, "Trace directory or file")->required();
  replay_cmd->add_option("--receiver", replay.receiver, "Receiver whose traces are replayed")
      ->required();
  replay_cmd->add_option("--agent", replay.agent, "Receiver spec to replay with")
      ->capture_default_str();
  replay_cmd->add_option("--playbook", replay.playbook, "Playbook JSON");
  replay_cmd->add_option("--out", replay.out, "Directory for replayed traces")->required();
  replay_cmd->add_option("--jobs", replay.jobs, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  CLI::App* audit_cmd = app.add_subcommand("audit", "Recompute stored payoffs");
  AddCommon(audit_cmd, common, false);
  audit_cmd->add_option("--traces", audit.traces, "Trace directory or file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  std::string command_line = "mixtalk";
  for (int i = 1; i < argc; ++i) command_line += std::string(" ") + argv[i];
  try {
    if (*run_cmd) return CmdRun(common, run, command_line, out);
    if (*rank_cmd) return CmdRank(common, rank, out);
    if (*distill_cmd) return CmdDistill(common, distill, out);
    if (*replay_cmd) return CmdReplay(common, replay, out);
    if (*audit_cmd) return CmdAudit(common, audit, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"mixtalk"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mixtalk
