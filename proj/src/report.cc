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


#include "mixtalk/report.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "mixtalk/episode_engine.h"
#include "mixtalk/errors.h"
#include "mixtalk/tournament.h"

namespace mixtalk {
namespace {

struct RoleTable {
  std::vector<std::string> agents;
  BtRatings bt;
  std::vector<double> mean;
  std::vector<double> tor;
  std::vector<int> episodes;
  std::vector<int> failures;
};

RoleTable BuildRoleTable(const PayoffTensor& tensor, const TraceFile& data, Role role) {
  RoleTable t;
  const bool sender = role == Role::kSender;
  t.agents = sender ? tensor.senders() : tensor.receivers();
  const std::size_t n = t.agents.size();
  const std::size_t opponents = sender ? tensor.num_receivers() : tensor.num_senders();
  t.bt = FitBradleyTerry(t.agents, BuildComparisons(tensor, role));
  t.mean.assign(n, 0.0);
  t.episodes.assign(n, 0);
  t.failures.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    double sum = 0.0;
    for (std::size_t o = 0; o < opponents; ++o) {
      for (std::size_t e = 0; e < tensor.num_episodes(); ++e) {
        const std::size_t s = sender ? a : o;
        const std::size_t r = sender ? o : a;
        if (!tensor.Has(s, r, e)) continue;
        sum += tensor.Utility(role, a, o, e);
        ++t.episodes[a];
      }
    }
    t.mean[a] = t.episodes[a] > 0 ? sum / t.episodes[a] : std::nan("");
    t.tor.push_back(TournamentOracleRegret(tensor, t.agents[a], role));
  }
  for (const EpisodeFailure& f : data.failures) {
    const std::string& name = sender ? f.sender_ref : f.receiver_ref;
    for (std::size_t a = 0; a < n; ++a) {
      if (t.agents[a] == name) ++t.failures[a];
    }
  }
  return t;
}

std::string RoleCsv(const RoleTable& t) {
  std::string out = "agent,bt,bt_log,mean,tor,episodes,failures\n";
  for (std::size_t a = 0; a < t.agents.size(); ++a) {
    out += fmt::format("{},{},{},{},{},{},{}\n", CsvField(t.agents[a]),
                       FormatNumber(t.bt.ratings[a]), FormatNumber(t.bt.log_ratings[a]),
                       FormatNumber(t.mean[a]), FormatNumber(t.tor[a]), t.episodes[a],
                       t.failures[a]);
  }
  return out;
}

std::string MatrixCsv(const Matrix& m, const std::vector<std::string>& senders,
                      const std::vector<std::string>& receivers) {
  std::string out = "sender";
  for (const std::string& r : receivers) out += "," + CsvField(r);
  out += "\n";
  for (std::size_t s = 0; s < senders.size(); ++s) {
    out += CsvField(senders[s]);
    for (double v : m[s]) out += "," + FormatNumber(v);
    out += "\n";
  }
  return out;
}

std::string SenderBehaviorCsv(const BehaviorTables& b) {
  std::string out =
      "agent,env_id,episodes,frugality,frugality_normalized,omission,fabrication,"
      "exaggeration,cogency\n";
  for (const auto& [key, v] : b.sender) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", CsvField(key.first), CsvField(key.second),
                       b.sender_counts.at(key), FormatNumber(v.frugality),
                       FormatNumber(v.frugality_normalized), FormatNumber(v.omission),
                       FormatNumber(v.fabrication), FormatNumber(v.exaggeration),
                       FormatNumber(v.cogency));
  }
  return out;
}

std::string ReceiverBehaviorCsv(const BehaviorTables& b) {
  std::string out = "agent,env_id,episodes,frugality,skepticism,pessimism,paranoia,judgment\n";
  for (const auto& [key, v] : b.receiver) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", CsvField(key.first), CsvField(key.second),
                       b.receiver_counts.at(key), FormatNumber(v.frugality),
                       FormatNumber(v.skepticism), FormatNumber(v.pessimism),
                       FormatNumber(v.paranoia), FormatNumber(v.judgment));
  }
  return out;
}

void AppendLeaderboard(std::string& out, const char* title, const RoleTable& t,
                       const std::vector<double>& mass) {
  out += fmt::format("{}\n", title);
  out += fmt::format("  {:<28} {:>10} {:>10} {:>10} {:>10}\n", "agent", "BT", "mean", "TOR",
                     "alpha-rank");
  for (std::size_t a = 0; a < t.agents.size(); ++a) {
    out += fmt::format("  {:<28} {:>10} {:>10} {:>10} {:>10}\n", t.agents[a],
                       FormatNumber(t.bt.ratings[a]), FormatNumber(t.mean[a]),
                       FormatNumber(t.tor[a]), FormatNumber(mass[a]));
  }
  out += "\n";
}

}  // namespace

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "nan";
  // Avoid "-0.000000" for values that round to zero.
  if (std::fabs(v) < 5e-7) v = 0.0;
  return fmt::format("{:.6f}", v);
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ReportFiles BuildReport(const TraceFile& data, const ConfigLookup& lookup,
                        const ReportOptions& options) {
  if (data.traces.empty()) throw EmptySample("no completed episodes to report");
  const PayoffTensor tensor = TensorFromTraces(data.traces);
  const PayoffMatrices m = ComputePayoffMatrices(tensor);
  const RoleTable senders = BuildRoleTable(tensor, data, Role::kSender);
  const RoleTable receivers = BuildRoleTable(tensor, data, Role::kReceiver);
  const AlphaRankResult ar = AlphaRank(m.sender, m.receiver, options.alpha, options.population);
  const BehaviorTables behavior =
      AggregateBehavior(data.traces, lookup, options.judge, options.spec_for);

  ReportFiles files;
  files["summary_sender.csv"] = RoleCsv(senders);
  files["summary_receiver.csv"] = RoleCsv(receivers);
  files["payoff_sender.csv"] = MatrixCsv(m.sender, tensor.senders(), tensor.receivers());
  files["payoff_receiver.csv"] = MatrixCsv(m.receiver, tensor.senders(), tensor.receivers());
  files["behavior_sender.csv"] = SenderBehaviorCsv(behavior);
  files["behavior_receiver.csv"] = ReceiverBehaviorCsv(behavior);

  std::string alpha = "role,agent,mass\n";
  for (std::size_t s = 0; s < tensor.num_senders(); ++s) {
    alpha += fmt::format("sender,{},{}\n", CsvField(tensor.senders()[s]),
                         FormatNumber(ar.sender_mass[s]));
  }
  for (std::size_t r = 0; r < tensor.num_receivers(); ++r) {
    alpha += fmt::format("receiver,{},{}\n", CsvField(tensor.receivers()[r]),
                         FormatNumber(ar.receiver_mass[r]));
  }
  files["alpharank.csv"] = alpha;
  std::string profiles = "sender,receiver,mass\n";
  for (std::size_t s = 0; s < tensor.num_senders(); ++s) {
    for (std::size_t r = 0; r < tensor.num_receivers(); ++r) {
      profiles += fmt::format("{},{},{}\n", CsvField(tensor.senders()[s]),
                              CsvField(tensor.receivers()[r]),
                              FormatNumber(ar.profile_mass[s * tensor.num_receivers() + r]));
    }
  }
  files["alpharank_profiles.csv"] = profiles;

  std::string summary;
  summary += fmt::format("episodes: {} completed, {} failed\n", data.traces.size(),
                         data.failures.size());
  summary += fmt::format("agents: {} senders x {} receivers over {} episode ids\n",
                         tensor.num_senders(), tensor.num_receivers(), tensor.num_episodes());
  summary += fmt::format("alpha-rank: alpha = {}, population = {}\n\n",
                         FormatNumber(options.alpha), options.population);
  AppendLeaderboard(summary, "SENDERS", senders, ar.sender_mass);
  AppendLeaderboard(summary, "RECEIVERS", receivers, ar.receiver_mass);
  summary += fmt::format("maximin sender: {}\n",
                         Maximin(m.sender, Role::kSender, tensor.senders()));
  summary += fmt::format("maximin receiver: {}\n",
                         Maximin(m.receiver, Role::kReceiver, tensor.receivers()));
  const auto nash = PureNash(m.sender, m.receiver);
  summary += "pure Nash profiles:";
  if (nash.empty()) summary += " none";
  summary += "\n";
  for (const auto& [s, r] : nash) {
    summary += fmt::format("  {} vs {}\n", tensor.senders()[s], tensor.receivers()[r]);
  }
  files["summary.txt"] = summary;
  return files;
}

void WriteReport(const std::filesystem::path& dir, const ReportFiles& files) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SinkError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, contents] : files) {
    const std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << contents;
    if (!out) throw SinkError("cannot write " + path.string());
  }
}

std::vector<AuditMismatch> AuditTraces(const std::vector<EpisodeTrace>& traces,
                                       const ConfigLookup& lookup, double tolerance) {
  std::vector<AuditMismatch> out;
  for (const EpisodeTrace& t : traces) {
    const GameConfig config = lookup(t.env_id).WithRegime(t.regime);
    const PayoffBreakdown p =
        ScoreEpisode(t.message, t.tool_transcript, t.theta_true, t.theta_hat, config);
    const std::pair<const char*, std::pair<double, double>> fields[] = {
        {"Score_R", {t.payoffs.score_r, p.score_r}},
        {"Score_S", {t.payoffs.score_s, p.score_s}},
        {"err_ratio", {t.payoffs.err_ratio, p.err_ratio}},
        {"cost_ratio", {t.payoffs.cost_ratio, p.cost_ratio}},
        {"claim_penalty", {t.payoffs.claim_penalty, p.claim_penalty}},
        {"caught_lie_perfect",
         {t.payoffs.caught_lie_perfect ? 1.0 : 0.0, p.caught_lie_perfect ? 1.0 : 0.0}},
    };
    for (const auto& [name, values] : fields) {
      if (!(std::fabs(values.first - values.second) <= tolerance)) {
        out.push_back({t.episode_id, t.sender_ref, t.receiver_ref, name, values.first,
                       values.second});
      }
    }
  }
  return out;
}

}  // namespace mixtalk
