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


#include "mixtalk/tournament.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <set>
#include <thread>

#include "mixtalk/errors.h"
#include "spdlog/spdlog.h"

namespace mixtalk {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string EpisodeId(int k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ep%06d", k);
  return buf;
}

int IndexIn(const std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

std::string Sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

}  // namespace

Schedule BuildSchedule(const std::vector<VariantKey>& variants, int episodes_per_pair,
                       uint64_t master_seed) {
  if (variants.empty()) throw DivisibilityError("no variants to schedule");
  const int v = static_cast<int>(variants.size());
  if (episodes_per_pair <= 0 || episodes_per_pair % v != 0) {
    throw DivisibilityError(std::to_string(episodes_per_pair) +
                            " episodes cannot be split evenly over " + std::to_string(v) +
                            " variants");
  }
  Schedule s;
  s.episodes_per_pair = episodes_per_pair;
  s.master_seed = master_seed;
  for (int k = 0; k < episodes_per_pair; ++k) {
    const VariantKey& key = variants[k % v];
    ScheduleEntry e;
    e.episode_id = EpisodeId(k);
    e.env_id = key.env_id;
    e.story_id = key.story_id;
    e.episode_index = k;
    e.index_in_variant = k / v;
    e.seed = EntrySeed(master_seed, key.env_id, key.story_id, e.index_in_variant);
    s.entries.push_back(std::move(e));
  }
  return s;
}

OrderedJson ScheduleToJson(const Schedule& schedule) {
  OrderedJson entries = OrderedJson::array();
  for (const ScheduleEntry& e : schedule.entries) {
    entries.push_back({{"episode_id", e.episode_id},
                       {"env_id", e.env_id},
                       {"story_id", e.story_id},
                       {"index_in_variant", e.index_in_variant},
                       {"seed", e.seed}});
  }
  return {{"master_seed", schedule.master_seed},
          {"episodes_per_pair", schedule.episodes_per_pair},
          {"entries", std::move(entries)}};
}

PayoffTensor::PayoffTensor(std::vector<std::string> senders, std::vector<std::string> receivers,
                           std::vector<std::string> episode_ids)
    : senders_(std::move(senders)),
      receivers_(std::move(receivers)),
      episode_ids_(std::move(episode_ids)),
      u_s_(senders_.size() * receivers_.size() * episode_ids_.size(), kMissing),
      u_r_(u_s_.size(), kMissing) {}

std::size_t PayoffTensor::Flat(std::size_t s, std::size_t r, std::size_t e) const {
  return (s * receivers_.size() + r) * episode_ids_.size() + e;
}

void PayoffTensor::Set(std::size_t s, std::size_t r, std::size_t e, double u_s, double u_r) {
  u_s_.at(Flat(s, r, e)) = u_s;
  u_r_.at(Flat(s, r, e)) = u_r;
}

bool PayoffTensor::Has(std::size_t s, std::size_t r, std::size_t e) const {
  return !std::isnan(u_s_.at(Flat(s, r, e)));
}

double PayoffTensor::SenderUtility(std::size_t s, std::size_t r, std::size_t e) const {
  return u_s_.at(Flat(s, r, e));
}

double PayoffTensor::ReceiverUtility(std::size_t s, std::size_t r, std::size_t e) const {
  return u_r_.at(Flat(s, r, e));
}

double PayoffTensor::Utility(Role role, std::size_t own, std::size_t opponent,
                             std::size_t e) const {
  return role == Role::kSender ? SenderUtility(own, opponent, e)
                               : ReceiverUtility(opponent, own, e);
}

std::size_t PayoffTensor::FailureCount(std::size_t s, std::size_t r) const {
  std::size_t n = 0;
  for (std::size_t e = 0; e < episode_ids_.size(); ++e) n += Has(s, r, e) ? 0 : 1;
  return n;
}

std::size_t PayoffTensor::TotalFailures() const {
  return static_cast<std::size_t>(
      std::count_if(u_s_.begin(), u_s_.end(), [](double x) { return std::isnan(x); }));
}

int PayoffTensor::SenderIndex(const std::string& name) const { return IndexIn(senders_, name); }
int PayoffTensor::ReceiverIndex(const std::string& name) const {
  return IndexIn(receivers_, name);
}
int PayoffTensor::EpisodeIndex(const std::string& id) const { return IndexIn(episode_ids_, id); }

bool PayoffTensor::operator==(const PayoffTensor& o) const {
  if (senders_ != o.senders_ || receivers_ != o.receivers_ || episode_ids_ != o.episode_ids_) {
    return false;
  }
  auto same = [](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::isnan(a[i]) != std::isnan(b[i])) return false;
      if (!std::isnan(a[i]) && a[i] != b[i]) return false;
    }
    return true;
  };
  return same(u_s_, o.u_s_) && same(u_r_, o.u_r_);
}

PayoffMatrices ComputePayoffMatrices(const PayoffTensor& t) {
  PayoffMatrices m;
  m.sender.assign(t.num_senders(), std::vector<double>(t.num_receivers(), 0.0));
  m.receiver = m.sender;
  for (std::size_t s = 0; s < t.num_senders(); ++s) {
    for (std::size_t r = 0; r < t.num_receivers(); ++r) {
      double sum_s = 0.0;
      double sum_r = 0.0;
      std::size_t n = 0;
      for (std::size_t e = 0; e < t.num_episodes(); ++e) {
        if (!t.Has(s, r, e)) continue;
        sum_s += t.SenderUtility(s, r, e);
        sum_r += t.ReceiverUtility(s, r, e);
        ++n;
      }
      if (n == 0) {
        throw EmptyCell("no completed episode for " + t.senders()[s] + " vs " +
                        t.receivers()[r]);
      }
      m.sender[s][r] = sum_s / n;
      m.receiver[s][r] = sum_r / n;
    }
  }
  return m;
}

PayoffTensor TensorFromTraces(const std::vector<EpisodeTrace>& traces) {
  std::set<std::string> senders, receivers, episodes;
  for (const EpisodeTrace& t : traces) {
    senders.insert(t.sender_ref);
    receivers.insert(t.receiver_ref);
    episodes.insert(t.episode_id);
  }
  PayoffTensor tensor({senders.begin(), senders.end()}, {receivers.begin(), receivers.end()},
                      {episodes.begin(), episodes.end()});
  for (const EpisodeTrace& t : traces) {
    const int s = tensor.SenderIndex(t.sender_ref);
    const int r = tensor.ReceiverIndex(t.receiver_ref);
    const int e = tensor.EpisodeIndex(t.episode_id);
    if (tensor.Has(s, r, e)) {
      throw ParseError("duplicate trace " + t.episode_id + " for " + t.sender_ref + " vs " +
                       t.receiver_ref);
    }
    tensor.Set(s, r, e, t.payoffs.score_s, t.payoffs.score_r);
  }
  return tensor;
}

DirectorySink::DirectorySink(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw SinkError("cannot create trace directory " + dir_.string());
  }
}

std::string DirectorySink::FileName(const std::string& sender, const std::string& receiver) {
  return Sanitize(sender) + "__" + Sanitize(receiver) + ".jsonl";
}

void DirectorySink::WritePairing(const std::string& sender, const std::string& receiver,
                                 const std::vector<std::string>& lines) {
  std::lock_guard<std::mutex> lock(mu_);
  const auto path = dir_ / FileName(sender, receiver);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SinkError("cannot open " + path.string());
  for (const std::string& line : lines) out << line << '\n';
  out.flush();
  if (!out) throw SinkError("failed writing " + path.string());
}

void MemorySink::WritePairing(const std::string& sender, const std::string& receiver,
                              const std::vector<std::string>& lines) {
  auto& file = files[{sender, receiver}];
  file.insert(file.end(), lines.begin(), lines.end());
}

void ParallelFor(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

TournamentResult RunTournament(const Schedule& schedule,
                               const std::map<VariantKey, Variant>& variants,
                               const std::vector<AgentRef>& senders,
                               const std::vector<AgentRef>& receivers, TraceSink* sink,
                               const TournamentOptions& options) {
  std::vector<std::string> sender_names, receiver_names, episode_ids;
  for (const AgentRef& a : senders) sender_names.push_back(a.name);
  for (const AgentRef& a : receivers) receiver_names.push_back(a.name);
  for (const ScheduleEntry& e : schedule.entries) episode_ids.push_back(e.episode_id);
  if (std::set<std::string>(sender_names.begin(), sender_names.end()).size() !=
          sender_names.size() ||
      std::set<std::string>(receiver_names.begin(), receiver_names.end()).size() !=
          receiver_names.size()) {
    throw ValidationError("agents", "agent names must be unique within a role");
  }
  std::vector<const Variant*> entry_variant;
  for (const ScheduleEntry& e : schedule.entries) {
    auto it = variants.find({e.env_id, e.story_id});
    if (it == variants.end()) {
      throw ValidationError("schedule", "no variant for " + e.env_id + "/" + e.story_id);
    }
    entry_variant.push_back(&it->second);
  }

  auto generator_for = [&](const AgentRef& ref) -> std::shared_ptr<TextGenerator> {
    if (ref.kind == AgentKind::kRemote && options.generator_factory) {
      return options.generator_factory(ref);
    }
    return nullptr;
  };
  std::vector<std::unique_ptr<SenderAgent>> sender_agents;
  std::vector<std::unique_ptr<ReceiverAgent>> receiver_agents;
  for (const AgentRef& a : senders) {
    sender_agents.push_back(MakeSender(a, generator_for(a), options.templates));
  }
  for (const AgentRef& a : receivers) {
    receiver_agents.push_back(MakeReceiver(a, generator_for(a), options.templates));
  }

  const std::size_t ns = senders.size(), nr = receivers.size(), ne = schedule.entries.size();
  struct Outcome {
    std::optional<EpisodeTrace> trace;
    std::optional<EpisodeFailure> failure;
  };
  std::vector<Outcome> outcomes(ns * nr * ne);
  ParallelFor(outcomes.size(), options.jobs, [&](std::size_t task) {
    const std::size_t e = task % ne;
    const std::size_t r = (task / ne) % nr;
    const std::size_t s = task / (ne * nr);
    const ScheduleEntry& entry = schedule.entries[e];
    const Variant& variant = *entry_variant[e];
    EpisodeOptions episode_options;
    if (auto it = options.playbooks.find(entry.env_id); it != options.playbooks.end()) {
      episode_options.playbook = &it->second;
    }
    try {
      outcomes[task].trace = RunEpisode(variant, *sender_agents[s], *receiver_agents[r],
                                        entry.seed, entry.episode_id, episode_options);
    } catch (const std::exception& ex) {
      spdlog::warn("episode {} ({} vs {}) failed: {}", entry.episode_id, sender_names[s],
                   receiver_names[r], ex.what());
      outcomes[task].failure = EpisodeFailure{entry.episode_id, entry.env_id,
                                              entry.story_id,   sender_names[s],
                                              receiver_names[r], entry.seed,
                                              variant.config.regime, ex.what()};
    }
  });

  TournamentResult result;
  result.tensor = PayoffTensor(sender_names, receiver_names, episode_ids);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t r = 0; r < nr; ++r) {
      std::vector<std::string> lines;
      for (std::size_t e = 0; e < ne; ++e) {
        Outcome& o = outcomes[(s * nr + r) * ne + e];
        if (o.trace) {
          lines.push_back(TraceToLine(*o.trace, entry_variant[e]->config));
          result.tensor.Set(s, r, e, o.trace->payoffs.score_s, o.trace->payoffs.score_r);
          result.traces.push_back(std::move(*o.trace));
        } else {
          lines.push_back(FailureToJson(*o.failure).dump());
          result.failures.push_back(std::move(*o.failure));
        }
      }
      if (sink != nullptr) sink->WritePairing(sender_names[s], receiver_names[r], lines);
    }
  }
  return result;
}

}  // namespace mixtalk
