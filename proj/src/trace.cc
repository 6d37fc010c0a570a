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


#include "mixtalk/trace.h"

#include <algorithm>
#include <fstream>

#include "mixtalk/errors.h"

namespace mixtalk {
namespace {

template <typename T>
T Get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("trace is missing '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("trace field '") + key + "': " + e.what());
  }
}

void WriteIdentity(OrderedJson& j, const std::string& episode_id, const std::string& env_id,
                   const std::string& story_id, const std::string& sender,
                   const std::string& receiver) {
  j["episode_id"] = episode_id;
  j["env_id"] = env_id;
  j["story_schema_id"] = story_id;
  j["model_sender"] = sender;
  j["model_receiver"] = receiver;
}

ToolStatus ParseStatus(const std::string& s) {
  if (s == "OK") return ToolStatus::kOk;
  if (s == "UNAVAILABLE") return ToolStatus::kUnavailable;
  throw ParseError("unknown tool status '" + s + "'");
}

std::optional<uint64_t> OptionalSeed(const Json& j) {
  if (!j.contains("seed") || j.at("seed").is_null()) return std::nullopt;
  return j.at("seed").get<uint64_t>();
}

}  // namespace

std::string_view ToString(ToolStatus s) {
  return s == ToolStatus::kOk ? "OK" : "UNAVAILABLE";
}

OrderedJson TraceToJson(const EpisodeTrace& t, const GameConfig& config) {
  OrderedJson j;
  WriteIdentity(j, t.episode_id, t.env_id, t.story_id, t.sender_ref, t.receiver_ref);
  j["message"] = MessageToJson(t.message);
  OrderedJson transcript = OrderedJson::array();
  for (const ToolOutcome& o : t.tool_transcript) {
    OrderedJson entry;
    entry["attr_id"] = o.attr_id;
    entry["tool_id"] = o.tool_id;
    entry["cost"] = o.cost_charged;
    entry["observed_value"] = o.observed_value ? OrderedJson(*o.observed_value) : OrderedJson();
    entry["status"] = ToString(o.status);
    transcript.push_back(std::move(entry));
  }
  j["tool_transcript"] = std::move(transcript);
  j["theta_true"] = ThetaToJson(t.theta_true, config);
  j["theta_hat"] = ThetaToJson(t.theta_hat, config);
  j["payoffs"] = {{"Score_R", t.payoffs.score_r},
                  {"Score_S", t.payoffs.score_s},
                  {"err_ratio", t.payoffs.err_ratio},
                  {"cost_ratio", t.payoffs.cost_ratio},
                  {"claim_penalty", t.payoffs.claim_penalty},
                  {"caught_lie_perfect", t.payoffs.caught_lie_perfect ? 1 : 0}};
  if (t.seed) j["seed"] = *t.seed;
  j["regime"] = ToString(t.regime);
  if (t.budget_cap > 0) j["budget_cap"] = t.budget_cap;
  return j;
}

OrderedJson FailureToJson(const EpisodeFailure& f) {
  OrderedJson j;
  WriteIdentity(j, f.episode_id, f.env_id, f.story_id, f.sender_ref, f.receiver_ref);
  if (f.seed) j["seed"] = *f.seed;
  j["regime"] = ToString(f.regime);
  j["status"] = "FAILED";
  j["error"] = f.error;
  return j;
}

std::string TraceToLine(const EpisodeTrace& trace, const GameConfig& config) {
  return TraceToJson(trace, config).dump();
}

bool IsFailureRecord(const Json& j) {
  return j.is_object() && j.contains("status") && j.at("status") == "FAILED";
}

EpisodeFailure FailureFromJson(const Json& j) {
  EpisodeFailure f;
  f.episode_id = Get<std::string>(j, "episode_id");
  f.env_id = Get<std::string>(j, "env_id");
  f.story_id = Get<std::string>(j, "story_schema_id");
  f.sender_ref = Get<std::string>(j, "model_sender");
  f.receiver_ref = Get<std::string>(j, "model_receiver");
  f.seed = OptionalSeed(j);
  if (j.contains("regime")) f.regime = ParseRegime(Get<std::string>(j, "regime"));
  f.error = j.value("error", "");
  return f;
}

EpisodeTrace TraceFromJson(const Json& j, const GameConfig& config) {
  EpisodeTrace t;
  t.episode_id = Get<std::string>(j, "episode_id");
  t.env_id = Get<std::string>(j, "env_id");
  if (t.env_id != config.env_id) {
    throw ParseError("trace " + t.episode_id + " belongs to " + t.env_id + ", not " +
                     config.env_id);
  }
  t.story_id = Get<std::string>(j, "story_schema_id");
  t.sender_ref = Get<std::string>(j, "model_sender");
  t.receiver_ref = Get<std::string>(j, "model_receiver");
  t.seed = OptionalSeed(j);
  if (j.contains("regime")) t.regime = ParseRegime(Get<std::string>(j, "regime"));
  if (j.contains("budget_cap")) t.budget_cap = Get<int>(j, "budget_cap");
  t.message = MessageFromJson(Get<Json>(j, "message"));
  for (const Json& e : Get<Json>(j, "tool_transcript")) {
    ToolOutcome o;
    o.attr_id = Get<std::string>(e, "attr_id");
    o.tool_id = e.value("tool_id", "T_" + o.attr_id);
    o.cost_charged = Get<double>(e, "cost");
    o.status = ParseStatus(Get<std::string>(e, "status"));
    if (e.contains("observed_value") && !e.at("observed_value").is_null()) {
      o.observed_value = Get<int>(e, "observed_value");
    }
    if (o.status == ToolStatus::kOk && !o.observed_value) {
      throw ParseError("OK tool outcome without observed_value in " + t.episode_id);
    }
    const auto tool = std::find_if(config.tools.begin(), config.tools.end(),
                                   [&](const ToolSpec& s) { return s.attr_id == o.attr_id; });
    if (tool == config.tools.end()) {
      throw ParseError("trace " + t.episode_id + " queries unconfigured tool on " + o.attr_id);
    }
    o.was_perfect = o.status == ToolStatus::kOk && tool->CanConvict();
    t.tool_transcript.push_back(std::move(o));
  }
  t.theta_true = ThetaFromJson(Get<Json>(j, "theta_true"), config);
  t.theta_hat = ThetaFromJson(Get<Json>(j, "theta_hat"), config);
  const Json p = Get<Json>(j, "payoffs");
  t.payoffs.score_r = Get<double>(p, "Score_R");
  t.payoffs.score_s = Get<double>(p, "Score_S");
  t.payoffs.err_ratio = Get<double>(p, "err_ratio");
  t.payoffs.cost_ratio = Get<double>(p, "cost_ratio");
  t.payoffs.claim_penalty = Get<double>(p, "claim_penalty");
  const Json& caught = p.at("caught_lie_perfect");
  t.payoffs.caught_lie_perfect = caught.is_boolean() ? caught.get<bool>() : caught.get<int>() != 0;
  // Not stored; follows from the sender score identity.
  t.payoffs.persuasion = t.payoffs.score_s + t.payoffs.claim_penalty;
  return t;
}

TraceFile ReadTraceFile(const std::filesystem::path& path, const ConfigLookup& lookup) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  TraceFile out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      if (IsFailureRecord(j)) {
        out.failures.push_back(FailureFromJson(j));
      } else {
        out.traces.push_back(TraceFromJson(j, lookup(Get<std::string>(j, "env_id"))));
      }
    } catch (const Json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

TraceFile ReadTraceDir(const std::filesystem::path& dir, const ConfigLookup& lookup) {
  if (!std::filesystem::is_directory(dir)) {
    throw ParseError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  TraceFile out;
  for (const auto& f : files) {
    TraceFile part = ReadTraceFile(f, lookup);
    std::move(part.traces.begin(), part.traces.end(), std::back_inserter(out.traces));
    std::move(part.failures.begin(), part.failures.end(), std::back_inserter(out.failures));
  }
  return out;
}

}  // namespace mixtalk
