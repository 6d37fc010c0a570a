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

#include "mixtalk/game_model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include "mixtalk/errors.h"
#include "mixtalk/prior_sampler.h"

namespace mixtalk {
namespace {

constexpr double kWeightTolerance = 1e-6;
constexpr double kMarginalTolerance = 1e-9;

std::string Upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json ParseJsonText(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

// Typed field access that reports schema problems as ParseError.
template <typename T>
T Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T FieldOr(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return Field<T>(j, key);
}

const std::vector<ToolSpec>& NoTools() {
  static const std::vector<ToolSpec> kEmpty;
  return kEmpty;
}

void CheckAcyclic(const PriorStructure& prior) {
  const std::size_t n = prior.size();
  std::vector<std::vector<int>> edges(n);
  for (const Constraint& c : prior.constraints) {
    edges[prior.IndexOf(c.lower)].push_back(prior.IndexOf(c.upper));
  }
  // 0 = unvisited, 1 = on stack, 2 = done.
  std::vector<int> state(n, 0);
  std::function<void(int)> visit = [&](int v) {
    state[v] = 1;
    for (int w : edges[v]) {
      if (state[w] == 1) {
        throw ValidationError("prior.constraints", "constraint graph has a cycle");
      }
      if (state[w] == 0) visit(w);
    }
    state[v] = 2;
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (state[v] == 0) visit(static_cast<int>(v));
  }
}

void NormalizeWeights(GameConfig& config, double AttributeSpec::*member,
                      const char* field) {
  double sum = 0.0;
  for (const AttributeSpec& a : config.attributes) {
    if (!(a.*member >= 0.0) || !std::isfinite(a.*member)) {
      throw ValidationError(field, "weight of " + a.id + " must be non-negative");
    }
    sum += a.*member;
  }
  if (std::abs(sum - 1.0) > kWeightTolerance) {
    std::ostringstream msg;
    msg << "weights sum to " << sum << ", expected 1";
    throw ValidationError(field, msg.str());
  }
  // Sums already within rounding of 1 are left alone so that a
  // serialize/parse cycle reproduces the weights bit for bit.
  if (std::abs(sum - 1.0) <= 1e-12) return;
  for (AttributeSpec& a : config.attributes) a.*member /= sum;
}

}  // namespace

std::string_view ToString(Objective v) {
  return v == Objective::kCoop ? "COOP" : "UP";
}

std::string_view ToString(ToolKind v) {
  switch (v) {
    case ToolKind::kPerfect:
      return "PERFECT";
    case ToolKind::kNoisy:
      return "NOISY";
    case ToolKind::kAvailability:
      return "AVAILABILITY";
  }
  return "?";
}

std::string_view ToString(Regime v) {
  switch (v) {
    case Regime::kMixTalk:
      return "MIXTALK";
    case Regime::kCheapTalk:
      return "CHEAPTALK";
    case Regime::kDisclosure:
      return "DISCLOSURE";
  }
  return "?";
}

std::string_view ToString(PersuasionWeights v) {
  return v == PersuasionWeights::kSender ? "sender" : "receiver";
}

std::string_view ToString(Role v) {
  return v == Role::kSender ? "sender" : "receiver";
}

Objective ParseObjective(std::string_view s) {
  const std::string u = Upper(s);
  if (u == "COOP") return Objective::kCoop;
  if (u == "UP") return Objective::kUp;
  throw ParseError("unknown sender_objective '" + std::string(s) + "'");
}

ToolKind ParseToolKind(std::string_view s) {
  const std::string u = Upper(s);
  if (u == "PERFECT") return ToolKind::kPerfect;
  if (u == "NOISY") return ToolKind::kNoisy;
  if (u == "AVAILABILITY") return ToolKind::kAvailability;
  throw ParseError("unknown tool kind '" + std::string(s) + "'");
}

Regime ParseRegime(std::string_view s) {
  const std::string u = Upper(s);
  if (u == "MIXTALK") return Regime::kMixTalk;
  if (u == "CHEAPTALK") return Regime::kCheapTalk;
  if (u == "DISCLOSURE") return Regime::kDisclosure;
  throw ParseError("unknown regime '" + std::string(s) + "'");
}

Role ParseRole(std::string_view s) {
  const std::string u = Upper(s);
  if (u == "SENDER") return Role::kSender;
  if (u == "RECEIVER") return Role::kReceiver;
  throw ParseError("unknown role '" + std::string(s) + "'");
}

int PriorStructure::IndexOf(std::string_view id) const {
  for (std::size_t i = 0; i < attr_ids.size(); ++i) {
    if (attr_ids[i] == id) return static_cast<int>(i);
  }
  return -1;
}

int GameConfig::IndexOf(std::string_view attr_id) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].id == attr_id) return static_cast<int>(i);
  }
  return -1;
}

const AttributeSpec& GameConfig::Attribute(std::string_view attr_id) const {
  const int i = IndexOf(attr_id);
  if (i < 0) throw UnknownAttribute("unknown attribute '" + std::string(attr_id) + "'");
  return attributes[i];
}

double GameConfig::EffectiveClaimCost(std::size_t index) const {
  return regime == Regime::kCheapTalk ? 0.0 : attributes.at(index).claim_cost;
}

const std::vector<ToolSpec>& GameConfig::EffectiveTools() const {
  return regime == Regime::kCheapTalk ? NoTools() : tools;
}

const ToolSpec* GameConfig::FindTool(std::string_view attr_id) const {
  for (const ToolSpec& t : EffectiveTools()) {
    if (t.attr_id == attr_id) return &t;
  }
  return nullptr;
}

GameConfig GameConfig::WithRegime(Regime r) const {
  GameConfig out = *this;
  out.regime = r;
  return out;
}

void ValidateConfig(GameConfig& config) {
  if (config.env_id.empty()) throw ValidationError("env_id", "must be non-empty");
  if (config.attributes.empty()) {
    throw ValidationError("attributes", "at least one attribute is required");
  }
  if (config.max_claims < 1) throw ValidationError("max_claims", "must be >= 1");
  if (!(config.max_claim_cost > 0.0)) {
    throw ValidationError("max_claim_cost", "must be positive");
  }
  if (!(config.max_tool_cost > 0.0)) {
    throw ValidationError("max_tool_cost", "must be positive");
  }
  if (config.statement_max_tokens < 1) {
    throw ValidationError("statement_max_tokens", "must be >= 1");
  }
  if (!(config.tool_scale >= 0.0)) throw ValidationError("tool_scale", "must be >= 0");
  if (!(config.claim_scale >= 0.0)) throw ValidationError("claim_scale", "must be >= 0");
  const bool needs_budget = config.regime != Regime::kCheapTalk;
  if (config.verification_budget < (needs_budget ? 1 : 0)) {
    throw ValidationError("verification_budget",
                          needs_budget ? "must be >= 1" : "must be >= 0");
  }

  std::set<std::string> seen;
  for (const AttributeSpec& a : config.attributes) {
    if (a.id.empty()) throw ValidationError("attributes.id", "empty id");
    if (!seen.insert(a.id).second) {
      throw ValidationError("attributes.id", "duplicate attribute id '" + a.id + "'");
    }
    if (!(a.claim_cost >= 0.0) || a.claim_cost > config.max_claim_cost) {
      throw ValidationError("attributes.claim_cost",
                            "claim cost of " + a.id + " must lie in [0, max_claim_cost]");
    }
  }
  NormalizeWeights(config, &AttributeSpec::weight_sender, "attributes.weight_sender");
  NormalizeWeights(config, &AttributeSpec::weight_receiver, "attributes.weight_receiver");

  std::set<std::string> tool_attrs;
  std::set<std::string> tool_ids;
  for (ToolSpec& t : config.tools) {
    const int idx = config.IndexOf(t.attr_id);
    if (idx < 0) {
      throw ValidationError("tools.attr_id", "unknown attribute '" + t.attr_id + "'");
    }
    if (!config.attributes[idx].verifiable) {
      throw ValidationError("tools.attr_id", "attribute '" + t.attr_id + "' is not verifiable");
    }
    if (!tool_attrs.insert(t.attr_id).second) {
      throw ValidationError("tools.attr_id", "more than one tool for '" + t.attr_id + "'");
    }
    if (t.tool_id.empty()) t.tool_id = "T_" + t.attr_id;
    if (!tool_ids.insert(t.tool_id).second) {
      throw ValidationError("tools.tool_id", "duplicate tool id '" + t.tool_id + "'");
    }
    if (!(t.cost >= 0.0) || t.cost > config.max_tool_cost) {
      throw ValidationError("tools.cost", "cost of " + t.tool_id + " must lie in [0, max_tool_cost]");
    }
    if (!(t.noise_rate >= 0.0 && t.noise_rate <= 1.0)) {
      throw ValidationError("tools.noise_rate", "must be a probability");
    }
    if (!(t.unavailable_rate >= 0.0 && t.unavailable_rate <= 1.0)) {
      throw ValidationError("tools.unavailable_rate", "must be a probability");
    }
    if (t.kind == ToolKind::kPerfect && t.noise_rate != 0.0) {
      throw ValidationError("tools.noise_rate", "PERFECT tool " + t.tool_id + " must have noise_rate 0");
    }
  }

  PriorStructure& prior = config.prior;
  if (prior.attr_ids.size() != config.attributes.size()) {
    throw ValidationError("prior.marginals", "expected one marginal per attribute");
  }
  for (std::size_t i = 0; i < config.attributes.size(); ++i) {
    if (prior.attr_ids[i] != config.attributes[i].id) {
      throw ValidationError("prior.marginals", "marginal order does not match attributes");
    }
    double sum = 0.0;
    for (double p : prior.marginals[i]) {
      if (!(p >= 0.0)) {
        throw ValidationError("prior.marginals", "negative probability for " + prior.attr_ids[i]);
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kMarginalTolerance) {
      throw ValidationError("prior.marginals", "marginal of " + prior.attr_ids[i] + " does not sum to 1");
    }
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const Correlation& c : prior.correlations) {
    if (config.IndexOf(c.a) < 0 || config.IndexOf(c.b) < 0) {
      throw ValidationError("prior.correlations", "unknown attribute in pair " + c.a + "/" + c.b);
    }
    if (c.a == c.b) throw ValidationError("prior.correlations", "self-correlation for " + c.a);
    if (!(c.rho >= -1.0 && c.rho <= 1.0)) {
      throw ValidationError("prior.correlations", "rho must lie in [-1, 1]");
    }
    auto key = std::minmax(c.a, c.b);
    if (!pairs.emplace(key.first, key.second).second) {
      throw ValidationError("prior.correlations", "duplicate pair " + c.a + "/" + c.b);
    }
  }
  for (const Constraint& c : prior.constraints) {
    if (config.IndexOf(c.lower) < 0 || config.IndexOf(c.upper) < 0) {
      throw ValidationError("prior.constraints", "unknown attribute in " + c.lower + "<=" + c.upper);
    }
    if (c.lower == c.upper) throw ValidationError("prior.constraints", "trivial constraint on " + c.lower);
  }
  CheckAcyclic(prior);
}

GameConfig ConfigFromJson(const Json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  GameConfig c;
  c.env_id = Field<std::string>(j, "env_id");
  c.description = FieldOr<std::string>(j, "description", "");
  c.regime = ParseRegime(FieldOr<std::string>(j, "regime", "MIXTALK"));
  c.persuasion_weights =
      FieldOr<std::string>(j, "persuasion_weights", "sender") == "receiver"
          ? PersuasionWeights::kReceiver
          : PersuasionWeights::kSender;
  c.verification_budget = Field<int>(j, "verification_budget");
  c.tool_scale = Field<double>(j, "tool_scale");
  c.claim_scale = Field<double>(j, "claim_scale");
  c.max_claims = Field<int>(j, "max_claims");
  c.max_claim_cost = Field<double>(j, "max_claim_cost");
  c.max_tool_cost = Field<double>(j, "max_tool_cost");
  c.statement_max_tokens = Field<int>(j, "statement_max_tokens");

  const Json attrs = Field<Json>(j, "attributes");
  if (!attrs.is_array()) throw ParseError("'attributes' must be a list");
  for (const Json& a : attrs) {
    AttributeSpec s;
    s.id = Field<std::string>(a, "id");
    s.verifiable = Field<bool>(a, "verifiable");
    s.sender_objective = ParseObjective(Field<std::string>(a, "sender_objective"));
    s.weight_sender = Field<double>(a, "weight_sender");
    s.weight_receiver = Field<double>(a, "weight_receiver");
    s.claim_cost = Field<double>(a, "claim_cost");
    c.attributes.push_back(std::move(s));
  }

  const Json tools = FieldOr<Json>(j, "tools", Json::array());
  if (!tools.is_array()) throw ParseError("'tools' must be a list");
  for (const Json& t : tools) {
    ToolSpec s;
    s.attr_id = Field<std::string>(t, "attr_id");
    s.tool_id = FieldOr<std::string>(t, "tool_id", "");
    s.cost = Field<double>(t, "cost");
    s.kind = ParseToolKind(Field<std::string>(t, "kind"));
    s.noise_rate = FieldOr<double>(t, "noise_rate", 0.0);
    s.unavailable_rate = FieldOr<double>(t, "unavailable_rate", 0.0);
    c.tools.push_back(std::move(s));
  }

  const Json prior = Field<Json>(j, "prior");
  const Json marginals = Field<Json>(prior, "marginals");
  if (!marginals.is_object()) throw ParseError("'prior.marginals' must be an object");
  for (const AttributeSpec& a : c.attributes) {
    if (!marginals.contains(a.id)) {
      throw ValidationError("prior.marginals", "missing marginal for " + a.id);
    }
    const Json& m = marginals.at(a.id);
    if (!m.is_array() || m.size() != static_cast<std::size_t>(kDomainSize)) {
      throw ValidationError("prior.marginals", "marginal of " + a.id + " must have 5 entries");
    }
    Marginal out{};
    for (int v = 0; v < kDomainSize; ++v) {
      if (!m[v].is_number()) throw ParseError("marginal entries must be numbers");
      out[v] = m[v].get<double>();
    }
    c.prior.attr_ids.push_back(a.id);
    c.prior.marginals.push_back(out);
  }
  for (const auto& [key, _] : marginals.items()) {
    if (c.IndexOf(key) < 0) {
      throw ValidationError("prior.marginals", "marginal for unknown attribute " + key);
    }
  }
  for (const Json& r : FieldOr<Json>(prior, "correlations", Json::array())) {
    c.prior.correlations.push_back(
        {Field<std::string>(r, "a"), Field<std::string>(r, "b"), Field<double>(r, "rho")});
  }
  for (const Json& r : FieldOr<Json>(prior, "constraints", Json::array())) {
    c.prior.constraints.push_back({Field<std::string>(r, "lower"), Field<std::string>(r, "upper")});
  }
  ValidateConfig(c);
  return c;
}

OrderedJson ConfigToJson(const GameConfig& c) {
  OrderedJson j;
  j["env_id"] = c.env_id;
  if (!c.description.empty()) j["description"] = c.description;
  j["regime"] = ToString(c.regime);
  j["verification_budget"] = c.verification_budget;
  j["tool_scale"] = c.tool_scale;
  j["claim_scale"] = c.claim_scale;
  j["max_claims"] = c.max_claims;
  j["max_claim_cost"] = c.max_claim_cost;
  j["max_tool_cost"] = c.max_tool_cost;
  j["statement_max_tokens"] = c.statement_max_tokens;
  j["persuasion_weights"] = ToString(c.persuasion_weights);
  OrderedJson attrs = OrderedJson::array();
  for (const AttributeSpec& a : c.attributes) {
    attrs.push_back({{"id", a.id},
                     {"verifiable", a.verifiable},
                     {"sender_objective", ToString(a.sender_objective)},
                     {"weight_sender", a.weight_sender},
                     {"weight_receiver", a.weight_receiver},
                     {"claim_cost", a.claim_cost}});
  }
  j["attributes"] = std::move(attrs);
  OrderedJson tools = OrderedJson::array();
  for (const ToolSpec& t : c.tools) {
    OrderedJson tj = {{"tool_id", t.tool_id},
                      {"attr_id", t.attr_id},
                      {"cost", t.cost},
                      {"kind", ToString(t.kind)}};
    if (t.noise_rate != 0.0) tj["noise_rate"] = t.noise_rate;
    if (t.unavailable_rate != 0.0) tj["unavailable_rate"] = t.unavailable_rate;
    tools.push_back(std::move(tj));
  }
  j["tools"] = std::move(tools);
  OrderedJson marginals = OrderedJson::object();
  for (std::size_t i = 0; i < c.prior.size(); ++i) {
    marginals[c.prior.attr_ids[i]] = c.prior.marginals[i];
  }
  OrderedJson correlations = OrderedJson::array();
  for (const Correlation& r : c.prior.correlations) {
    correlations.push_back({{"a", r.a}, {"b", r.b}, {"rho", r.rho}});
  }
  OrderedJson constraints = OrderedJson::array();
  for (const Constraint& r : c.prior.constraints) {
    constraints.push_back({{"lower", r.lower}, {"upper", r.upper}});
  }
  j["prior"] = {{"marginals", std::move(marginals)},
                {"correlations", std::move(correlations)},
                {"constraints", std::move(constraints)}};
  return j;
}

GameConfig ParseConfig(std::string_view text) {
  return ConfigFromJson(ParseJsonText(text, "config"));
}

GameConfig LoadConfig(const std::filesystem::path& path) {
  try {
    return ParseConfig(ReadFile(path));
  } catch (const ValidationError& e) {
    throw ValidationError(e.field(), path.filename().string() + ": " + e.what());
  }
}

bool StoryLayer::Covers(const GameConfig& config) const {
  return std::all_of(config.attributes.begin(), config.attributes.end(),
                     [&](const AttributeSpec& a) { return attr_names.count(a.id) > 0; });
}

StoryLayer ParseStory(std::string_view text) {
  const Json j = ParseJsonText(text, "story");
  StoryLayer s;
  s.story_id = Field<std::string>(j, "story_id");
  s.scenario_text = FieldOr<std::string>(j, "scenario_text", "");
  s.attr_names = Field<std::map<std::string, std::string>>(j, "attr_names");
  if (s.story_id.empty()) throw ValidationError("story_id", "must be non-empty");
  return s;
}

StoryLayer LoadStory(const std::filesystem::path& path) { return ParseStory(ReadFile(path)); }

OrderedJson ThetaToJson(const ThetaVector& theta, const GameConfig& config) {
  OrderedJson j = OrderedJson::object();
  for (std::size_t i = 0; i < config.size(); ++i) j[config.attributes[i].id] = theta[i];
  return j;
}

ThetaVector ThetaFromJson(const Json& j, const GameConfig& config) {
  if (!j.is_object()) throw ParseError("attribute vector must be an object");
  ThetaVector theta{std::vector<int>(config.size(), kDomainMin)};
  std::vector<bool> seen(config.size(), false);
  for (const auto& [key, value] : j.items()) {
    const int i = config.IndexOf(key);
    if (i < 0) throw ParseError("unknown attribute '" + key + "' in attribute vector");
    if (!value.is_number_integer()) {
      throw ParseError("value of " + key + " must be an integer");
    }
    const int v = value.get<int>();
    if (!InDomain(v)) throw OutOfDomainValue("value " + std::to_string(v) + " for " + key);
    theta[i] = v;
    seen[i] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw IncompleteEstimate("missing attribute " + config.attributes[i].id);
  }
  return theta;
}

std::optional<int> Message::ClaimedValue(std::string_view attr_id) const {
  for (const Claim& c : claims) {
    if (c.attr_id == attr_id) return c.value;
  }
  return std::nullopt;
}

void ValidateMessage(const Message& message, const GameConfig& config) {
  if (message.claims.size() > static_cast<std::size_t>(config.max_claims)) {
    throw TooManyClaims(std::to_string(message.claims.size()) + " claims exceed max_claims " +
                        std::to_string(config.max_claims));
  }
  std::set<std::string> seen;
  for (const Claim& c : message.claims) {
    if (config.IndexOf(c.attr_id) < 0) {
      throw UnknownAttribute("claim on unknown attribute '" + c.attr_id + "'");
    }
    if (!seen.insert(c.attr_id).second) throw DuplicateClaim("duplicate claim on " + c.attr_id);
    if (!InDomain(c.value)) {
      throw OutOfDomainValue("claimed value " + std::to_string(c.value) + " for " + c.attr_id);
    }
  }
}

std::size_t StatementCharBudget(const GameConfig& config) {
  return static_cast<std::size_t>(config.statement_max_tokens) * 4;
}

std::string TruncateStatement(std::string statement, const GameConfig& config) {
  const std::size_t budget = StatementCharBudget(config);
  if (statement.size() <= budget) return statement;
  std::size_t cut = budget;
  // Do not split a UTF-8 sequence.
  while (cut > 0 && (static_cast<unsigned char>(statement[cut]) & 0xC0) == 0x80) --cut;
  statement.resize(cut);
  return statement;
}

OrderedJson MessageToJson(const Message& message) {
  OrderedJson claims = OrderedJson::array();
  for (const Claim& c : message.claims) {
    claims.push_back({{"attr_id", c.attr_id}, {"value", c.value}});
  }
  return {{"claims", std::move(claims)}, {"statement", message.statement}};
}

Message MessageFromJson(const Json& j) {
  if (!j.is_object()) throw ParseError("message must be a JSON object");
  if (!j.contains("claims") || !j.at("claims").is_array()) {
    throw ParseError("'claims' must be a list");
  }
  Message m;
  for (const Json& c : j.at("claims")) {
    if (!c.is_object() || !c.contains("attr_id") || !c.at("attr_id").is_string()) {
      throw ParseError("each claim needs a string attr_id");
    }
    if (!c.contains("value") || !c.at("value").is_number()) {
      throw ParseError("each claim needs an integer value");
    }
    const Json& v = c.at("value");
    int value = 0;
    if (v.is_number_integer()) {
      value = v.get<int>();
    } else {
      const double d = v.get<double>();
      if (d != std::floor(d)) throw ParseError("claimed value must be an integer");
      value = static_cast<int>(d);
    }
    m.claims.push_back({c.at("attr_id").get<std::string>(), value});
  }
  if (j.contains("statement")) {
    if (!j.at("statement").is_string()) throw ParseError("'statement' must be a string");
    m.statement = j.at("statement").get<std::string>();
  }
  return m;
}

OrderedJson PublicSpec::ToJson() const {
  OrderedJson j;
  j["env_id"] = config.env_id;
  j["story_id"] = story_id;
  j["scenario"] = scenario;
  j["regime"] = ToString(config.regime);
  j["domain"] = {kDomainMin, kDomainMax};
  OrderedJson attrs = OrderedJson::array();
  for (std::size_t i = 0; i < config.size(); ++i) {
    const AttributeSpec& a = config.attributes[i];
    attrs.push_back({{"id", a.id},
                     {"name", attr_names[i]},
                     {"verifiable", a.verifiable},
                     {"sender_objective", ToString(a.sender_objective)},
                     {"weight_sender", a.weight_sender},
                     {"weight_receiver", a.weight_receiver},
                     {"claim_cost", config.EffectiveClaimCost(i)}});
  }
  j["attributes"] = std::move(attrs);
  OrderedJson full = ConfigToJson(config);
  j["prior"] = full["prior"];
  OrderedJson tools = OrderedJson::array();
  for (const ToolSpec& t : config.EffectiveTools()) {
    OrderedJson tj = {{"tool_id", t.tool_id},
                      {"attr_id", t.attr_id},
                      {"kind", ToString(t.kind)},
                      {"cost", t.cost}};
    if (t.kind == ToolKind::kNoisy) tj["noise_rate"] = t.noise_rate;
    if (t.kind == ToolKind::kAvailability) tj["unavailable_rate"] = t.unavailable_rate;
    tools.push_back(std::move(tj));
  }
  j["tools"] = std::move(tools);
  j["verification_budget"] = config.verification_budget;
  j["tool_scale"] = config.tool_scale;
  j["claim_scale"] = config.claim_scale;
  j["max_claims"] = config.max_claims;
  j["max_claim_cost"] = config.max_claim_cost;
  j["max_tool_cost"] = config.max_tool_cost;
  j["statement_max_tokens"] = config.statement_max_tokens;
  j["persuasion_weights"] = ToString(config.persuasion_weights);
  return j;
}

std::string PublicSpec::Serialize() const { return ToJson().dump(2); }

PublicSpec RenderPublicSpec(const GameConfig& config, const StoryLayer& story) {
  PublicSpec spec;
  for (const AttributeSpec& a : config.attributes) {
    auto it = story.attr_names.find(a.id);
    if (it == story.attr_names.end()) {
      throw CoverageError("story " + story.story_id + " has no name for attribute " + a.id);
    }
    spec.attr_names.push_back(it->second);
  }
  spec.config = config;
  spec.story_id = story.story_id;
  spec.scenario = story.scenario_text;
  spec.prior_default = PriorDefault(config.prior);
  for (const std::string& id : config.prior.attr_ids) {
    spec.prior_means.push_back(PriorMean(config.prior, id));
  }
  return spec;
}

}  // namespace mixtalk
