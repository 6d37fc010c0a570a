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


#include "mixtalk/remote_client.h"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <thread>

#include "httplib.h"
#include "spdlog/spdlog.h"

#include "mixtalk/errors.h"

namespace mixtalk {
namespace {

using Clock = std::chrono::steady_clock;

bool Retryable(int status) { return status == 429 || status >= 500; }

std::chrono::microseconds Seconds(double s) {
  return std::chrono::microseconds(static_cast<int64_t>(s * 1e6));
}

}  // namespace

EndpointConfig EndpointFromJson(const Json& j) {
  EndpointConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    c.base_url = j.at("base_url").get<std::string>();
    c.model = j.at("model").get<std::string>();
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.temperature = j.value("temperature", c.temperature);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.max_attempts = j.value("max_attempts", c.max_attempts);
    c.backoff_initial_seconds = j.value("backoff_initial_seconds", c.backoff_initial_seconds);
    c.backoff_multiplier = j.value("backoff_multiplier", c.backoff_multiplier);
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    c.requests_per_minute = j.value("requests_per_minute", c.requests_per_minute);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("endpoint config: ") + e.what());
  }
  if (c.max_attempts < 1) throw ValidationError("max_attempts", "must be >= 1");
  if (c.max_in_flight < 1) throw ValidationError("max_in_flight", "must be >= 1");
  return c;
}

std::map<std::string, EndpointConfig> LoadEndpoints(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  std::map<std::string, EndpointConfig> out;
  for (const Json& item : j.is_array() ? j : Json::array({j})) {
    EndpointConfig c = EndpointFromJson(item);
    out[c.name] = c;
  }
  return out;
}

ChatCompletionClient::ChatCompletionClient(EndpointConfig config)
    : config_(std::move(config)), next_request_(Clock::now()) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.base_url, m, kUrl)) {
    throw ValidationError("base_url", "expected scheme://host[:port][/prefix], got '" +
                                          config_.base_url + "'");
  }
  scheme_host_port_ = m[1].str();
  path_prefix_ = m[2].matched ? m[2].str() : "";
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

void ChatCompletionClient::AcquireSlot() {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [&] { return in_flight_ < config_.max_in_flight; });
  ++in_flight_;
  if (config_.requests_per_minute > 0) {
    const auto now = Clock::now();
    const auto start = std::max(now, next_request_);
    next_request_ = start + Seconds(60.0 / config_.requests_per_minute);
    lock.unlock();
    std::this_thread::sleep_until(start);
  }
}

void ChatCompletionClient::ReleaseSlot() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

std::string ChatCompletionClient::Attempt(const std::string& body) {
  httplib::Client client(scheme_host_port_);
  const auto timeout = Seconds(config_.timeout_seconds);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key != nullptr && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }
  const auto started = Clock::now();
  auto res = client.Post(path_prefix_ + "/chat/completions", headers, body, "application/json");
  if (!res) {
    const httplib::Error err = res.error();
    const bool timed_out =
        err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && Clock::now() - started >= timeout);
    const std::string what = config_.name + ": " + httplib::to_string(err);
    if (timed_out) throw Timeout(what);
    throw TransportError(what);
  }
  spdlog::debug("{} -> HTTP {} ({} bytes)", config_.name, res->status, res->body.size());
  if (res->status != 200) throw ServiceError(res->status, res->body.substr(0, 512));
  return ExtractCompletionText(res->body);
}

std::string ChatCompletionClient::Generate(const std::string& prompt) {
  const Json request = {{"model", config_.model},
                        {"messages", Json::array({{{"role", "user"}, {"content", prompt}}})},
                        {"temperature", config_.temperature},
                        {"max_tokens", config_.max_tokens}};
  const std::string body = request.dump();
  double backoff = config_.backoff_initial_seconds;
  for (int attempt = 1;; ++attempt) {
    AcquireSlot();
    try {
      spdlog::debug("{} request attempt {} ({} prompt chars)", config_.name, attempt,
                    prompt.size());
      std::string text = Attempt(body);
      ReleaseSlot();
      return text;
    } catch (const ServiceError& e) {
      ReleaseSlot();
      if (!Retryable(e.status()) || attempt >= config_.max_attempts) throw;
      spdlog::warn("{} attempt {} failed: {}", config_.name, attempt, e.what());
    } catch (const TransportError& e) {
      ReleaseSlot();
      if (attempt >= config_.max_attempts) throw;
      spdlog::warn("{} attempt {} failed: {}", config_.name, attempt, e.what());
    } catch (...) {
      ReleaseSlot();
      throw;
    }
    std::this_thread::sleep_for(Seconds(backoff));
    backoff *= config_.backoff_multiplier;
  }
}

std::string RemoteGenerate(const EndpointConfig& config, const std::string& prompt) {
  return ChatCompletionClient(config).Generate(prompt);
}

std::string ExtractCompletionText(const std::string& body) {
  try {
    const Json j = Json::parse(body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const Json::exception& e) {
    throw TransportError(std::string("unexpected completion body: ") + e.what());
  }
}

}  // namespace mixtalk
