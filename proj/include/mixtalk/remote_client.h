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


// Client for OpenAI-style chat-completion services.

#ifndef MIXTALK_REMOTE_CLIENT_H_
#define MIXTALK_REMOTE_CLIENT_H_

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "mixtalk/game_model.h"

namespace mixtalk {

struct EndpointConfig {
  std::string name;
  // scheme://host[:port][/prefix]; requests go to <prefix>/chat/completions.
  std::string base_url;
  std::string model;
  // Environment variable holding the bearer credential. Unset means no
  // Authorization header.
  std::string api_key_env = "MIXTALK_API_KEY";
  double temperature = 0.7;
  int max_tokens = 16384;
  double timeout_seconds = 120.0;
  int max_attempts = 3;
  double backoff_initial_seconds = 1.0;
  double backoff_multiplier = 2.0;
  int max_in_flight = 4;
  // 0 disables the per-minute cap.
  int requests_per_minute = 0;
};

EndpointConfig EndpointFromJson(const Json& j);
// A JSON list of endpoint objects, keyed by name.
std::map<std::string, EndpointConfig> LoadEndpoints(const std::filesystem::path& path);

// Anything that turns a prompt into completion text. Tests substitute fakes.
class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  // Throws TransportError, Timeout or ServiceError.
  virtual std::string Generate(const std::string& prompt) = 0;
  virtual std::string Describe() const = 0;
};

class ChatCompletionClient : public TextGenerator {
 public:
  explicit ChatCompletionClient(EndpointConfig config);

  std::string Generate(const std::string& prompt) override;
  std::string Describe() const override { return config_.name + "@" + config_.model; }
  const EndpointConfig& config() const { return config_; }

 private:
  std::string Attempt(const std::string& body);
  void AcquireSlot();
  void ReleaseSlot();

  EndpointConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;

  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
  std::chrono::steady_clock::time_point next_request_;
};

// One-shot helper around ChatCompletionClient.
std::string RemoteGenerate(const EndpointConfig& config, const std::string& prompt);

// Pulls choices[0].message.content out of a response body.
std::string ExtractCompletionText(const std::string& body);

}  // namespace mixtalk

#endif  // MIXTALK_REMOTE_CLIENT_H_
