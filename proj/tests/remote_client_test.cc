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

#include <atomic>
#include <cstdlib>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "mixtalk/behavior_metrics.h"
#include "mixtalk/errors.h"
#include "test_util.h"

namespace mixtalk {
namespace {

std::string Completion(const std::string& text) {
  return Json{{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}}}.dump();
}

// Local chat-completion double: fails the first `failures` requests with 503.
class MockService {
 public:
  explicit MockService(int failures, std::string reply = "canned completion",
                       int delay_ms = 0)
      : failures_(failures), reply_(std::move(reply)), delay_ms_(delay_ms) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      ++requests;
      last_body = req.body;
      last_auth = req.get_header_value("Authorization");
      if (delay_ms_ > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));
      if (requests <= failures_) {
        res.status = 503;
        res.set_content("busy", "text/plain");
        return;
      }
      res.set_content(Completion(reply_), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockService() {
    server_.stop();
    thread_.join();
  }

  EndpointConfig Endpoint() const {
    EndpointConfig e;
    e.name = "mock";
    e.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
    e.model = "mock-model";
    e.api_key_env = "MIXTALK_TEST_KEY";
    e.backoff_initial_seconds = 0.01;
    e.timeout_seconds = 5;
    return e;
  }

  std::atomic<int> requests{0};
  std::string last_body;
  std::string last_auth;

 private:
  httplib::Server server_;
  int failures_;
  std::string reply_;
  int delay_ms_;
  int port_ = 0;
  std::thread thread_;
};

TEST_CASE("mock endpoint returns its canned completion") {
  setenv("MIXTALK_TEST_KEY", "secret", 1);
  MockService svc(0);
  CHECK(RemoteGenerate(svc.Endpoint(), "hello") == "canned completion");
  CHECK(svc.last_auth == "Bearer secret");
  const Json body = Json::parse(svc.last_body);
  CHECK(body["model"] == "mock-model");
  CHECK(body["temperature"] == 0.7);
  CHECK(body["max_tokens"] == 16384);
  CHECK(body["messages"][0]["content"] == "hello");
  unsetenv("MIXTALK_TEST_KEY");
}

TEST_CASE("transient failures are retried") {
  MockService svc(2);
  CHECK(RemoteGenerate(svc.Endpoint(), "x") == "canned completion");
  CHECK(svc.requests == 3);
}

TEST_CASE("persistent failures surface after the attempt budget") {
  MockService svc(100);
  try {
    RemoteGenerate(svc.Endpoint(), "x");
    FAIL("expected ServiceError");
  } catch (const ServiceError& e) {
    CHECK(e.status() == 503);
  }
  CHECK(svc.requests == 3);

  EndpointConfig closed = svc.Endpoint();
  closed.base_url = "http://127.0.0.1:1/v1";
  CHECK_THROWS_AS(RemoteGenerate(closed, "x"), TransportError);
}

TEST_CASE("slow services time out") {
  MockService svc(0, "late", 1500);
  EndpointConfig e = svc.Endpoint();
  e.timeout_seconds = 0.2;
  e.max_attempts = 1;
  CHECK_THROWS_AS(RemoteGenerate(e, "x"), Timeout);
}

TEST_CASE("endpoint files") {
  const Json j = {{"name", "lab"}, {"base_url", "https://example.invalid/v1"}, {"model", "m"}};
  const EndpointConfig e = EndpointFromJson(j);
  CHECK(e.temperature == 0.7);
  CHECK(e.max_tokens == 16384);
  CHECK(e.api_key_env == "MIXTALK_API_KEY");
  CHECK_THROWS_AS(ExtractCompletionText("{}"), TransportError);
}

TEST_CASE("remote judge parses and clamps the reply") {
  const PublicSpec spec = RenderPublicSpec(testing::TinyConfig(), testing::TinyStory());
  const Message m{{{"V1", 1}}, "Licence attached."};
  {
    MockService svc(0, "4.5");
    RemoteJudge judge(std::make_shared<ChatCompletionClient>(svc.Endpoint()));
    CHECK(JudgeCogency(&judge, m, spec.prior_default, spec) == 4.5);
  }
  {
    MockService svc(0, "9");
    RemoteJudge judge(std::make_shared<ChatCompletionClient>(svc.Endpoint()));
    CHECK(JudgeCogency(&judge, m, spec.prior_default, spec) == 5.0);
  }
  {
    MockService svc(100);
    RemoteJudge judge(std::make_shared<ChatCompletionClient>(svc.Endpoint()));
    CHECK_THROWS_AS(judge.Score(m, spec.prior_default, spec), JudgeUnavailable);
    CHECK(JudgeCogency(&judge, m, spec.prior_default, spec) == 0.0);
  }
}

}  // namespace
}  // namespace mixtalk
