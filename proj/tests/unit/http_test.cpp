/*
 * Copyright 2026 The MSRAG Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "msrag/error.hpp"
#include "msrag/providers/http.hpp"
#include "msrag/providers/resilience.hpp"

namespace msrag::providers {
namespace {

using nlohmann::json;

/// A loopback server whose handler is swapped per test.
class LocalServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit LocalServer(Handler h) : handler_(std::move(h)) {
    server_.Post(".*", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      last_body = req.body;
      last_path = req.path;
      last_auth = req.get_header_value("Authorization");
      handler_(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }

  std::string url(const std::string& path = "") const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  std::atomic<int> hits{0};
  std::string last_body;
  std::string last_path;
  std::string last_auth;

 private:
  httplib::Server server_;
  Handler handler_;
  int port_ = 0;
  std::thread thread_;
};

ChatRequest hello() {
  ChatRequest r;
  r.model_id = "gpt-3.5-turbo";
  r.messages = {{Role::System, "be brief"}, {Role::User, "hello"}};
  r.seed = 11;
  return r;
}

TEST(SplitBaseUrl, SeparatesOriginAndPath) {
  EXPECT_EQ(split_base_url("https://api.example.com/v1/"),
            (std::pair<std::string, std::string>{"https://api.example.com", "/v1"}));
  EXPECT_EQ(split_base_url("http://localhost:8000"),
            (std::pair<std::string, std::string>{"http://localhost:8000", ""}));
}

TEST(HttpChatTest, SendsOpenAiBodyAndReadsChoice) {
  LocalServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"choices":[{"message":{"content":"hi there"},"finish_reason":"length"}]})",
                    "application/json");
  });
  HttpChat chat({server.url("/v1"), "secret", std::chrono::seconds(5)});
  auto reply = chat.complete(hello());
  EXPECT_EQ(reply.content, "hi there");
  EXPECT_EQ(reply.finish_reason, FinishReason::Length);
  EXPECT_EQ(server.last_path, "/v1/chat/completions");
  EXPECT_EQ(server.last_auth, "Bearer secret");
  auto body = json::parse(server.last_body);
  EXPECT_EQ(body["model"], "gpt-3.5-turbo");
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["content"], "hello");
  EXPECT_EQ(body["temperature"], 0.0);
  EXPECT_EQ(body["seed"], 11);
}

TEST(HttpChatTest, MalformedSuccessBodyIsAnErrorReply) {
  LocalServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json", "text/plain");
  });
  HttpChat chat({server.url(), "", std::chrono::seconds(5)});
  auto reply = chat.complete(hello());
  EXPECT_EQ(reply.finish_reason, FinishReason::Error);
  EXPECT_EQ(reply.content, "");
}

TEST(HttpChatTest, StatusCodesMapToErrorKinds) {
  int status = 0;
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    res.status = status;
    res.set_content("{}", "application/json");
  });
  HttpChat chat({server.url(), "", std::chrono::seconds(5)});
  status = 429;
  EXPECT_THROW(chat.complete(hello()), QuotaExceeded);
  status = 503;
  EXPECT_THROW(chat.complete(hello()), NetworkError);
  status = 408;
  EXPECT_THROW(chat.complete(hello()), NetworkError);
  status = 401;
  try {
    chat.complete(hello());
    FAIL() << "expected refusal";
  } catch (const ProviderRefusal& e) {
    EXPECT_EQ(e.status(), 401);
  }
}

TEST(HttpChatTest, UnreachableHostIsNetworkError) {
  HttpChat chat({"http://127.0.0.1:1", "", std::chrono::seconds(2)});
  EXPECT_THROW(chat.complete(hello()), NetworkError);
}

TEST(HttpChatTest, RetriesServerErrorsThroughDecorator) {
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    if (server.hits < 3) {
      res.status = 500;
      return;
    }
    res.set_content(R"({"choices":[{"message":{"content":"ok"}}]})", "application/json");
  });
  auto raw = std::make_shared<HttpChat>(HttpEndpoint{server.url(), "", std::chrono::seconds(5)});
  ResilientChat chat(raw, RetryPolicy{}, nullptr, [](std::chrono::milliseconds) {});
  EXPECT_EQ(chat.complete(hello()).content, "ok");
  EXPECT_EQ(server.hits.load(), 3);
}

TEST(HttpSearchTest, RanksFollowResultOrderAndRespectK) {
  LocalServer server([](const httplib::Request& req, httplib::Response& res) {
    auto body = json::parse(req.body);
    json results = json::array();
    for (int i = 0; i < 7; ++i) {
      results.push_back({{"title", "t" + std::to_string(i)},
                         {"snippet", body["query"].get<std::string>()},
                         {"url", "https://e/" + std::to_string(i)}});
    }
    res.set_content(json{{"results", results}}.dump(), "application/json");
  });
  HttpSearch search({server.url("/search"), "", std::chrono::seconds(5)});
  auto results = search.search("who", 5);
  ASSERT_EQ(results.size(), 5u);
  EXPECT_EQ(results[0].rank, 1);
  EXPECT_EQ(results[4].rank, 5);
  EXPECT_EQ(results[2].url, "https://e/2");
  EXPECT_EQ(results[2].snippet, "who");
  EXPECT_EQ(json::parse(server.last_body)["k"], 5);
  EXPECT_TRUE(search.search("who", 0).empty());
}

TEST(HttpEmbedderTest, ChecksDimension) {
  LocalServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"vector":[1.0, 2.0, 2.0]})", "application/json");
  });
  HttpEmbedder ok({server.url(), "", std::chrono::seconds(5)}, "bert-base-uncased", 3);
  EXPECT_EQ(ok.embed("x").values, (std::vector<double>{1.0, 2.0, 2.0}));
  EXPECT_EQ(json::parse(server.last_body)["model"], "bert-base-uncased");
  HttpEmbedder wrong({server.url(), "", std::chrono::seconds(5)}, "bert-base-uncased", 768);
  EXPECT_THROW(wrong.embed("x"), DimensionMismatch);
  // Blank text never leaves the process.
  const int before = server.hits;
  EXPECT_TRUE(ok.embed("   ").is_zero());
  EXPECT_EQ(server.hits.load(), before);
}

}  // namespace
}  // namespace msrag::providers
