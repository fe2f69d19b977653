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

#include <chrono>
#include <thread>

#include <gtest/gtest.h>

#include "msrag/error.hpp"
#include "msrag/providers/resilience.hpp"

namespace msrag::providers {
namespace {

using std::chrono::milliseconds;

class ScriptedFailures final : public ChatProvider {
 public:
  explicit ScriptedFailures(int failures, int kind) : failures_(failures), kind_(kind) {}
  int attempts = 0;

 private:
  ChatResponse do_complete(const ChatRequest&) override {
    if (attempts++ < failures_) {
      if (kind_ == 0) throw NetworkError("reset");
      if (kind_ == 1) throw QuotaExceeded("slow down");
      throw ProviderRefusal(400, "bad request");
    }
    return {"ok", FinishReason::Stop};
  }
  int failures_;
  int kind_;
};

ChatRequest hello() {
  ChatRequest r;
  r.model_id = "m";
  r.messages = {{Role::User, "hello"}};
  return r;
}

struct Recorder {
  std::vector<milliseconds> delays;
  Sleeper sleeper() {
    return [this](milliseconds d) { delays.push_back(d); };
  }
};

TEST(RetryPolicyTest, ExponentialWithCap) {
  RetryPolicy p;
  EXPECT_EQ(p.delay_for(1), milliseconds(250));
  EXPECT_EQ(p.delay_for(2), milliseconds(500));
  EXPECT_EQ(p.delay_for(3), milliseconds(1000));
  EXPECT_EQ(p.delay_for(10), milliseconds(8000));
}

TEST(Resilient, RecoversFromTransientErrors) {
  for (int kind : {0, 1}) {
    Recorder rec;
    auto inner = std::make_shared<ScriptedFailures>(2, kind);
    ResilientChat chat(inner, RetryPolicy{}, nullptr, rec.sleeper());
    EXPECT_EQ(chat.complete(hello()).content, "ok");
    EXPECT_EQ(inner->attempts, 3);
    EXPECT_EQ(rec.delays, (std::vector<milliseconds>{milliseconds(250), milliseconds(500)}));
  }
}

TEST(Resilient, GivesUpAfterMaxRetriesPlusOneAttempts) {
  Recorder rec;
  auto inner = std::make_shared<ScriptedFailures>(100, 0);
  RetryPolicy p;
  p.max_retries = 3;
  ResilientChat chat(inner, p, nullptr, rec.sleeper());
  EXPECT_THROW(chat.complete(hello()), NetworkError);
  EXPECT_EQ(inner->attempts, 4);
  EXPECT_EQ(rec.delays.size(), 3u);
}

TEST(Resilient, RefusalIsNotRetried) {
  Recorder rec;
  auto inner = std::make_shared<ScriptedFailures>(1, 2);
  ResilientChat chat(inner, RetryPolicy{}, nullptr, rec.sleeper());
  EXPECT_THROW(chat.complete(hello()), ProviderRefusal);
  EXPECT_EQ(inner->attempts, 1);
  EXPECT_TRUE(rec.delays.empty());
}

TEST(RateLimiterTest, SpacesRequestsAfterBurst) {
  RateLimiter limiter(50.0, 1.0);  // one request every 20 ms
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 6; ++i) limiter.acquire();
  auto elapsed = std::chrono::steady_clock::now() - start;
  // First token is free; five more need ~100 ms.
  EXPECT_GE(elapsed, milliseconds(90));
  EXPECT_LT(elapsed, milliseconds(1000));
}

TEST(RateLimiterTest, SharedAcrossThreads) {
  RateLimiter limiter(100.0, 1.0);
  auto start = std::chrono::steady_clock::now();
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 5; ++i) limiter.acquire();
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_GE(std::chrono::steady_clock::now() - start, milliseconds(180));
}

}  // namespace
}  // namespace msrag::providers
