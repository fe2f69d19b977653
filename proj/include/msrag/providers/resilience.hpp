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

#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "msrag/error.hpp"
#include "msrag/providers/types.hpp"

namespace msrag::providers {

/// Exponential backoff. Total attempts never exceed max_retries + 1.
struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{250};
  double multiplier = 2.0;
  std::chrono::milliseconds max_delay{8000};

  /// Delay before retry number `retry` (1-based).
  std::chrono::milliseconds delay_for(int retry) const;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

Sleeper real_sleeper();

/// Runs `fn`, retrying NetworkError and QuotaExceeded per `policy`. Any other
/// exception propagates immediately. The last transient error is rethrown
/// once attempts are exhausted.
template <class Fn>
auto call_with_retries(const RetryPolicy& policy, const Sleeper& sleep, Fn&& fn)
    -> decltype(fn()) {
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const NetworkError&) {
      if (attempt >= policy.max_retries) throw;
    } catch (const QuotaExceeded&) {
      if (attempt >= policy.max_retries) throw;
    }
    sleep(policy.delay_for(attempt + 1));
  }
}

/// Token bucket shared by every caller of one provider. `acquire()` blocks
/// until a request may leave the process.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  RateLimiter(double requests_per_second, double burst);

  void acquire();
  double rate() const noexcept { return rate_; }

 private:
  std::mutex mu_;
  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
};

class ResilientChat final : public ChatProvider {
 public:
  ResilientChat(std::shared_ptr<ChatProvider> inner, RetryPolicy policy,
                std::shared_ptr<RateLimiter> limiter, Sleeper sleep = real_sleeper());

 private:
  ChatResponse do_complete(const ChatRequest& req) override;

  std::shared_ptr<ChatProvider> inner_;
  RetryPolicy policy_;
  std::shared_ptr<RateLimiter> limiter_;
  Sleeper sleep_;
};

class ResilientSearch final : public SearchProvider {
 public:
  ResilientSearch(std::shared_ptr<SearchProvider> inner, RetryPolicy policy,
                  std::shared_ptr<RateLimiter> limiter, Sleeper sleep = real_sleeper());

 private:
  std::vector<SearchResult> do_search(std::string_view query, int k) override;

  std::shared_ptr<SearchProvider> inner_;
  RetryPolicy policy_;
  std::shared_ptr<RateLimiter> limiter_;
  Sleeper sleep_;
};

class ResilientEmbedder final : public Embedder {
 public:
  ResilientEmbedder(std::shared_ptr<Embedder> inner, RetryPolicy policy,
                    std::shared_ptr<RateLimiter> limiter, Sleeper sleep = real_sleeper());

  std::size_t dimension() const override { return inner_->dimension(); }
  std::string model_id() const override { return inner_->model_id(); }

 private:
  EmbeddingVector do_embed(std::string_view text) override;

  std::shared_ptr<Embedder> inner_;
  RetryPolicy policy_;
  std::shared_ptr<RateLimiter> limiter_;
  Sleeper sleep_;
};

}  // namespace msrag::providers
