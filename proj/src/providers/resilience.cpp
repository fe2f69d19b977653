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

#include "msrag/providers/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace msrag::providers {

std::chrono::milliseconds RetryPolicy::delay_for(int retry) const {
  double ms = static_cast<double>(base_delay.count()) * std::pow(multiplier, retry - 1);
  ms = std::min(ms, static_cast<double>(max_delay.count()));
  return std::chrono::milliseconds(static_cast<long long>(ms));
}

Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

RateLimiter::RateLimiter(double requests_per_second, double burst)
    : rate_(requests_per_second),
      burst_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      last_(Clock::now()) {
  if (rate_ <= 0) throw InvalidInput("rate limit must be positive");
}

void RateLimiter::acquire() {
  std::unique_lock lock(mu_);
  for (;;) {
    auto now = Clock::now();
    std::chrono::duration<double> elapsed = now - last_;
    tokens_ = std::min(burst_, tokens_ + elapsed.count() * rate_);
    last_ = now;
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    // Sleeping under the lock keeps waiters in FIFO-ish order and the
    // bucket accounting exact.
    auto wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
    std::this_thread::sleep_for(wait);
  }
}

namespace {

void gate(const std::shared_ptr<RateLimiter>& limiter) {
  if (limiter) limiter->acquire();
}

}  // namespace

ResilientChat::ResilientChat(std::shared_ptr<ChatProvider> inner, RetryPolicy policy,
                             std::shared_ptr<RateLimiter> limiter, Sleeper sleep)
    : inner_(std::move(inner)),
      policy_(policy),
      limiter_(std::move(limiter)),
      sleep_(std::move(sleep)) {}

ChatResponse ResilientChat::do_complete(const ChatRequest& req) {
  return call_with_retries(policy_, sleep_, [&] {
    gate(limiter_);
    return inner_->complete(req);
  });
}

ResilientSearch::ResilientSearch(std::shared_ptr<SearchProvider> inner, RetryPolicy policy,
                                 std::shared_ptr<RateLimiter> limiter, Sleeper sleep)
    : inner_(std::move(inner)),
      policy_(policy),
      limiter_(std::move(limiter)),
      sleep_(std::move(sleep)) {}

std::vector<SearchResult> ResilientSearch::do_search(std::string_view query, int k) {
  return call_with_retries(policy_, sleep_, [&] {
    gate(limiter_);
    return inner_->search(query, k);
  });
}

ResilientEmbedder::ResilientEmbedder(std::shared_ptr<Embedder> inner, RetryPolicy policy,
                                     std::shared_ptr<RateLimiter> limiter, Sleeper sleep)
    : inner_(std::move(inner)),
      policy_(policy),
      limiter_(std::move(limiter)),
      sleep_(std::move(sleep)) {}

EmbeddingVector ResilientEmbedder::do_embed(std::string_view text) {
  return call_with_retries(policy_, sleep_, [&] {
    gate(limiter_);
    return inner_->embed(text);
  });
}

}  // namespace msrag::providers
