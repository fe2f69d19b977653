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

#include <atomic>
#include <memory>
#include <utility>

#include "msrag/providers/types.hpp"

namespace msrag::providers {

/// Counts requests that reach the wrapped provider, successful or not.
class CountingChat final : public ChatProvider {
 public:
  explicit CountingChat(std::shared_ptr<ChatProvider> inner) : inner_(std::move(inner)) {}
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  ChatResponse do_complete(const ChatRequest& req) override {
    ++calls_;
    return inner_->complete(req);
  }

  std::shared_ptr<ChatProvider> inner_;
  std::atomic<std::size_t> calls_{0};
};

class CountingSearch final : public SearchProvider {
 public:
  explicit CountingSearch(std::shared_ptr<SearchProvider> inner) : inner_(std::move(inner)) {}
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  std::vector<SearchResult> do_search(std::string_view query, int k) override {
    ++calls_;
    return inner_->search(query, k);
  }

  std::shared_ptr<SearchProvider> inner_;
  std::atomic<std::size_t> calls_{0};
};

class CountingEmbedder final : public Embedder {
 public:
  explicit CountingEmbedder(std::shared_ptr<Embedder> inner) : inner_(std::move(inner)) {}
  std::size_t calls() const noexcept { return calls_.load(); }

  std::size_t dimension() const override { return inner_->dimension(); }
  std::string model_id() const override { return inner_->model_id(); }

 private:
  EmbeddingVector do_embed(std::string_view text) override {
    ++calls_;
    return inner_->embed(text);
  }

  std::shared_ptr<Embedder> inner_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace msrag::providers
