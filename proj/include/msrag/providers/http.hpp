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

// HTTP JSON providers.
//
//   chat:   POST <base>/chat/completions, OpenAI-compatible request/response
//   search: POST <base> {"query", "k"} -> {"results": [{"title", "snippet", "url"}]}
//   embed:  POST <base> {"text", "model"} -> {"vector": [real]}
//
// Status mapping: transport failure, 408 and 5xx raise NetworkError; 429
// raises QuotaExceeded; any other non-2xx raises ProviderRefusal. Retries
// and rate limiting live in the Resilient* decorators, not here.

#include <chrono>
#include <string>

#include "msrag/providers/types.hpp"

namespace msrag::providers {

struct HttpEndpoint {
  std::string base_url;  // scheme://host[:port][/path]
  std::string token;     // sent as "Authorization: Bearer <token>" when non-empty
  std::chrono::seconds timeout{60};
};

/// Splits a base URL into "scheme://host:port" and a path prefix without a trailing slash.
std::pair<std::string, std::string> split_base_url(const std::string& base_url);

class HttpChat final : public ChatProvider {
 public:
  explicit HttpChat(HttpEndpoint endpoint);

  /// The request body sent on the wire for `req`.
  static std::string wire_body(const ChatRequest& req);

 private:
  ChatResponse do_complete(const ChatRequest& req) override;

  HttpEndpoint endpoint_;
};

class HttpSearch final : public SearchProvider {
 public:
  explicit HttpSearch(HttpEndpoint endpoint);

 private:
  std::vector<SearchResult> do_search(std::string_view query, int k) override;

  HttpEndpoint endpoint_;
};

class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(HttpEndpoint endpoint, std::string model_id, std::size_t dimension);

  std::size_t dimension() const override { return dimension_; }
  std::string model_id() const override { return model_id_; }

 private:
  EmbeddingVector do_embed(std::string_view text) override;

  HttpEndpoint endpoint_;
  std::string model_id_;
  std::size_t dimension_;
};

}  // namespace msrag::providers
