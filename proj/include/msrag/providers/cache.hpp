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

// Content-addressed response cache with hermetic replay.
//
// Layout: <root>/<first two hex digits>/<key>.json, one entry per file:
//   {"key", "request_b64", "response_b64", "response_sha256", "created_at"}
// The key is the SHA-256 of (provider kind, model id, canonical request
// bytes). Entries are written to a temporary file and renamed into place, so
// readers never observe a partial entry.

#include <array>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "msrag/providers/types.hpp"

namespace msrag::providers {

struct CacheEntry {
  std::string key;
  std::string request;   // canonical request bytes
  std::string response;  // canonical response bytes
  std::string created_at;

  bool operator==(const CacheEntry& o) const {
    return key == o.key && request == o.request && response == o.response;
  }
};

class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path root);

  static std::string make_key(std::string_view provider_kind, std::string_view model_id,
                              std::string_view request_bytes);

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path entry_path(const std::string& key) const;

  /// nullopt when absent; CacheCorruption when present but unverifiable.
  std::optional<CacheEntry> load(const std::string& key) const;
  void store(const CacheEntry& entry);

  /// Hit: stored bytes. Miss: `fetch()` is called and its result stored,
  /// unless `strict_replay`, in which case ReplayMiss is thrown.
  std::string call(std::string_view provider_kind, std::string_view model_id,
                   const std::string& request_bytes, bool strict_replay,
                   const std::function<std::string()>& fetch);

 private:
  std::mutex& stripe(const std::string& key);

  std::filesystem::path root_;
  std::array<std::mutex, 64> stripes_;
};

class CachedChat final : public ChatProvider {
 public:
  CachedChat(std::shared_ptr<ChatProvider> inner, std::shared_ptr<ResponseCache> cache,
             bool strict_replay);

 private:
  ChatResponse do_complete(const ChatRequest& req) override;

  std::shared_ptr<ChatProvider> inner_;
  std::shared_ptr<ResponseCache> cache_;
  bool strict_;
};

class CachedSearch final : public SearchProvider {
 public:
  CachedSearch(std::shared_ptr<SearchProvider> inner, std::shared_ptr<ResponseCache> cache,
               bool strict_replay, std::string engine_id);

 private:
  std::vector<SearchResult> do_search(std::string_view query, int k) override;

  std::shared_ptr<SearchProvider> inner_;
  std::shared_ptr<ResponseCache> cache_;
  bool strict_;
  std::string engine_id_;
};

class CachedEmbedder final : public Embedder {
 public:
  CachedEmbedder(std::shared_ptr<Embedder> inner, std::shared_ptr<ResponseCache> cache,
                 bool strict_replay);

  std::size_t dimension() const override { return inner_->dimension(); }
  std::string model_id() const override { return inner_->model_id(); }

 private:
  EmbeddingVector do_embed(std::string_view text) override;

  std::shared_ptr<Embedder> inner_;
  std::shared_ptr<ResponseCache> cache_;
  bool strict_;
};

}  // namespace msrag::providers
