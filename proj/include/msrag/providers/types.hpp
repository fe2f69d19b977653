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

// Provider-neutral request/response types and the three provider interfaces.
//
// Each interface uses a non-virtual public entry point that checks the
// contract (preconditions, degenerate inputs, output shape) and forwards to
// a private virtual implemented by concrete providers.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace msrag::providers {

enum class Role { System, User };

struct ChatMessage {
  Role role = Role::User;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::string model_id;
  std::vector<ChatMessage> messages;  // order is semantic
  double temperature = 0.0;
  int max_tokens = 512;
  std::optional<std::int64_t> seed;  // forwarded to providers that support sampling seeds

  bool operator==(const ChatRequest&) const = default;
};

enum class FinishReason { Stop, Length, Error };

struct ChatResponse {
  std::string content;
  FinishReason finish_reason = FinishReason::Stop;

  bool operator==(const ChatResponse&) const = default;
};

struct SearchResult {
  std::string query;
  int rank = 1;
  std::string title;
  std::string snippet;
  std::string url;

  bool operator==(const SearchResult&) const = default;
};

struct EmbeddingVector {
  std::vector<double> values;
  std::string model_id;

  std::size_t dimension() const noexcept { return values.size(); }
  bool is_zero() const noexcept;

  bool operator==(const EmbeddingVector&) const = default;
};

std::string_view to_string(Role r);
std::string_view to_string(FinishReason f);

void to_json(nlohmann::json& j, const ChatMessage& m);
void from_json(const nlohmann::json& j, ChatMessage& m);
void to_json(nlohmann::json& j, const ChatRequest& r);
void from_json(const nlohmann::json& j, ChatRequest& r);
void to_json(nlohmann::json& j, const ChatResponse& r);
void from_json(const nlohmann::json& j, ChatResponse& r);
void to_json(nlohmann::json& j, const SearchResult& r);
void from_json(const nlohmann::json& j, SearchResult& r);
void to_json(nlohmann::json& j, const EmbeddingVector& v);
void from_json(const nlohmann::json& j, EmbeddingVector& v);

/// Canonical bytes: compact JSON, keys sorted, shortest round-trip doubles.
/// Two requests map to the same bytes iff every field is equal.
std::string canonical_bytes(const ChatRequest& r);
std::string canonical_search_request(std::string_view query, int k);
std::string canonical_embed_request(std::string_view text);

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;

  /// Throws InvalidInput if `req` has no messages or no model id.
  ChatResponse complete(const ChatRequest& req);

 private:
  virtual ChatResponse do_complete(const ChatRequest& req) = 0;
};

class SearchProvider {
 public:
  virtual ~SearchProvider() = default;

  /// At most `k` results ranked 1..n. `k == 0` returns immediately.
  std::vector<SearchResult> search(std::string_view query, int k);

 private:
  virtual std::vector<SearchResult> do_search(std::string_view query, int k) = 0;
};

class Embedder {
 public:
  virtual ~Embedder() = default;

  /// Same text, same vector. Blank text yields the zero vector without
  /// consulting the backend.
  EmbeddingVector embed(std::string_view text);

  virtual std::size_t dimension() const = 0;
  virtual std::string model_id() const = 0;

 private:
  virtual EmbeddingVector do_embed(std::string_view text) = 0;
};

}  // namespace msrag::providers
