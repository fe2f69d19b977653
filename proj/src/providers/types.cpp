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

#include "msrag/providers/types.hpp"

#include <algorithm>
#include <cmath>

#include "msrag/error.hpp"
#include "msrag/text.hpp"

namespace msrag::providers {

bool EmbeddingVector::is_zero() const noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

std::string_view to_string(Role r) { return r == Role::System ? "system" : "user"; }

std::string_view to_string(FinishReason f) {
  switch (f) {
    case FinishReason::Stop: return "stop";
    case FinishReason::Length: return "length";
    case FinishReason::Error: return "error";
  }
  return "error";
}

namespace {

Role role_from(const std::string& s) {
  if (s == "system") return Role::System;
  if (s == "user") return Role::User;
  throw InvalidInput("unknown chat role " + s);
}

FinishReason finish_from(const std::string& s) {
  if (s == "stop") return FinishReason::Stop;
  if (s == "length") return FinishReason::Length;
  return FinishReason::Error;
}

}  // namespace

void to_json(nlohmann::json& j, const ChatMessage& m) {
  j = nlohmann::json{{"role", to_string(m.role)}, {"content", m.content}};
}

void from_json(const nlohmann::json& j, ChatMessage& m) {
  m.role = role_from(j.at("role").get<std::string>());
  j.at("content").get_to(m.content);
}

void to_json(nlohmann::json& j, const ChatRequest& r) {
  j = nlohmann::json{{"model_id", r.model_id},
                     {"messages", r.messages},
                     {"temperature", r.temperature},
                     {"max_tokens", r.max_tokens}};
  j["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, ChatRequest& r) {
  j.at("model_id").get_to(r.model_id);
  j.at("messages").get_to(r.messages);
  j.at("temperature").get_to(r.temperature);
  j.at("max_tokens").get_to(r.max_tokens);
  if (j.contains("seed") && !j.at("seed").is_null()) {
    r.seed = j.at("seed").get<std::int64_t>();
  } else {
    r.seed.reset();
  }
}

void to_json(nlohmann::json& j, const ChatResponse& r) {
  j = nlohmann::json{{"content", r.content}, {"finish_reason", to_string(r.finish_reason)}};
}

void from_json(const nlohmann::json& j, ChatResponse& r) {
  j.at("content").get_to(r.content);
  r.finish_reason = finish_from(j.at("finish_reason").get<std::string>());
}

void to_json(nlohmann::json& j, const SearchResult& r) {
  j = nlohmann::json{{"query", r.query},
                     {"rank", r.rank},
                     {"title", r.title},
                     {"snippet", r.snippet},
                     {"url", r.url}};
}

void from_json(const nlohmann::json& j, SearchResult& r) {
  j.at("query").get_to(r.query);
  j.at("rank").get_to(r.rank);
  j.at("title").get_to(r.title);
  j.at("snippet").get_to(r.snippet);
  j.at("url").get_to(r.url);
}

void to_json(nlohmann::json& j, const EmbeddingVector& v) {
  j = nlohmann::json{{"values", v.values}, {"model_id", v.model_id}};
}

void from_json(const nlohmann::json& j, EmbeddingVector& v) {
  j.at("values").get_to(v.values);
  j.at("model_id").get_to(v.model_id);
}

std::string canonical_bytes(const ChatRequest& r) {
  // nlohmann::json objects are std::map backed, so keys come out sorted.
  return nlohmann::json(r).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string canonical_search_request(std::string_view query, int k) {
  return nlohmann::json{{"query", std::string(query)}, {"k", k}}.dump(
      -1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string canonical_embed_request(std::string_view text) {
  return nlohmann::json{{"text", std::string(text)}}.dump(
      -1, ' ', false, nlohmann::json::error_handler_t::replace);
}

ChatResponse ChatProvider::complete(const ChatRequest& req) {
  if (req.messages.empty()) throw InvalidInput("chat request has no messages");
  if (req.model_id.empty()) throw InvalidInput("chat request has no model id");
  if (req.temperature < 0) throw InvalidInput("chat temperature must be >= 0");
  return do_complete(req);
}

std::vector<SearchResult> SearchProvider::search(std::string_view query, int k) {
  if (k < 0) throw InvalidInput("search k must be >= 0");
  if (k == 0) return {};
  auto results = do_search(query, k);
  if (results.size() > static_cast<std::size_t>(k)) results.resize(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].rank != static_cast<int>(i) + 1) {
      throw ProviderError("search provider returned out-of-order ranks");
    }
  }
  return results;
}

EmbeddingVector Embedder::embed(std::string_view text) {
  if (text::trim(text).empty()) {
    return EmbeddingVector{std::vector<double>(dimension(), 0.0), model_id()};
  }
  auto v = do_embed(text);
  if (v.dimension() != dimension()) throw DimensionMismatch(dimension(), v.dimension());
  for (double x : v.values) {
    if (!std::isfinite(x)) throw ProviderError("embedding contains a non-finite value");
  }
  return v;
}

}  // namespace msrag::providers
