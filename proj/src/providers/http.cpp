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

#include "msrag/providers/http.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "msrag/error.hpp"

namespace msrag::providers {

using nlohmann::json;

std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
  auto scheme = base_url.find("://");
  if (scheme == std::string::npos) throw ConfigError("base URL lacks a scheme: " + base_url);
  auto slash = base_url.find('/', scheme + 3);
  if (slash == std::string::npos) return {base_url, ""};
  std::string path = base_url.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {base_url.substr(0, slash), path};
}

namespace {

json post_json(const HttpEndpoint& ep, const std::string& suffix, const std::string& body) {
  auto [origin, prefix] = split_base_url(ep.base_url);
  httplib::Client client(origin);
  client.set_connection_timeout(ep.timeout);
  client.set_read_timeout(ep.timeout);
  client.set_write_timeout(ep.timeout);
  httplib::Headers headers;
  if (!ep.token.empty()) headers.emplace("Authorization", "Bearer " + ep.token);

  std::string path = prefix + suffix;
  if (path.empty()) path = "/";
  auto res = client.Post(path, headers, body, "application/json");
  if (!res) {
    throw NetworkError("request to " + origin + path + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status == 429) throw QuotaExceeded("rate limited by " + origin);
  if (res->status == 408 || res->status >= 500) {
    throw NetworkError("server error " + std::to_string(res->status) + " from " + origin + path);
  }
  if (res->status < 200 || res->status >= 300) {
    throw ProviderRefusal(res->status, res->body.substr(0, 200));
  }
  return json::parse(res->body, nullptr, false);
}

}  // namespace

HttpChat::HttpChat(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

std::string HttpChat::wire_body(const ChatRequest& req) {
  json messages = json::array();
  for (const auto& m : req.messages) {
    messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  json body{{"model", req.model_id},
            {"messages", messages},
            {"temperature", req.temperature},
            {"max_tokens", req.max_tokens}};
  if (req.seed) body["seed"] = *req.seed;
  return body.dump(-1, ' ', false, json::error_handler_t::replace);
}

ChatResponse HttpChat::do_complete(const ChatRequest& req) {
  json doc = post_json(endpoint_, "/chat/completions", wire_body(req));
  // A 2xx body we cannot read is reported in-band rather than retried.
  if (doc.is_discarded()) return {"", FinishReason::Error};
  try {
    const auto& choice = doc.at("choices").at(0);
    ChatResponse out;
    const auto& content = choice.at("message").at("content");
    out.content = content.is_string() ? content.get<std::string>() : std::string{};
    auto reason = choice.value("finish_reason", std::string{"stop"});
    out.finish_reason = reason == "stop"     ? FinishReason::Stop
                        : reason == "length" ? FinishReason::Length
                                             : FinishReason::Error;
    return out;
  } catch (const json::exception&) {
    return {"", FinishReason::Error};
  }
}

HttpSearch::HttpSearch(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

std::vector<SearchResult> HttpSearch::do_search(std::string_view query, int k) {
  json body{{"query", std::string(query)}, {"k", k}};
  json doc = post_json(endpoint_, "", body.dump(-1, ' ', false, json::error_handler_t::replace));
  if (doc.is_discarded() || !doc.contains("results") || !doc["results"].is_array()) {
    throw ProviderError("search response lacks a results array");
  }
  std::vector<SearchResult> out;
  for (const auto& item : doc["results"]) {
    if (static_cast<int>(out.size()) == k) break;
    SearchResult r;
    r.query = std::string(query);
    r.rank = static_cast<int>(out.size()) + 1;
    r.title = item.value("title", std::string{});
    r.snippet = item.value("snippet", std::string{});
    r.url = item.value("url", std::string{});
    out.push_back(std::move(r));
  }
  return out;
}

HttpEmbedder::HttpEmbedder(HttpEndpoint endpoint, std::string model_id, std::size_t dimension)
    : endpoint_(std::move(endpoint)), model_id_(std::move(model_id)), dimension_(dimension) {
  if (dimension_ == 0) throw ConfigError("embedding dimension must be positive");
}

EmbeddingVector HttpEmbedder::do_embed(std::string_view text) {
  json body{{"text", std::string(text)}, {"model", model_id_}};
  json doc = post_json(endpoint_, "", body.dump(-1, ' ', false, json::error_handler_t::replace));
  if (doc.is_discarded() || !doc.contains("vector") || !doc["vector"].is_array()) {
    throw ProviderError("embedding response lacks a vector array");
  }
  EmbeddingVector v;
  v.model_id = model_id_;
  for (const auto& x : doc["vector"]) {
    if (!x.is_number()) throw ProviderError("embedding vector holds a non-number");
    v.values.push_back(x.get<double>());
  }
  if (v.values.size() != dimension_) throw DimensionMismatch(dimension_, v.values.size());
  return v;
}

}  // namespace msrag::providers
