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

#include "msrag/providers/cache.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "msrag/error.hpp"
#include "msrag/providers/digest.hpp"

namespace msrag::providers {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

ResponseCache::ResponseCache(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
}

std::string ResponseCache::make_key(std::string_view provider_kind, std::string_view model_id,
                                    std::string_view request_bytes) {
  std::string material;
  material.reserve(provider_kind.size() + model_id.size() + request_bytes.size() + 2);
  material.append(provider_kind).push_back('\0');
  material.append(model_id).push_back('\0');
  material.append(request_bytes);
  return sha256_hex(material);
}

fs::path ResponseCache::entry_path(const std::string& key) const {
  return root_ / key.substr(0, 2) / (key + ".json");
}

std::optional<CacheEntry> ResponseCache::load(const std::string& key) const {
  auto path = entry_path(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();

  json doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw CacheCorruption(key, "entry is not valid JSON");
  CacheEntry entry;
  try {
    entry.key = doc.at("key").get<std::string>();
    entry.request = base64_decode(doc.at("request_b64").get<std::string>());
    entry.response = base64_decode(doc.at("response_b64").get<std::string>());
    entry.created_at = doc.value("created_at", std::string{});
    if (entry.key != key) throw CacheCorruption(key, "stored key does not match file name");
    if (sha256_hex(entry.response) != doc.at("response_sha256").get<std::string>()) {
      throw CacheCorruption(key, "response digest mismatch");
    }
  } catch (const CacheCorruption&) {
    throw;
  } catch (const std::exception& e) {
    throw CacheCorruption(key, e.what());
  }
  return entry;
}

void ResponseCache::store(const CacheEntry& entry) {
  auto path = entry_path(entry.key);
  fs::create_directories(path.parent_path());
  json doc{{"key", entry.key},
           {"request_b64", base64_encode(entry.request)},
           {"response_b64", base64_encode(entry.response)},
           {"response_sha256", sha256_hex(entry.response)},
           {"created_at", entry.created_at.empty() ? utc_now() : entry.created_at}};
  std::ostringstream tmp_name;
  tmp_name << path.filename().string() << ".tmp." << std::this_thread::get_id();
  auto tmp = path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache entry " + tmp.string());
    out << doc.dump(2) << '\n';
  }
  fs::rename(tmp, path);
}

std::mutex& ResponseCache::stripe(const std::string& key) {
  return stripes_[std::hash<std::string>{}(key) % stripes_.size()];
}

std::string ResponseCache::call(std::string_view provider_kind, std::string_view model_id,
                                const std::string& request_bytes, bool strict_replay,
                                const std::function<std::string()>& fetch) {
  const std::string key = make_key(provider_kind, model_id, request_bytes);
  auto verify = [&](const CacheEntry& e) {
    if (e.request != request_bytes) throw CacheCorruption(key, "stored request bytes differ");
    return e.response;
  };
  if (auto hit = load(key)) return verify(*hit);
  if (strict_replay) throw ReplayMiss(key);

  std::lock_guard lock(stripe(key));
  if (auto hit = load(key)) return verify(*hit);
  std::string response = fetch();
  store(CacheEntry{key, request_bytes, response, {}});
  return response;
}

// ---------------------------------------------------------------------------

CachedChat::CachedChat(std::shared_ptr<ChatProvider> inner, std::shared_ptr<ResponseCache> cache,
                       bool strict_replay)
    : inner_(std::move(inner)), cache_(std::move(cache)), strict_(strict_replay) {}

ChatResponse CachedChat::do_complete(const ChatRequest& req) {
  auto bytes = cache_->call("chat", req.model_id, canonical_bytes(req), strict_, [&] {
    return json(inner_->complete(req)).dump(-1, ' ', false, json::error_handler_t::replace);
  });
  try {
    return json::parse(bytes).get<ChatResponse>();
  } catch (const json::exception& e) {
    throw CacheCorruption(ResponseCache::make_key("chat", req.model_id, canonical_bytes(req)),
                          e.what());
  }
}

CachedSearch::CachedSearch(std::shared_ptr<SearchProvider> inner,
                           std::shared_ptr<ResponseCache> cache, bool strict_replay,
                           std::string engine_id)
    : inner_(std::move(inner)),
      cache_(std::move(cache)),
      strict_(strict_replay),
      engine_id_(std::move(engine_id)) {}

std::vector<SearchResult> CachedSearch::do_search(std::string_view query, int k) {
  auto request = canonical_search_request(query, k);
  auto bytes = cache_->call("search", engine_id_, request, strict_, [&] {
    return json(inner_->search(query, k)).dump(-1, ' ', false, json::error_handler_t::replace);
  });
  try {
    return json::parse(bytes).get<std::vector<SearchResult>>();
  } catch (const json::exception& e) {
    throw CacheCorruption(ResponseCache::make_key("search", engine_id_, request), e.what());
  }
}

CachedEmbedder::CachedEmbedder(std::shared_ptr<Embedder> inner,
                               std::shared_ptr<ResponseCache> cache, bool strict_replay)
    : inner_(std::move(inner)), cache_(std::move(cache)), strict_(strict_replay) {}

EmbeddingVector CachedEmbedder::do_embed(std::string_view text) {
  auto request = canonical_embed_request(text);
  auto model = inner_->model_id();
  auto bytes = cache_->call("embed", model, request, strict_, [&] {
    return json(inner_->embed(text)).dump();
  });
  try {
    return json::parse(bytes).get<EmbeddingVector>();
  } catch (const json::exception& e) {
    throw CacheCorruption(ResponseCache::make_key("embed", model, request), e.what());
  }
}

}  // namespace msrag::providers
