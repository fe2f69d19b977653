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

#include "msrag/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>

#include "msrag/error.hpp"
#include "msrag/providers/cache.hpp"
#include "msrag/providers/digest.hpp"
#include "msrag/providers/http.hpp"

namespace msrag::config {

namespace fs = std::filesystem;
using nlohmann::json;

CliConfig defaults() {
  CliConfig c;
  c.pipeline.chat = {"https://api.openai.com/v1", "gpt-3.5-turbo"};
  c.pipeline.reader = {"http://localhost:8000/v1", "llama-2-7b-chat"};
  c.pipeline.search = {"http://localhost:9000/search", "generic"};
  c.pipeline.embed = {"http://localhost:9001/embed", "bert-base-uncased"};
  return c;
}

namespace {

std::string resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return p;
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path.string() : (base / path).lexically_normal().string();
}

template <class T>
void read(const json& doc, const char* key, T& into, const std::string& origin) {
  if (!doc.contains(key)) return;
  try {
    into = doc.at(key).get<T>();
  } catch (const std::exception& e) {
    throw ConfigError(origin + ": key \"" + key + "\": " + e.what());
  }
}

void read_endpoint(const json& doc, const char* key, ProviderEndpoint& into,
                   const std::string& origin) {
  if (!doc.contains(key)) return;
  const auto& e = doc.at(key);
  if (!e.is_object()) throw ConfigError(origin + ": key \"" + std::string(key) + "\" must be an object");
  read(e, "base_url", into.base_url, origin + ": " + key);
  read(e, "model_id", into.model_id, origin + ": " + key);
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

std::shared_ptr<providers::RateLimiter> limiter_for(const std::string& base_url, double qps) {
  // One bucket per origin for the whole process.
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<providers::RateLimiter>> limiters;
  std::lock_guard lock(mu);
  auto origin = providers::split_base_url(base_url).first;
  auto& slot = limiters[origin + "@" + std::to_string(qps)];
  if (!slot) slot = std::make_shared<providers::RateLimiter>(qps, 1.0);
  return slot;
}

}  // namespace

CliConfig parse_config(const json& doc, const fs::path& base_dir, const std::string& origin) {
  if (!doc.is_object()) throw ConfigError(origin + ": top level must be a JSON object");
  CliConfig c = defaults();
  auto& p = c.pipeline;
  if (doc.contains("mode")) {
    try {
      p.mode = mode_from_string(doc.at("mode").get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(origin + ": key \"mode\": " + e.what());
    }
  }
  read(doc, "sub_question_count", p.sub_question_count, origin);
  read(doc, "search_top_k", p.search_top_k, origin);
  read(doc, "runs", p.runs, origin);
  read(doc, "max_context_words", p.max_context_words, origin);
  read(doc, "max_tokens", p.max_tokens, origin);
  read(doc, "random_seed", p.random_seed, origin);
  read(doc, "cache_dir", p.cache_dir, origin);
  p.cache_dir = resolve(base_dir, p.cache_dir);
  read(doc, "replay_strict", p.replay_strict, origin);
  read_endpoint(doc, "chat", p.chat, origin);
  read_endpoint(doc, "reader", p.reader, origin);
  read_endpoint(doc, "search", p.search, origin);
  read_endpoint(doc, "embed", p.embed, origin);

  read(doc, "providers", c.providers, origin);
  read(doc, "mock_script", c.mock_script, origin);
  c.mock_script = resolve(base_dir, c.mock_script);
  read(doc, "mock_embedder", c.mock_embedder, origin);
  read(doc, "embed_dimension", c.embed_dimension, origin);
  read(doc, "prompts_dir", c.prompts_dir, origin);
  c.prompts_dir = resolve(base_dir, c.prompts_dir);
  read(doc, "out", c.out_dir, origin);
  c.out_dir = resolve(base_dir, c.out_dir);
  read(doc, "workers", c.workers, origin);
  read(doc, "rate_limit_qps", c.rate_limit_qps, origin);
  read(doc, "timeout_s", c.timeout_s, origin);
  if (doc.contains("selector")) {
    try {
      c.selector = selector_from_string(doc.at("selector").get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(origin + ": key \"selector\": " + e.what());
    }
  }
  if (doc.contains("retry")) {
    const auto& r = doc.at("retry");
    read(r, "max_retries", c.retry.max_retries, origin + ": retry");
    long long base_ms = c.retry.base_delay.count();
    read(r, "base_delay_ms", base_ms, origin + ": retry");
    c.retry.base_delay = std::chrono::milliseconds(base_ms);
    long long max_ms = c.retry.max_delay.count();
    read(r, "max_delay_ms", max_ms, origin + ": retry");
    c.retry.max_delay = std::chrono::milliseconds(max_ms);
  }
  if (doc.contains("datasets")) {
    const auto& list = doc.at("datasets");
    if (!list.is_array()) throw ConfigError(origin + ": key \"datasets\" must be an array");
    for (const auto& d : list) {
      DatasetSpec spec;
      std::string where = origin + ": datasets";
      read(d, "path", spec.path, where);
      if (spec.path.empty()) throw ConfigError(where + ": entry lacks \"path\"");
      spec.path = resolve(base_dir, spec.path);
      std::string schema = "generic";
      read(d, "schema", schema, where);
      try {
        spec.schema = eval::schema_from_string(schema);
      } catch (const std::exception& e) {
        throw ConfigError(where + ": key \"schema\": " + e.what());
      }
      read(d, "tag", spec.tag, where);
      if (d.contains("sample_n")) {
        std::size_t n = 0;
        read(d, "sample_n", n, where);
        spec.sampling.n = n;
      }
      read(d, "sample_random", spec.sampling.random, where);
      spec.sampling.seed = p.random_seed;
      c.datasets.push_back(std::move(spec));
    }
  }
  return c;
}

CliConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError(path.string() + ": not valid JSON");
  return parse_config(doc, path.parent_path(), path.string());
}

void validate(const CliConfig& cfg) {
  msrag::validate(cfg.pipeline);
  if (cfg.providers != "mock" && cfg.providers != "http") {
    throw ConfigError("providers must be \"mock\" or \"http\", got \"" + cfg.providers + "\"");
  }
  if (cfg.mock_embedder != "bow" && cfg.mock_embedder != "exact" &&
      cfg.mock_embedder != "scripted") {
    throw ConfigError("mock_embedder must be bow, exact or scripted");
  }
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (cfg.rate_limit_qps <= 0) throw ConfigError("rate_limit_qps must be positive");
  if (cfg.pipeline.replay_strict) {
    if (cfg.pipeline.cache_dir.empty()) throw ConfigError("replay_strict requires cache_dir");
    if (!fs::is_directory(cfg.pipeline.cache_dir)) {
      throw ConfigError("replay_strict requires an existing cache directory: " +
                        cfg.pipeline.cache_dir);
    }
  }
}

prompts::PromptSet load_prompts(const CliConfig& cfg) {
  return cfg.prompts_dir.empty() ? prompts::PromptSet::embedded()
                                 : prompts::PromptSet::load(cfg.prompts_dir);
}

json results_view(const CliConfig& cfg, const prompts::PromptSet& prompts) {
  const auto& p = cfg.pipeline;
  json view{{"mode", p.mode},
            {"sub_question_count", p.sub_question_count},
            {"search_top_k", p.search_top_k},
            {"runs", p.runs},
            {"max_context_words", p.max_context_words},
            {"max_tokens", p.max_tokens},
            {"random_seed", p.random_seed},
            {"selector", to_string(cfg.selector)},
            {"providers", cfg.providers},
            {"prompt_digests", prompts.digests()}};
  if (cfg.providers == "mock") {
    std::string script_digest;
    if (!cfg.mock_script.empty()) {
      script_digest = providers::sha256_hex(
          providers::MockScript::load(cfg.mock_script).to_json().dump());
    }
    view["mock"] = {{"script_digest", script_digest}, {"embedder", cfg.mock_embedder}};
  } else {
    view["models"] = {{"chat", p.chat.model_id},
                      {"reader", p.reader.model_id},
                      {"search", p.search.model_id},
                      {"embed", p.embed.model_id},
                      {"embed_dimension", cfg.embed_dimension}};
  }
  return view;
}

std::string config_digest(const json& view) { return providers::sha256_hex(view.dump()); }

ProviderStack build_providers(const CliConfig& cfg) {
  ProviderStack stack;
  auto& out = stack.providers;
  const auto& p = cfg.pipeline;

  if (cfg.providers == "mock") {
    auto script = std::make_shared<const providers::MockScript>(
        cfg.mock_script.empty() ? providers::MockScript{}
                                : providers::MockScript::load(cfg.mock_script));
    stack.mock_chat = std::make_shared<providers::MockChat>(script);
    stack.mock_search = std::make_shared<providers::MockSearch>(script);
    out.chat = stack.mock_chat;
    out.reader = stack.mock_chat;
    out.search = stack.mock_search;
    if (cfg.mock_embedder == "exact") {
      out.embedder = std::make_shared<providers::ExactMatchEmbedder>();
    } else if (cfg.mock_embedder == "scripted") {
      // Unknown text is an error when a table is given; dimensions must agree.
      out.embedder = std::make_shared<providers::ScriptedEmbedder>(
          script->vectors, script->vectors.empty()
                               ? std::make_shared<providers::BagOfWordsEmbedder>()
                               : nullptr);
    } else {
      out.embedder = std::make_shared<providers::BagOfWordsEmbedder>();
    }
  } else {
    const std::chrono::seconds timeout(cfg.timeout_s);
    auto chat_http = [&](const ProviderEndpoint& ep) -> std::shared_ptr<providers::ChatProvider> {
      auto raw = std::make_shared<providers::HttpChat>(
          providers::HttpEndpoint{ep.base_url, env_or_empty("MSRAG_CHAT_TOKEN"), timeout});
      return std::make_shared<providers::ResilientChat>(raw, cfg.retry,
                                                        limiter_for(ep.base_url, cfg.rate_limit_qps));
    };
    out.chat = chat_http(p.chat);
    out.reader = chat_http(p.reader.base_url.empty() ? p.chat : p.reader);
    out.search = std::make_shared<providers::ResilientSearch>(
        std::make_shared<providers::HttpSearch>(
            providers::HttpEndpoint{p.search.base_url, env_or_empty("MSRAG_SEARCH_TOKEN"), timeout}),
        cfg.retry, limiter_for(p.search.base_url, cfg.rate_limit_qps));
    out.embedder = std::make_shared<providers::ResilientEmbedder>(
        std::make_shared<providers::HttpEmbedder>(
            providers::HttpEndpoint{p.embed.base_url, env_or_empty("MSRAG_EMBED_TOKEN"), timeout},
            p.embed.model_id, cfg.embed_dimension),
        cfg.retry, limiter_for(p.embed.base_url, cfg.rate_limit_qps));
  }

  if (!p.cache_dir.empty()) {
    auto cache = std::make_shared<providers::ResponseCache>(p.cache_dir);
    const bool strict = p.replay_strict;
    auto chat = std::make_shared<providers::CachedChat>(out.chat, cache, strict);
    out.reader = out.reader == out.chat
                     ? std::static_pointer_cast<providers::ChatProvider>(chat)
                     : std::make_shared<providers::CachedChat>(out.reader, cache, strict);
    out.chat = chat;
    out.search = std::make_shared<providers::CachedSearch>(out.search, cache, strict,
                                                           p.search.model_id);
    out.embedder = std::make_shared<providers::CachedEmbedder>(out.embedder, cache, strict);
  }
  return stack;
}

}  // namespace msrag::config
