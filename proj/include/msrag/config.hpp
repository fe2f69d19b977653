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

// CLI configuration file (JSON). Every key is optional; command-line flags
// override file values. Example:
//
//   {
//     "mode": "full", "runs": 3, "sub_question_count": 3, "search_top_k": 5,
//     "max_context_words": 200, "random_seed": 0, "selector": "oracle",
//     "providers": "mock", "mock_script": "script.json", "mock_embedder": "bow",
//     "chat":   {"base_url": "https://api.openai.com/v1", "model_id": "gpt-3.5-turbo"},
//     "reader": {"base_url": "http://localhost:8000/v1", "model_id": "llama-2-7b-chat"},
//     "search": {"base_url": "http://localhost:9000/search", "model_id": "generic"},
//     "embed":  {"base_url": "http://localhost:9001/embed", "model_id": "bert-base-uncased"},
//     "embed_dimension": 768, "cache_dir": "cache", "replay_strict": false,
//     "retry": {"max_retries": 3, "base_delay_ms": 250}, "rate_limit_qps": 5,
//     "timeout_s": 60, "workers": 4, "out": "out", "prompts_dir": "prompts",
//     "datasets": [{"path": "data/hotpot.jsonl", "schema": "hotpot", "tag": "HotpotQA",
//                   "sample_n": 500, "sample_random": true}]
//   }
//
// Relative paths in the file resolve against the file's directory.

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msrag/context.hpp"
#include "msrag/core.hpp"
#include "msrag/eval/dataset.hpp"
#include "msrag/providers/mock.hpp"
#include "msrag/providers/resilience.hpp"

namespace msrag::config {

struct DatasetSpec {
  std::string path;
  eval::DatasetSchema schema = eval::DatasetSchema::Generic;
  std::string tag;  // defaults to the file stem
  eval::Sampling sampling;
};

struct CliConfig {
  PipelineConfig pipeline;
  std::string providers = "mock";  // mock | http
  std::string mock_script;
  std::string mock_embedder = "bow";  // bow | exact | scripted
  std::size_t embed_dimension = 768;  // http embedder only
  std::string prompts_dir;
  std::string out_dir = "out";
  std::vector<DatasetSpec> datasets;
  SelectorKind selector = SelectorKind::Oracle;
  int workers = 1;
  providers::RetryPolicy retry;
  double rate_limit_qps = 5.0;
  int timeout_s = 60;
};

CliConfig defaults();

/// Throws ConfigError naming the file and offending key.
CliConfig load_config(const std::filesystem::path& path);
CliConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                       const std::string& origin);

/// Checks cross-field consistency. Throws ConfigError.
void validate(const CliConfig& cfg);

/// The settings that determine results; paths, worker counts and cache
/// behaviour are left out so replays and parallel runs share a digest.
nlohmann::json results_view(const CliConfig& cfg, const prompts::PromptSet& prompts);
std::string config_digest(const nlohmann::json& view);

/// Provider handles plus the concrete mocks (null for http) for counters.
struct ProviderStack {
  Providers providers;
  std::shared_ptr<providers::MockChat> mock_chat;
  std::shared_ptr<providers::MockSearch> mock_search;
};

ProviderStack build_providers(const CliConfig& cfg);

prompts::PromptSet load_prompts(const CliConfig& cfg);

}  // namespace msrag::config
