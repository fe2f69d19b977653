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

#include <cstdint>
#include <memory>
#include <optional>

#include "msrag/core.hpp"
#include "msrag/prompts.hpp"
#include "msrag/providers/types.hpp"

namespace msrag {

/// Provider handles used by one pipeline. `reader` answers questions; `chat`
/// handles segmentation, summarization and context generation.
struct Providers {
  std::shared_ptr<providers::ChatProvider> chat;
  std::shared_ptr<providers::ChatProvider> reader;
  std::shared_ptr<providers::SearchProvider> search;
  std::shared_ptr<providers::Embedder> embedder;
};

/// Everything a stage needs to issue provider calls for one run.
struct RunContext {
  PipelineConfig config;
  Providers providers;
  prompts::PromptSet prompts = prompts::PromptSet::embedded();
  std::optional<std::int64_t> seed;  // forwarded on every chat request
  bool parallel = false;             // fan out channels and searches on threads
};

/// Builds a single-user-message request (or system + user when `system` is set).
providers::ChatRequest make_chat_request(const RunContext& ctx, const std::string& model_id,
                                         std::string user, std::string system = {});

}  // namespace msrag
