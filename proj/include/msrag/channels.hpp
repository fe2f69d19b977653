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

// The three evidence channels and the reader call that turns each into a
// candidate answer:
//   Web          sub-question searches, merged into one summary
//   Gpt          context written by the chat model itself
//   NoRetrieval  the question alone

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msrag/context.hpp"
#include "msrag/core.hpp"
#include "msrag/providers/types.hpp"

namespace msrag::channels {

using providers::SearchResult;

struct WebChannelTrace {
  std::vector<std::vector<SearchResult>> sub_results;  // one list per sub-question
  std::string summary_prompt_digest;                   // empty when no call was made
  EvidenceBundle information_web;

  bool operator==(const WebChannelTrace&) const = default;
};

/// Per-channel audit record kept in the run manifest.
struct ChannelTrace {
  Channel channel = Channel::NoRetrieval;
  std::string evidence_digest;        // digest of the evidence text fed to the reader
  std::string context_prompt_digest;  // summarization or context-generation prompt
  std::string reader_prompt_digest;
  bool fallback_context = false;
  bool truncated_context = false;

  bool operator==(const ChannelTrace&) const = default;
};

/// One result list per sub-question, each at most search_top_k long. A failed
/// search leaves an empty slot; ReplayMiss and InvalidInput still propagate.
std::vector<std::vector<SearchResult>> web_search_fanout(const SubQuestionSet& subs,
                                                         const RunContext& ctx);

struct WebSummary {
  EvidenceBundle evidence;
  std::string prompt_digest;
};

/// One chat call over every sub-question's results. With no results at all
/// no call is made and the fallback sentence is returned.
WebSummary summarize_web(const Question& q, const SubQuestionSet& subs,
                         const std::vector<std::vector<SearchResult>>& results,
                         const RunContext& ctx);

struct GeneratedContext {
  EvidenceBundle evidence;
  std::string prompt_digest;
};

/// Renders the context-generation prompt and reads the "content" field of
/// the JSON reply, falling back to the raw reply text.
GeneratedContext gpt_context(const Question& q, const RunContext& ctx);

/// Extracts context text from a raw context-generation reply.
std::string parse_context_reply(const std::string& raw);

/// The exact reader prompt for `q` with optional evidence.
std::string reader_prompt(const Question& q, const EvidenceBundle* evidence,
                          const RunContext& ctx);

/// One reader call. `evidence == nullptr` selects the no-retrieval channel.
CandidateAnswer generate_answer(const Question& q, const EvidenceBundle* evidence,
                                const RunContext& ctx);

struct ChannelsOutcome {
  std::optional<SubQuestionSet> sub_questions;  // present when Web is active
  std::optional<WebChannelTrace> web;
  std::optional<EvidenceBundle> information_gpt;
  std::vector<CandidateAnswer> candidates;  // canonical channel order
  std::vector<ChannelTrace> traces;         // same order as candidates
};

/// Runs every channel active under ctx.config.mode. Provider failures
/// propagate; the caller records them against the example.
ChannelsOutcome run_example_channels(const Question& q, const RunContext& ctx);

void to_json(nlohmann::json& j, const WebChannelTrace& t);
void from_json(const nlohmann::json& j, WebChannelTrace& t);
void to_json(nlohmann::json& j, const ChannelTrace& t);
void from_json(const nlohmann::json& j, ChannelTrace& t);

}  // namespace msrag::channels
