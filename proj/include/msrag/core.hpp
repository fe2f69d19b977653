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

// Domain types shared by every stage of the pipeline. Plain values with no
// I/O; each one serializes losslessly to the manifest JSON format.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace msrag {

/// The three evidence paths. Declaration order is the canonical order used
/// for output ordering and for tie-breaking.
enum class Channel { Web, Gpt, NoRetrieval };

inline constexpr std::array<Channel, 3> kCanonicalChannels = {Channel::Web, Channel::Gpt,
                                                              Channel::NoRetrieval};

std::string_view to_string(Channel c);
Channel channel_from_string(std::string_view s);

enum class AnswerKind { Span, Boolean };

std::string_view to_string(AnswerKind k);
AnswerKind answer_kind_from_string(std::string_view s);

/// Evidence text used whenever a channel cannot produce anything useful.
inline constexpr std::string_view kFallbackSentence =
    "The relevant information could not be retrieved.";

struct Question {
  std::string id;
  std::string text;
  std::vector<std::string> gold_answers;  // aliases; scored by best match
  AnswerKind answer_kind = AnswerKind::Span;
  std::string dataset_tag;

  bool operator==(const Question&) const = default;
};

/// Throws InvalidInput when the question breaks a type invariant.
void validate(const Question& q);

/// Gold label of a Boolean question, or nullopt if it does not read as yes/no.
std::optional<bool> boolean_gold(const Question& q);

enum class SubQuestionSource { Model, Fallback };

struct SubQuestionSet {
  std::string parent_id;
  std::vector<std::string> items;  // 1..3 entries, pairwise distinct
  SubQuestionSource source = SubQuestionSource::Fallback;

  bool operator==(const SubQuestionSet&) const = default;
};

struct EvidenceBundle {
  Channel channel = Channel::NoRetrieval;
  std::string text;                     // empty iff channel == NoRetrieval
  std::vector<std::string> provenance;  // URLs for Web, model id for Gpt
  bool is_fallback = false;
  bool truncated = false;  // text was cut to the context word budget

  bool operator==(const EvidenceBundle&) const = default;
};

/// Builds the evidence for the no-retrieval path.
EvidenceBundle no_retrieval_evidence();

struct CandidateAnswer {
  Channel channel = Channel::NoRetrieval;
  std::string text;
  std::string prompt_digest;  // sha-256 hex of the reader prompt bytes

  bool operator==(const CandidateAnswer&) const = default;
};

struct SelectionResult {
  std::map<Channel, double> similarities;
  Channel selected_channel = Channel::Web;
  std::string selected_text;
  bool tie_broken = false;
  std::set<Channel> degenerate_flags;

  bool operator==(const SelectionResult&) const = default;
};

/// Which channels run. Labels follow the ablation table rows.
enum class Mode { Full, NoGpt, NoWeb, GptOnly, WebOnly, DirectOnly };

std::string_view to_string(Mode m);  // CLI spelling, e.g. "no-web"
Mode mode_from_string(std::string_view s);
std::vector<std::string> mode_names();
std::string_view table_label(Mode m);  // e.g. "w/o Web"

/// Active channels in canonical order.
std::vector<Channel> active_channels(Mode m);
bool is_single_channel(Mode m);

enum class SelectorKind { Oracle, Consensus };

std::string_view to_string(SelectorKind s);
SelectorKind selector_from_string(std::string_view s);

struct ProviderEndpoint {
  std::string base_url;
  std::string model_id;

  bool operator==(const ProviderEndpoint&) const = default;
};

struct PipelineConfig {
  Mode mode = Mode::Full;
  int sub_question_count = 3;
  int search_top_k = 5;
  int runs = 3;
  int max_context_words = 200;
  int max_tokens = 512;
  ProviderEndpoint chat;    // segmentation, summarization, context generation
  ProviderEndpoint reader;  // answers questions
  ProviderEndpoint search;
  ProviderEndpoint embed;
  std::string cache_dir;
  bool replay_strict = false;
  std::uint64_t random_seed = 0;

  bool operator==(const PipelineConfig&) const = default;
};

void validate(const PipelineConfig& cfg);

// JSON mapping (found by ADL).
void to_json(nlohmann::json& j, Channel c);
void from_json(const nlohmann::json& j, Channel& c);
void to_json(nlohmann::json& j, Mode m);
void from_json(const nlohmann::json& j, Mode& m);
void to_json(nlohmann::json& j, const Question& q);
void from_json(const nlohmann::json& j, Question& q);
void to_json(nlohmann::json& j, const SubQuestionSet& s);
void from_json(const nlohmann::json& j, SubQuestionSet& s);
void to_json(nlohmann::json& j, const EvidenceBundle& e);
void from_json(const nlohmann::json& j, EvidenceBundle& e);
void to_json(nlohmann::json& j, const CandidateAnswer& c);
void from_json(const nlohmann::json& j, CandidateAnswer& c);
void to_json(nlohmann::json& j, const SelectionResult& s);
void from_json(const nlohmann::json& j, SelectionResult& s);
void to_json(nlohmann::json& j, const ProviderEndpoint& p);
void from_json(const nlohmann::json& j, ProviderEndpoint& p);
void to_json(nlohmann::json& j, const PipelineConfig& c);
void from_json(const nlohmann::json& j, PipelineConfig& c);

}  // namespace msrag
