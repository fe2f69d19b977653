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

#include "msrag/core.hpp"

#include <algorithm>

#include "msrag/error.hpp"
#include "msrag/text.hpp"

namespace msrag {

namespace {

template <class Enum, std::size_t N>
Enum lookup(const std::array<std::pair<std::string_view, Enum>, N>& table, std::string_view s,
            std::string_view what) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : table) {
    if (!allowed.empty()) allowed += ", ";
    allowed += name;
  }
  throw InvalidInput("unknown " + std::string(what) + " \"" + std::string(s) + "\" (allowed: " +
                     allowed + ")");
}

template <class Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<std::string_view, Enum>, N>& table, Enum e) {
  for (const auto& [name, value] : table) {
    if (value == e) return name;
  }
  return "?";
}

constexpr std::array<std::pair<std::string_view, Channel>, 3> kChannelNames{{
    {"web", Channel::Web},
    {"gpt", Channel::Gpt},
    {"no_retrieval", Channel::NoRetrieval},
}};

constexpr std::array<std::pair<std::string_view, AnswerKind>, 2> kKindNames{{
    {"span", AnswerKind::Span},
    {"boolean", AnswerKind::Boolean},
}};

constexpr std::array<std::pair<std::string_view, Mode>, 6> kModeNames{{
    {"full", Mode::Full},
    {"no-gpt", Mode::NoGpt},
    {"no-web", Mode::NoWeb},
    {"gpt-only", Mode::GptOnly},
    {"web-only", Mode::WebOnly},
    {"direct-only", Mode::DirectOnly},
}};

constexpr std::array<std::pair<std::string_view, SelectorKind>, 2> kSelectorNames{{
    {"oracle", SelectorKind::Oracle},
    {"consensus", SelectorKind::Consensus},
}};

constexpr std::array<std::pair<std::string_view, SubQuestionSource>, 2> kSourceNames{{
    {"model", SubQuestionSource::Model},
    {"fallback", SubQuestionSource::Fallback},
}};

std::optional<bool> read_yes_no(std::string_view s) {
  std::string folded = text::fold_for_compare(s);
  while (!folded.empty() && (folded.back() == '.' || folded.back() == '!')) folded.pop_back();
  if (folded == "yes" || folded == "true") return true;
  if (folded == "no" || folded == "false") return false;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Channel c) { return name_of(kChannelNames, c); }
Channel channel_from_string(std::string_view s) { return lookup(kChannelNames, s, "channel"); }

std::string_view to_string(AnswerKind k) { return name_of(kKindNames, k); }
AnswerKind answer_kind_from_string(std::string_view s) {
  return lookup(kKindNames, s, "answer kind");
}

std::string_view to_string(Mode m) { return name_of(kModeNames, m); }
Mode mode_from_string(std::string_view s) { return lookup(kModeNames, s, "mode"); }

std::vector<std::string> mode_names() {
  std::vector<std::string> out;
  for (const auto& [name, value] : kModeNames) out.emplace_back(name);
  return out;
}

std::string_view table_label(Mode m) {
  switch (m) {
    case Mode::Full: return "MSRAG";
    case Mode::NoGpt: return "w/o GPT";
    case Mode::NoWeb: return "w/o Web";
    case Mode::GptOnly: return "GPT-Retrieval";
    case Mode::WebOnly: return "Web-Retrieval";
    case Mode::DirectOnly: return "No-RAG";
  }
  return "?";
}

std::vector<Channel> active_channels(Mode m) {
  switch (m) {
    case Mode::Full: return {Channel::Web, Channel::Gpt, Channel::NoRetrieval};
    case Mode::NoGpt: return {Channel::Web, Channel::NoRetrieval};
    case Mode::NoWeb: return {Channel::Gpt, Channel::NoRetrieval};
    case Mode::GptOnly: return {Channel::Gpt};
    case Mode::WebOnly: return {Channel::Web};
    case Mode::DirectOnly: return {Channel::NoRetrieval};
  }
  return {};
}

bool is_single_channel(Mode m) { return active_channels(m).size() == 1; }

std::string_view to_string(SelectorKind s) { return name_of(kSelectorNames, s); }
SelectorKind selector_from_string(std::string_view s) {
  return lookup(kSelectorNames, s, "selector");
}

void validate(const Question& q) {
  if (text::trim(q.text).empty()) throw InvalidInput("question " + q.id + " has empty text");
  if (q.gold_answers.empty()) throw InvalidInput("question " + q.id + " has no gold answers");
  for (const auto& g : q.gold_answers) {
    if (g.empty()) throw InvalidInput("question " + q.id + " has an empty gold answer");
    if (q.answer_kind == AnswerKind::Boolean && !read_yes_no(g)) {
      throw InvalidInput("boolean question " + q.id + " has non yes/no gold \"" + g + "\"");
    }
  }
}

std::optional<bool> boolean_gold(const Question& q) {
  if (q.answer_kind != AnswerKind::Boolean || q.gold_answers.empty()) return std::nullopt;
  return read_yes_no(q.gold_answers.front());
}

EvidenceBundle no_retrieval_evidence() { return EvidenceBundle{Channel::NoRetrieval, "", {}, false, false}; }

void validate(const PipelineConfig& cfg) {
  if (cfg.sub_question_count < 1) throw ConfigError("sub_question_count must be >= 1");
  if (cfg.search_top_k < 0) throw ConfigError("search_top_k must be >= 0");
  if (cfg.runs < 1) throw ConfigError("runs must be >= 1");
  if (cfg.max_tokens < 1) throw ConfigError("max_tokens must be >= 1");
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, Channel c) { j = std::string(to_string(c)); }
void from_json(const nlohmann::json& j, Channel& c) {
  c = channel_from_string(j.get<std::string>());
}
void to_json(nlohmann::json& j, Mode m) { j = std::string(to_string(m)); }
void from_json(const nlohmann::json& j, Mode& m) { m = mode_from_string(j.get<std::string>()); }

void to_json(nlohmann::json& j, const Question& q) {
  j = nlohmann::json{{"id", q.id},
                     {"text", q.text},
                     {"gold_answers", q.gold_answers},
                     {"answer_kind", to_string(q.answer_kind)},
                     {"dataset_tag", q.dataset_tag}};
}

void from_json(const nlohmann::json& j, Question& q) {
  j.at("id").get_to(q.id);
  j.at("text").get_to(q.text);
  j.at("gold_answers").get_to(q.gold_answers);
  q.answer_kind = answer_kind_from_string(j.at("answer_kind").get<std::string>());
  j.at("dataset_tag").get_to(q.dataset_tag);
}

void to_json(nlohmann::json& j, const SubQuestionSet& s) {
  j = nlohmann::json{{"parent_id", s.parent_id},
                     {"items", s.items},
                     {"source", name_of(kSourceNames, s.source)}};
}

void from_json(const nlohmann::json& j, SubQuestionSet& s) {
  j.at("parent_id").get_to(s.parent_id);
  j.at("items").get_to(s.items);
  s.source = lookup(kSourceNames, j.at("source").get<std::string>(), "sub-question source");
}

void to_json(nlohmann::json& j, const EvidenceBundle& e) {
  j = nlohmann::json{{"channel", e.channel},
                     {"text", e.text},
                     {"provenance", e.provenance},
                     {"is_fallback", e.is_fallback},
                     {"truncated", e.truncated}};
}

void from_json(const nlohmann::json& j, EvidenceBundle& e) {
  j.at("channel").get_to(e.channel);
  j.at("text").get_to(e.text);
  j.at("provenance").get_to(e.provenance);
  j.at("is_fallback").get_to(e.is_fallback);
  e.truncated = j.value("truncated", false);
}

void to_json(nlohmann::json& j, const CandidateAnswer& c) {
  j = nlohmann::json{{"channel", c.channel}, {"text", c.text}, {"prompt_digest", c.prompt_digest}};
}

void from_json(const nlohmann::json& j, CandidateAnswer& c) {
  j.at("channel").get_to(c.channel);
  j.at("text").get_to(c.text);
  j.at("prompt_digest").get_to(c.prompt_digest);
}

void to_json(nlohmann::json& j, const SelectionResult& s) {
  // Keyed object in canonical channel order.
  nlohmann::json sims = nlohmann::json::object();
  for (const auto& [channel, value] : s.similarities) sims[std::string(to_string(channel))] = value;
  nlohmann::json degenerate = nlohmann::json::array();
  for (Channel c : s.degenerate_flags) degenerate.push_back(c);
  j = nlohmann::json{{"similarities", sims},
                     {"selected_channel", s.selected_channel},
                     {"selected_text", s.selected_text},
                     {"tie_broken", s.tie_broken},
                     {"degenerate_flags", degenerate}};
}

void from_json(const nlohmann::json& j, SelectionResult& s) {
  s.similarities.clear();
  for (const auto& [key, value] : j.at("similarities").items()) {
    s.similarities[channel_from_string(key)] = value.get<double>();
  }
  j.at("selected_channel").get_to(s.selected_channel);
  j.at("selected_text").get_to(s.selected_text);
  j.at("tie_broken").get_to(s.tie_broken);
  s.degenerate_flags.clear();
  for (const auto& c : j.at("degenerate_flags")) s.degenerate_flags.insert(c.get<Channel>());
}

void to_json(nlohmann::json& j, const ProviderEndpoint& p) {
  j = nlohmann::json{{"base_url", p.base_url}, {"model_id", p.model_id}};
}

void from_json(const nlohmann::json& j, ProviderEndpoint& p) {
  p.base_url = j.value("base_url", std::string{});
  p.model_id = j.value("model_id", std::string{});
}

void to_json(nlohmann::json& j, const PipelineConfig& c) {
  j = nlohmann::json{{"mode", c.mode},
                     {"sub_question_count", c.sub_question_count},
                     {"search_top_k", c.search_top_k},
                     {"runs", c.runs},
                     {"max_context_words", c.max_context_words},
                     {"max_tokens", c.max_tokens},
                     {"chat", c.chat},
                     {"reader", c.reader},
                     {"search", c.search},
                     {"embed", c.embed},
                     {"cache_dir", c.cache_dir},
                     {"replay_strict", c.replay_strict},
                     {"random_seed", c.random_seed}};
}

void from_json(const nlohmann::json& j, PipelineConfig& c) {
  PipelineConfig d;
  c.mode = j.contains("mode") ? j.at("mode").get<Mode>() : d.mode;
  c.sub_question_count = j.value("sub_question_count", d.sub_question_count);
  c.search_top_k = j.value("search_top_k", d.search_top_k);
  c.runs = j.value("runs", d.runs);
  c.max_context_words = j.value("max_context_words", d.max_context_words);
  c.max_tokens = j.value("max_tokens", d.max_tokens);
  c.chat = j.value("chat", d.chat);
  c.reader = j.value("reader", d.reader);
  c.search = j.value("search", d.search);
  c.embed = j.value("embed", d.embed);
  c.cache_dir = j.value("cache_dir", d.cache_dir);
  c.replay_strict = j.value("replay_strict", d.replay_strict);
  c.random_seed = j.value("random_seed", d.random_seed);
}

}  // namespace msrag
