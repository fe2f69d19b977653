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

#include "msrag/decompose.hpp"

#include <optional>
#include <cctype>
#include <set>

#include <nlohmann/json.hpp>

#include "msrag/text.hpp"

namespace msrag::decompose {

using nlohmann::json;

namespace {

std::optional<std::vector<std::string>> strings_of(const json& arr) {
  if (!arr.is_array()) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& item : arr) {
    if (item.is_string()) out.push_back(item.get<std::string>());
  }
  return out;
}

std::optional<std::vector<std::string>> from_json_value(const json& doc) {
  if (doc.is_array()) return strings_of(doc);
  if (doc.is_object() && doc.contains("sub_questions")) return strings_of(doc["sub_questions"]);
  return std::nullopt;
}

// Tries bracketed spans, latest first, and returns the first that parses
// into a list of strings. The search is capped so noisy input stays cheap.
std::optional<std::vector<std::string>> from_embedded_json(std::string_view s, char open,
                                                           char close) {
  constexpr std::size_t kMaxCandidates = 32;
  std::vector<std::size_t> opens;
  std::vector<std::size_t> closes;
  for (std::size_t i = s.size(); i-- > 0;) {
    if (s[i] == open && opens.size() < kMaxCandidates) opens.push_back(i);
    if (s[i] == close && closes.size() < kMaxCandidates) closes.push_back(i);
  }
  for (std::size_t b : opens) {
    for (std::size_t e : closes) {
      if (e <= b) break;
      json doc = json::parse(s.substr(b, e - b + 1), nullptr, false);
      if (doc.is_discarded()) continue;
      if (auto items = from_json_value(doc)) return items;
    }
  }
  return std::nullopt;
}

// Lines of the form "<1-3 digits>[.)] text".
std::optional<std::string> numbered_item(std::string_view line) {
  std::size_t i = 0;
  auto space = [&] {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  };
  space();
  std::size_t digits = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
    ++i;
    ++digits;
  }
  if (digits == 0 || digits > 3) return std::nullopt;
  space();
  if (i == line.size() || (line[i] != '.' && line[i] != ')')) return std::nullopt;
  std::string rest = text::trim(line.substr(i + 1));
  if (rest.empty()) return std::nullopt;
  return rest;
}

std::vector<std::string> from_numbered_lines(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find('\n', start);
    if (end == std::string_view::npos) end = s.size();
    if (auto item = numbered_item(s.substr(start, end - start))) out.push_back(std::move(*item));
    start = end + 1;
  }
  return out;
}

std::vector<std::string> clean(const std::vector<std::string>& raw, std::size_t max_items) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& item : raw) {
    std::string t = text::trim(item);
    // Models sometimes quote numbered items.
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = text::trim(t.substr(1, t.size() - 2));
    if (t.empty()) continue;
    if (!seen.insert(text::fold_for_compare(t)).second) continue;
    out.push_back(std::move(t));
    if (out.size() == max_items) break;
  }
  return out;
}

SubQuestionSet fallback(const Question& q) {
  return SubQuestionSet{q.id, {q.text}, SubQuestionSource::Fallback};
}

}  // namespace

ParseResult parse_segmentation_output(std::string_view raw_in, std::size_t max_items) {
  if (max_items == 0) return ParseFailure{"max_items is zero"};
  const std::string raw = text::sanitize_utf8(raw_in);

  std::optional<std::vector<std::string>> found;
  json whole = json::parse(raw, nullptr, false);
  if (!whole.is_discarded()) found = from_json_value(whole);
  if (!found || clean(*found, max_items).empty()) found = from_embedded_json(raw, '[', ']');
  if (!found || clean(*found, max_items).empty()) found = from_embedded_json(raw, '{', '}');
  if (!found || clean(*found, max_items).empty()) found = from_numbered_lines(raw);

  auto items = clean(*found, max_items);
  if (items.empty()) return ParseFailure{"no sub-questions recoverable from model output"};
  return items;
}

SubQuestionSet segment_question(const Question& q, const RunContext& ctx) {
  const auto n = static_cast<std::size_t>(ctx.config.sub_question_count);
  std::string instructions = prompts::render(
      ctx.prompts.segment, {{"question", q.text}, {"n", std::to_string(n)}});
  auto req = make_chat_request(ctx, ctx.config.chat.model_id, q.text, std::move(instructions));
  auto response = ctx.providers.chat->complete(req);

  auto parsed = parse_segmentation_output(response.content, n);
  if (auto* items = std::get_if<std::vector<std::string>>(&parsed)) {
    return SubQuestionSet{q.id, std::move(*items), SubQuestionSource::Model};
  }
  return fallback(q);
}

}  // namespace msrag::decompose
