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

// Splits a question into distinct sub-questions for per-sub-question web search.

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "msrag/context.hpp"
#include "msrag/core.hpp"

namespace msrag::decompose {

struct ParseFailure {
  std::string reason;
};

using ParseResult = std::variant<std::vector<std::string>, ParseFailure>;

/// Accepts, in order of preference: a JSON array of strings, a JSON object
/// {"sub_questions": [...]}, or numbered lines ("1. ...", "2) ..."). JSON may
/// be embedded in surrounding reasoning text; the last parseable block wins.
/// Items are trimmed, empties dropped, duplicates removed case-insensitively
/// and the list truncated to `max_items`.
ParseResult parse_segmentation_output(std::string_view raw, std::size_t max_items = 3);

/// One chat call. Never throws on malformed model output: anything that does
/// not yield at least one item becomes the fallback set [q.text]. Provider
/// errors propagate.
SubQuestionSet segment_question(const Question& q, const RunContext& ctx);

}  // namespace msrag::decompose
