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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace msrag::prompts {

/// The versioned prompt templates. Defaults are compiled in from prompts/*.txt;
/// a directory with the same file names overrides them.
struct PromptSet {
  std::string segment;              // {question} {n}
  std::string gpt_retrieval;        // {question}
  std::string summarize;            // {question} {sub_questions} {results}
  std::string reader_with_context;  // {context} {question} {instruction}
  std::string reader_direct;        // {question} {instruction}

  static PromptSet embedded();
  static PromptSet load(const std::filesystem::path& dir);

  /// Digest per template name, recorded in manifests so prompt edits are auditable.
  std::map<std::string, std::string> digests() const;
};

/// Substitutes `{name}` placeholders. `{{` and `}}` render as literal braces.
/// Throws InvalidInput for an unknown placeholder or a stray brace.
std::string render(std::string_view tmpl, const std::map<std::string, std::string>& vars);

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded();
}

}  // namespace msrag::prompts
