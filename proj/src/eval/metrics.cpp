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

#include "msrag/eval/metrics.hpp"

#include <algorithm>
#include <map>

#include "msrag/text.hpp"

namespace msrag::eval {

namespace {

bool is_ascii_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}

std::vector<std::string> normalized_tokens(std::string_view s) {
  return text::split_whitespace(normalize_answer(s));
}

double f1_single(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  if (pred.empty() || gold.empty()) return 0.0;
  std::map<std::string_view, int> counts;
  for (const auto& t : gold) ++counts[t];
  int overlap = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  double precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
  double recall = static_cast<double>(overlap) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

std::string normalize_answer(std::string_view s) {
  std::string stripped;
  stripped.reserve(s.size());
  for (char c : text::to_lower_ascii(s)) {
    if (!is_ascii_punct(c)) stripped.push_back(c);
  }
  std::vector<std::string> kept;
  for (auto& tok : text::split_whitespace(stripped)) {
    if (tok != "a" && tok != "an" && tok != "the") kept.push_back(std::move(tok));
  }
  return text::join(kept, " ");
}

int exact_match(std::string_view pred, std::span<const std::string> golds) {
  const std::string p = normalize_answer(pred);
  return std::any_of(golds.begin(), golds.end(),
                     [&](const std::string& g) { return normalize_answer(g) == p; })
             ? 1
             : 0;
}

double token_f1(std::string_view pred, std::span<const std::string> golds) {
  const auto p = normalized_tokens(pred);
  double best = 0.0;
  for (const auto& g : golds) best = std::max(best, f1_single(p, normalized_tokens(g)));
  return best;
}

BooleanScore boolean_accuracy(std::string_view pred, bool gold) {
  for (const auto& tok : normalized_tokens(pred)) {
    if (tok == "yes" || tok == "true") return {gold ? 1 : 0, false};
    if (tok == "no" || tok == "false") return {gold ? 0 : 1, false};
  }
  return {0, true};
}

}  // namespace msrag::eval
