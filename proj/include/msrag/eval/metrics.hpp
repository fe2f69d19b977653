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

// Answer scoring with SQuAD-style normalization: lowercase, strip ASCII
// punctuation, drop the articles "a"/"an"/"the", collapse whitespace.

#include <span>
#include <string>
#include <string_view>

namespace msrag::eval {

std::string normalize_answer(std::string_view s);

/// 1 iff the normalized prediction equals some normalized gold alias.
int exact_match(std::string_view pred, std::span<const std::string> golds);

/// Token-multiset F1, best over aliases. Two empty token lists score 1.
double token_f1(std::string_view pred, std::span<const std::string> golds);

struct BooleanScore {
  int correct = 0;
  bool unparseable = false;
};

/// Reads the first yes/true or no/false token of the normalized prediction.
BooleanScore boolean_accuracy(std::string_view pred, bool gold);

}  // namespace msrag::eval
