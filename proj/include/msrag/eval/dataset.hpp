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

// Dataset ingestion. Files are JSON lines (one record per line) or a single
// JSON array of records.
//
//   Hotpot, TwoWiki  {"_id", "question", "answer", optional "answer_aliases"}  -> Span
//   StrategyQA       {"qid", "question", "answer": bool}                        -> Boolean
//   Generic          {"id", "question", "answers": [string]} | {"id", "question", "answer": bool}

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msrag/core.hpp"

namespace msrag::eval {

enum class DatasetSchema { Hotpot, TwoWiki, StrategyQA, Generic };

std::string_view to_string(DatasetSchema s);
DatasetSchema schema_from_string(std::string_view s);

/// Throws ParseError (with 1-based line) or SchemaError (naming the field).
std::vector<Question> load_dataset(const std::filesystem::path& path, DatasetSchema schema,
                                   std::string dataset_tag = {});

/// Maps one decoded record; `line` is used for error messages.
Question map_record(const nlohmann::json& record, DatasetSchema schema,
                    const std::string& dataset_tag, std::size_t line);

struct Sampling {
  std::optional<std::size_t> n;  // keep everything when absent
  bool random = false;           // seeded random subset instead of the first n
  std::uint64_t seed = 0;
};

/// Subset selection that preserves dataset order. Uses its own RNG steps so
/// results do not depend on the standard library implementation.
std::vector<Question> sample(const std::vector<Question>& all, const Sampling& s);

/// Digest of the canonical JSON of the questions, in order.
std::string dataset_digest(const std::vector<Question>& questions);

}  // namespace msrag::eval
