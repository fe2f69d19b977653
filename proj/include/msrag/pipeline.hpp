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

#include <atomic>
#include <vector>

#include "msrag/context.hpp"
#include "msrag/core.hpp"
#include "msrag/eval/records.hpp"

namespace msrag::pipeline {

/// Channels, selection and scoring for one question. Failures are captured
/// in the record's `error` field instead of being thrown.
eval::ExampleRecord run_example(const Question& q, const RunContext& ctx, SelectorKind selector);

struct DatasetRunOptions {
  int workers = 1;
  const std::atomic<bool>* stop = nullptr;  // checked before each example starts
};

struct DatasetRun {
  std::vector<eval::ExampleRecord> records;  // dataset order
  bool complete = true;                      // false if stopped early
};

DatasetRun run_dataset(const std::vector<Question>& questions, const RunContext& ctx,
                       SelectorKind selector, const DatasetRunOptions& options = {});

}  // namespace msrag::pipeline
