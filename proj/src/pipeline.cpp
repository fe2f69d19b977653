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

#include "msrag/pipeline.hpp"

#include <optional>
#include <thread>

#include "msrag/channels.hpp"
#include "msrag/select.hpp"

namespace msrag::pipeline {

eval::ExampleRecord run_example(const Question& q, const RunContext& ctx, SelectorKind selector) {
  eval::ExampleRecord record;
  record.question_id = q.id;
  try {
    validate(q);
    auto outcome = channels::run_example_channels(q, ctx);
    record.sub_questions = std::move(outcome.sub_questions);
    record.web = std::move(outcome.web);
    record.information_gpt = std::move(outcome.information_gpt);
    record.traces = std::move(outcome.traces);
    record.candidates = std::move(outcome.candidates);

    auto& embedder = *ctx.providers.embedder;
    if (record.candidates.size() == 1) {
      record.selection = select::pass_through(record.candidates.front());
    } else if (selector == SelectorKind::Oracle) {
      record.selection = select::select_answer(record.candidates, q.gold_answers, embedder);
    } else {
      record.selection = select::select_consensus(record.candidates, embedder);
    }
    record.metrics = eval::score(q, record.selection->selected_text);
  } catch (const std::exception& e) {
    record.selection.reset();
    record.metrics.reset();
    record.error = e.what();
  }
  return record;
}

DatasetRun run_dataset(const std::vector<Question>& questions, const RunContext& ctx,
                       SelectorKind selector, const DatasetRunOptions& options) {
  std::vector<std::optional<eval::ExampleRecord>> slots(questions.size());
  std::atomic<std::size_t> next{0};
  auto stopped = [&] { return options.stop && options.stop->load(); };

  auto worker = [&] {
    for (;;) {
      if (stopped()) return;
      std::size_t i = next.fetch_add(1);
      if (i >= questions.size()) return;
      slots[i] = run_example(questions[i], ctx, selector);
    }
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  DatasetRun out;
  for (auto& slot : slots) {
    if (slot) {
      out.records.push_back(std::move(*slot));
    } else {
      out.complete = false;
    }
  }
  return out;
}

}  // namespace msrag::pipeline
