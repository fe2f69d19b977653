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

// Per-example records, run aggregation, and the run manifest.
//
// Manifest file: <out>/<run-id>/manifest.json =
//   {run_id, created_at, run_index, seed, complete, dataset_tag, mode, selector,
//    config, config_digest, dataset_digest, records: [ExampleRecord], metrics,
//    calls: {chat, search, embed}}

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msrag/channels.hpp"
#include "msrag/core.hpp"

namespace msrag::eval {

struct Metrics {
  std::optional<int> em;     // Span questions
  std::optional<double> f1;  // Span questions
  std::optional<int> acc;    // Boolean questions
  bool unparseable = false;  // Boolean answer had no yes/no token

  bool operator==(const Metrics&) const = default;
};

/// Scores the selected answer of `q`.
Metrics score(const Question& q, const std::string& selected_text);

struct ExampleRecord {
  std::string question_id;
  std::optional<SubQuestionSet> sub_questions;
  std::optional<channels::WebChannelTrace> web;
  std::optional<EvidenceBundle> information_gpt;
  std::vector<channels::ChannelTrace> traces;
  std::vector<CandidateAnswer> candidates;
  std::optional<SelectionResult> selection;
  std::optional<Metrics> metrics;  // present iff error is absent
  std::optional<std::string> error;

  bool operator==(const ExampleRecord&) const = default;
};

struct RunMetrics {
  std::optional<double> em;
  std::optional<double> f1;
  std::optional<double> acc;
  std::size_t scored = 0;
  std::size_t errored = 0;
  double error_rate = 0.0;

  bool operator==(const RunMetrics&) const = default;
};

/// Means over scored records; errored records only feed error_rate.
/// Throws EmptyRun when nothing was scored.
RunMetrics aggregate_run(const std::vector<ExampleRecord>& records);

/// Fieldwise mean across runs. A metric is kept only if every run has it.
RunMetrics average_runs(const std::vector<RunMetrics>& runs);

/// Provider calls issued by the pipeline during one run (above any cache).
struct CallCounts {
  std::size_t chat = 0;
  std::size_t search = 0;
  std::size_t embed = 0;

  bool operator==(const CallCounts&) const = default;
};

struct Manifest {
  std::string run_id;
  std::string created_at;
  int run_index = 0;
  std::int64_t seed = 0;
  bool complete = true;
  std::string dataset_tag;
  Mode mode = Mode::Full;
  SelectorKind selector = SelectorKind::Oracle;
  nlohmann::json config;
  std::string config_digest;
  std::string dataset_digest;
  std::vector<ExampleRecord> records;
  std::optional<RunMetrics> metrics;
  std::optional<CallCounts> calls;
};

void write_manifest(const std::filesystem::path& path, const Manifest& m);
Manifest read_manifest(const std::filesystem::path& path);

/// The manifest JSON with run_id and every created_at removed, for
/// determinism comparisons.
nlohmann::json strip_volatile(nlohmann::json manifest);

void to_json(nlohmann::json& j, const Metrics& m);
void from_json(const nlohmann::json& j, Metrics& m);
void to_json(nlohmann::json& j, const ExampleRecord& r);
void from_json(const nlohmann::json& j, ExampleRecord& r);
void to_json(nlohmann::json& j, const RunMetrics& m);
void from_json(const nlohmann::json& j, RunMetrics& m);
void to_json(nlohmann::json& j, const CallCounts& c);
void from_json(const nlohmann::json& j, CallCounts& c);
void to_json(nlohmann::json& j, const Manifest& m);
void from_json(const nlohmann::json& j, Manifest& m);

}  // namespace msrag::eval
