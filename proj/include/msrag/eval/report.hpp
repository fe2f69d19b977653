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

// Method x dataset comparison tables. Rows follow the ablation layout
// (No-RAG, GPT-Retrieval, Web-Retrieval, w/o GPT, w/o Web, MSRAG); each
// dataset contributes EM and F1 columns for span questions and an Accuracy
// column for yes/no questions.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msrag/eval/records.hpp"

namespace msrag::eval {

struct RunReport {
  std::string dataset_tag;
  Mode mode = Mode::Full;
  SelectorKind selector = SelectorKind::Oracle;
  int runs = 0;
  std::vector<RunMetrics> per_run_metrics;
  RunMetrics mean_metrics;
  std::string config_digest;
  std::string dataset_digest;

  bool operator==(const RunReport&) const = default;
};

/// Builds a report whose mean is the fieldwise average of `per_run`.
RunReport make_report(std::string dataset_tag, Mode mode, SelectorKind selector,
                      std::vector<RunMetrics> per_run, std::string config_digest,
                      std::string dataset_digest);

enum class ReportFormat { Markdown, Csv };

/// Markdown bolds the best value of each column; CSV carries plain numbers.
std::string emit_report(const std::vector<RunReport>& reports, ReportFormat format);

void to_json(nlohmann::json& j, const RunReport& r);
void from_json(const nlohmann::json& j, RunReport& r);

void write_report_json(const std::filesystem::path& path, const RunReport& r);
RunReport read_report_json(const std::filesystem::path& path);

/// Formats a double with the shortest representation that round-trips.
std::string format_number(double v);

}  // namespace msrag::eval
