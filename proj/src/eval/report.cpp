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

#include "msrag/eval/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>

#include "msrag/error.hpp"

namespace msrag::eval {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

RunReport make_report(std::string dataset_tag, Mode mode, SelectorKind selector,
                      std::vector<RunMetrics> per_run, std::string config_digest,
                      std::string dataset_digest) {
  RunReport r;
  r.dataset_tag = std::move(dataset_tag);
  r.mode = mode;
  r.selector = selector;
  r.runs = static_cast<int>(per_run.size());
  r.mean_metrics = average_runs(per_run);
  r.per_run_metrics = std::move(per_run);
  r.config_digest = std::move(config_digest);
  r.dataset_digest = std::move(dataset_digest);
  return r;
}

namespace {

constexpr Mode kRowOrder[] = {Mode::DirectOnly, Mode::GptOnly, Mode::WebOnly,
                              Mode::NoGpt,      Mode::NoWeb,   Mode::Full};

enum class Metric { Em, F1, Acc };

struct Column {
  std::string dataset;
  Metric metric;
  std::string title;
};

std::optional<double> value_of(const RunMetrics& m, Metric metric) {
  switch (metric) {
    case Metric::Em: return m.em;
    case Metric::F1: return m.f1;
    case Metric::Acc: return m.acc;
  }
  return std::nullopt;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

namespace {

// RFC 4180 quoting for cells holding separators or quotes.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string emit_report(const std::vector<RunReport>& reports, ReportFormat format) {
  // Datasets in order of first appearance; a column exists if any report has the metric.
  std::vector<std::string> datasets;
  for (const auto& r : reports) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset_tag) == datasets.end()) {
      datasets.push_back(r.dataset_tag);
    }
  }
  std::vector<Column> columns;
  for (const auto& ds : datasets) {
    for (auto [metric, name] : {std::pair{Metric::Em, "EM"}, std::pair{Metric::F1, "F1"},
                                std::pair{Metric::Acc, "Accuracy"}}) {
      bool any = std::any_of(reports.begin(), reports.end(), [&](const RunReport& r) {
        return r.dataset_tag == ds && value_of(r.mean_metrics, metric).has_value();
      });
      if (any) columns.push_back({ds, metric, ds + " " + name});
    }
  }

  std::vector<Mode> rows;
  for (Mode m : kRowOrder) {
    if (std::any_of(reports.begin(), reports.end(),
                    [&](const RunReport& r) { return r.mode == m; })) {
      rows.push_back(m);
    }
  }

  auto cell = [&](Mode mode, const Column& col) -> std::optional<double> {
    for (const auto& r : reports) {
      if (r.mode == mode && r.dataset_tag == col.dataset) return value_of(r.mean_metrics, col.metric);
    }
    return std::nullopt;
  };

  std::vector<std::optional<double>> best(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (Mode m : rows) {
      auto v = cell(m, columns[c]);
      if (v && (!best[c] || *v > *best[c])) best[c] = v;
    }
  }

  std::string out;
  if (format == ReportFormat::Markdown) {
    out += "| Method |";
    for (const auto& c : columns) out += " " + c.title + " |";
    out += "\n|---|";
    for (std::size_t c = 0; c < columns.size(); ++c) out += "---:|";
    out += "\n";
    for (Mode m : rows) {
      out += "| " + std::string(table_label(m)) + " |";
      for (std::size_t c = 0; c < columns.size(); ++c) {
        auto v = cell(m, columns[c]);
        if (!v) {
          out += " - |";
        } else if (best[c] && *v == *best[c]) {
          out += " **" + fixed4(*v) + "** |";
        } else {
          out += " " + fixed4(*v) + " |";
        }
      }
      out += "\n";
    }
  } else {
    out += "method";
    for (const auto& c : columns) out += "," + csv_field(c.title);
    out += "\n";
    for (Mode m : rows) {
      out += csv_field(std::string(table_label(m)));
      for (const auto& c : columns) {
        auto v = cell(m, c);
        out += ",";
        if (v) out += format_number(*v);
      }
      out += "\n";
    }
  }
  return out;
}

void to_json(json& j, const RunReport& r) {
  j = json{{"dataset_tag", r.dataset_tag},
           {"mode", r.mode},
           {"selector", to_string(r.selector)},
           {"runs", r.runs},
           {"per_run_metrics", r.per_run_metrics},
           {"mean_metrics", r.mean_metrics},
           {"config_digest", r.config_digest},
           {"dataset_digest", r.dataset_digest}};
}

void from_json(const json& j, RunReport& r) {
  j.at("dataset_tag").get_to(r.dataset_tag);
  j.at("mode").get_to(r.mode);
  r.selector = selector_from_string(j.at("selector").get<std::string>());
  j.at("runs").get_to(r.runs);
  j.at("per_run_metrics").get_to(r.per_run_metrics);
  j.at("mean_metrics").get_to(r.mean_metrics);
  j.at("config_digest").get_to(r.config_digest);
  j.at("dataset_digest").get_to(r.dataset_digest);
}

void write_report_json(const std::filesystem::path& path, const RunReport& r) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write report " + path.string());
  out << json(r).dump(2) << '\n';
}

RunReport read_report_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read report " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error("report " + path.string() + " is not valid JSON");
  return doc.get<RunReport>();
}

}  // namespace msrag::eval
