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

#include <fstream>
#include <sstream>

#include "msrag/error.hpp"
#include "msrag/eval/metrics.hpp"
#include "msrag/eval/records.hpp"

namespace msrag::channels {

void to_json(nlohmann::json& j, const WebChannelTrace& t) {
  j = nlohmann::json{{"sub_results", t.sub_results},
                     {"summary_prompt_digest", t.summary_prompt_digest},
                     {"information_web", t.information_web}};
}

void from_json(const nlohmann::json& j, WebChannelTrace& t) {
  j.at("sub_results").get_to(t.sub_results);
  j.at("summary_prompt_digest").get_to(t.summary_prompt_digest);
  j.at("information_web").get_to(t.information_web);
}

void to_json(nlohmann::json& j, const ChannelTrace& t) {
  j = nlohmann::json{{"channel", t.channel},
                     {"evidence_digest", t.evidence_digest},
                     {"context_prompt_digest", t.context_prompt_digest},
                     {"reader_prompt_digest", t.reader_prompt_digest},
                     {"fallback_context", t.fallback_context},
                     {"truncated_context", t.truncated_context}};
}

void from_json(const nlohmann::json& j, ChannelTrace& t) {
  j.at("channel").get_to(t.channel);
  j.at("evidence_digest").get_to(t.evidence_digest);
  j.at("context_prompt_digest").get_to(t.context_prompt_digest);
  j.at("reader_prompt_digest").get_to(t.reader_prompt_digest);
  j.at("fallback_context").get_to(t.fallback_context);
  j.at("truncated_context").get_to(t.truncated_context);
}

}  // namespace msrag::channels

namespace msrag::eval {

using nlohmann::json;

namespace {

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

template <class T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null()) {
    v = j.at(key).get<T>();
  } else {
    v.reset();
  }
}

template <class Get>
std::optional<double> mean_of(const std::vector<ExampleRecord>& records, Get get) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (!r.metrics) continue;
    if (auto v = get(*r.metrics)) {
      sum += static_cast<double>(*v);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

Metrics score(const Question& q, const std::string& selected_text) {
  Metrics m;
  if (q.answer_kind == AnswerKind::Boolean) {
    auto gold = boolean_gold(q);
    if (!gold) throw InvalidInput("boolean question " + q.id + " has no yes/no gold");
    auto b = boolean_accuracy(selected_text, *gold);
    m.acc = b.correct;
    m.unparseable = b.unparseable;
  } else {
    m.em = exact_match(selected_text, q.gold_answers);
    m.f1 = token_f1(selected_text, q.gold_answers);
  }
  return m;
}

RunMetrics aggregate_run(const std::vector<ExampleRecord>& records) {
  RunMetrics out;
  for (const auto& r : records) {
    if (r.metrics) {
      ++out.scored;
    } else {
      ++out.errored;
    }
  }
  if (out.scored == 0) throw EmptyRun("run has no scored records");
  out.em = mean_of(records, [](const Metrics& m) { return m.em; });
  out.f1 = mean_of(records, [](const Metrics& m) { return m.f1; });
  out.acc = mean_of(records, [](const Metrics& m) { return m.acc; });
  out.error_rate = static_cast<double>(out.errored) / static_cast<double>(records.size());
  return out;
}

RunMetrics average_runs(const std::vector<RunMetrics>& runs) {
  if (runs.empty()) throw EmptyRun("no runs to average");
  auto mean = [&](auto field) -> std::optional<double> {
    double sum = 0.0;
    for (const auto& r : runs) {
      const auto& v = r.*field;
      if (!v) return std::nullopt;
      sum += *v;
    }
    return sum / static_cast<double>(runs.size());
  };
  RunMetrics out;
  out.em = mean(&RunMetrics::em);
  out.f1 = mean(&RunMetrics::f1);
  out.acc = mean(&RunMetrics::acc);
  double err = 0.0;
  for (const auto& r : runs) {
    out.scored += r.scored;
    out.errored += r.errored;
    err += r.error_rate;
  }
  out.error_rate = err / static_cast<double>(runs.size());
  return out;
}

void to_json(json& j, const Metrics& m) {
  j = json::object();
  if (m.em) j["em"] = *m.em;
  if (m.f1) j["f1"] = *m.f1;
  if (m.acc) {
    j["acc"] = *m.acc;
    j["unparseable"] = m.unparseable;
  }
}

void from_json(const json& j, Metrics& m) {
  get_optional(j, "em", m.em);
  get_optional(j, "f1", m.f1);
  get_optional(j, "acc", m.acc);
  m.unparseable = j.value("unparseable", false);
}

void to_json(json& j, const ExampleRecord& r) {
  j = json::object();
  j["question_id"] = r.question_id;
  put_optional(j, "sub_questions", r.sub_questions);
  put_optional(j, "web", r.web);
  put_optional(j, "information_gpt", r.information_gpt);
  j["traces"] = r.traces;
  j["candidates"] = r.candidates;
  put_optional(j, "selection", r.selection);
  put_optional(j, "metrics", r.metrics);
  put_optional(j, "error", r.error);
}

void from_json(const json& j, ExampleRecord& r) {
  j.at("question_id").get_to(r.question_id);
  get_optional(j, "sub_questions", r.sub_questions);
  get_optional(j, "web", r.web);
  get_optional(j, "information_gpt", r.information_gpt);
  j.at("traces").get_to(r.traces);
  j.at("candidates").get_to(r.candidates);
  get_optional(j, "selection", r.selection);
  get_optional(j, "metrics", r.metrics);
  get_optional(j, "error", r.error);
}

void to_json(json& j, const RunMetrics& m) {
  j = json::object();
  put_optional(j, "em", m.em);
  put_optional(j, "f1", m.f1);
  put_optional(j, "acc", m.acc);
  j["scored"] = m.scored;
  j["errored"] = m.errored;
  j["error_rate"] = m.error_rate;
}

void from_json(const json& j, RunMetrics& m) {
  get_optional(j, "em", m.em);
  get_optional(j, "f1", m.f1);
  get_optional(j, "acc", m.acc);
  j.at("scored").get_to(m.scored);
  j.at("errored").get_to(m.errored);
  j.at("error_rate").get_to(m.error_rate);
}

void to_json(json& j, const CallCounts& c) {
  j = json{{"chat", c.chat}, {"search", c.search}, {"embed", c.embed}};
}

void from_json(const json& j, CallCounts& c) {
  j.at("chat").get_to(c.chat);
  j.at("search").get_to(c.search);
  j.at("embed").get_to(c.embed);
}

void to_json(json& j, const Manifest& m) {
  j = json{{"run_id", m.run_id},
           {"created_at", m.created_at},
           {"run_index", m.run_index},
           {"seed", m.seed},
           {"complete", m.complete},
           {"dataset_tag", m.dataset_tag},
           {"mode", m.mode},
           {"selector", to_string(m.selector)},
           {"config", m.config},
           {"config_digest", m.config_digest},
           {"dataset_digest", m.dataset_digest},
           {"records", m.records}};
  put_optional(j, "metrics", m.metrics);
  put_optional(j, "calls", m.calls);
}

void from_json(const json& j, Manifest& m) {
  j.at("run_id").get_to(m.run_id);
  m.created_at = j.value("created_at", std::string{});
  j.at("run_index").get_to(m.run_index);
  j.at("seed").get_to(m.seed);
  j.at("complete").get_to(m.complete);
  j.at("dataset_tag").get_to(m.dataset_tag);
  j.at("mode").get_to(m.mode);
  m.selector = selector_from_string(j.at("selector").get<std::string>());
  m.config = j.at("config");
  j.at("config_digest").get_to(m.config_digest);
  j.at("dataset_digest").get_to(m.dataset_digest);
  j.at("records").get_to(m.records);
  get_optional(j, "metrics", m.metrics);
  get_optional(j, "calls", m.calls);
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write manifest " + path.string());
    out << json(m).dump(2, ' ', false, json::error_handler_t::replace) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read manifest " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error("manifest " + path.string() + " is not valid JSON");
  return doc.get<Manifest>();
}

json strip_volatile(json manifest) {
  if (manifest.is_object()) {
    manifest.erase("run_id");
    manifest.erase("created_at");
    for (auto& [key, value] : manifest.items()) value = strip_volatile(std::move(value));
  } else if (manifest.is_array()) {
    for (auto& value : manifest) value = strip_volatile(std::move(value));
  }
  return manifest;
}

}  // namespace msrag::eval
