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

#include "msrag/eval/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "msrag/error.hpp"
#include "msrag/providers/digest.hpp"
#include "msrag/text.hpp"

namespace msrag::eval {

using nlohmann::json;

std::string_view to_string(DatasetSchema s) {
  switch (s) {
    case DatasetSchema::Hotpot: return "hotpot";
    case DatasetSchema::TwoWiki: return "twowiki";
    case DatasetSchema::StrategyQA: return "strategyqa";
    case DatasetSchema::Generic: return "generic";
  }
  return "?";
}

DatasetSchema schema_from_string(std::string_view s) {
  std::string v = text::to_lower_ascii(s);
  if (v == "hotpot" || v == "hotpotqa") return DatasetSchema::Hotpot;
  if (v == "twowiki" || v == "2wiki" || v == "2wikimultihopqa") return DatasetSchema::TwoWiki;
  if (v == "strategyqa") return DatasetSchema::StrategyQA;
  if (v == "generic") return DatasetSchema::Generic;
  throw InvalidInput("unknown dataset schema \"" + std::string(s) +
                     "\" (allowed: hotpot, twowiki, strategyqa, generic)");
}

namespace {

std::string id_field(const json& r, const char* name, std::size_t line) {
  if (!r.contains(name)) throw SchemaError(name, line);
  const auto& v = r[name];
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw SchemaError(name, line);
}

std::string string_field(const json& r, const char* name, std::size_t line) {
  if (!r.contains(name) || !r[name].is_string()) throw SchemaError(name, line);
  return r[name].get<std::string>();
}

std::vector<std::string> aliases(const json& r, std::size_t line) {
  std::vector<std::string> out;
  for (const char* key : {"answer_aliases", "aliases"}) {
    if (!r.contains(key)) continue;
    if (!r[key].is_array()) throw SchemaError(key, line);
    for (const auto& a : r[key]) {
      if (!a.is_string()) throw SchemaError(key, line);
      out.push_back(a.get<std::string>());
    }
  }
  return out;
}

void add_unique(std::vector<std::string>& to, const std::vector<std::string>& from) {
  for (const auto& s : from) {
    if (!s.empty() && std::find(to.begin(), to.end(), s) == to.end()) to.push_back(s);
  }
}

// Line number of a byte offset, 1-based.
std::size_t line_of(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

}  // namespace

Question map_record(const json& r, DatasetSchema schema, const std::string& tag,
                    std::size_t line) {
  if (!r.is_object()) throw ParseError(line, "record is not a JSON object");
  Question q;
  q.dataset_tag = tag;
  q.text = string_field(r, "question", line);
  switch (schema) {
    case DatasetSchema::Hotpot:
    case DatasetSchema::TwoWiki: {
      q.id = id_field(r, "_id", line);
      q.answer_kind = AnswerKind::Span;
      add_unique(q.gold_answers, {string_field(r, "answer", line)});
      add_unique(q.gold_answers, aliases(r, line));
      break;
    }
    case DatasetSchema::StrategyQA: {
      q.id = id_field(r, "qid", line);
      if (!r.contains("answer") || !r["answer"].is_boolean()) throw SchemaError("answer", line);
      q.answer_kind = AnswerKind::Boolean;
      q.gold_answers = {r["answer"].get<bool>() ? "yes" : "no"};
      break;
    }
    case DatasetSchema::Generic: {
      q.id = id_field(r, "id", line);
      if (r.contains("answers")) {
        const auto& a = r["answers"];
        if (!a.is_array() || a.empty()) throw SchemaError("answers", line);
        std::vector<std::string> golds;
        for (const auto& g : a) {
          if (!g.is_string()) throw SchemaError("answers", line);
          golds.push_back(g.get<std::string>());
        }
        q.answer_kind = AnswerKind::Span;
        add_unique(q.gold_answers, golds);
      } else if (r.contains("answer") && r["answer"].is_boolean()) {
        q.answer_kind = AnswerKind::Boolean;
        q.gold_answers = {r["answer"].get<bool>() ? "yes" : "no"};
      } else {
        throw SchemaError("answers", line);
      }
      break;
    }
  }
  try {
    validate(q);
  } catch (const InvalidInput& e) {
    throw ParseError(line, e.what());
  }
  return q;
}

std::vector<Question> load_dataset(const std::filesystem::path& path, DatasetSchema schema,
                                   std::string tag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open dataset " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string content = ss.str();
  if (tag.empty()) tag = path.stem().string();

  std::vector<Question> out;
  auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '[') {
    json doc;
    try {
      doc = json::parse(content);
    } catch (const json::parse_error& e) {
      throw ParseError(line_of(content, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    // Record positions are unknown inside a JSON array; report the record index.
    std::size_t index = 0;
    for (const auto& r : doc) out.push_back(map_record(r, schema, tag, ++index));
    return out;
  }

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    ++line_no;
    std::string line = text::trim(std::string_view(content).substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;
    json r = json::parse(line, nullptr, false);
    if (r.is_discarded()) throw ParseError(line_no, "invalid JSON");
    out.push_back(map_record(r, schema, tag, line_no));
  }
  return out;
}

std::vector<Question> sample(const std::vector<Question>& all, const Sampling& s) {
  if (!s.n || *s.n >= all.size()) return all;
  const std::size_t n = *s.n;
  if (!s.random) return {all.begin(), all.begin() + static_cast<long>(n)};

  std::vector<std::size_t> idx(all.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::uint64_t state = s.seed;
  auto next = [&state] {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  // Partial Fisher-Yates: the first n slots become the sample.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(next() % (all.size() - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<std::size_t> keep(idx.begin(), idx.begin() + static_cast<long>(n));
  std::sort(keep.begin(), keep.end());
  std::vector<Question> out;
  for (auto i : keep) out.push_back(all[i]);
  return out;
}

std::string dataset_digest(const std::vector<Question>& questions) {
  return providers::sha256_hex(
      json(questions).dump(-1, ' ', false, json::error_handler_t::replace));
}

}  // namespace msrag::eval
