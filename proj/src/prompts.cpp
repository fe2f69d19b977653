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

#include "msrag/prompts.hpp"

#include <fstream>
#include <sstream>

#include "msrag/error.hpp"
#include "msrag/providers/digest.hpp"

namespace msrag::prompts {

namespace {

std::string& slot(PromptSet& set, std::string_view name) {
  if (name == "segment") return set.segment;
  if (name == "gpt_retrieval") return set.gpt_retrieval;
  if (name == "summarize") return set.summarize;
  if (name == "reader_with_context") return set.reader_with_context;
  if (name == "reader_direct") return set.reader_direct;
  throw InvalidInput("unknown prompt template " + std::string(name));
}

}  // namespace

PromptSet PromptSet::embedded() {
  PromptSet set;
  for (const auto& [name, body] : detail::embedded()) slot(set, name) = std::string(body);
  return set;
}

PromptSet PromptSet::load(const std::filesystem::path& dir) {
  PromptSet set = embedded();
  for (const auto& [name, body] : detail::embedded()) {
    auto path = dir / (std::string(name) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) continue;
    std::ostringstream ss;
    ss << in.rdbuf();
    slot(set, name) = ss.str();
  }
  return set;
}

std::map<std::string, std::string> PromptSet::digests() const {
  return {{"segment", providers::sha256_hex(segment)},
          {"gpt_retrieval", providers::sha256_hex(gpt_retrieval)},
          {"summarize", providers::sha256_hex(summarize)},
          {"reader_with_context", providers::sha256_hex(reader_with_context)},
          {"reader_direct", providers::sha256_hex(reader_direct)}};
}

std::string render(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    char c = tmpl[i];
    if (c == '{') {
      if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
        out.push_back('{');
        ++i;
        continue;
      }
      auto close = tmpl.find('}', i + 1);
      if (close == std::string_view::npos) throw InvalidInput("unterminated placeholder in template");
      std::string name(tmpl.substr(i + 1, close - i - 1));
      auto it = vars.find(name);
      if (it == vars.end()) throw InvalidInput("unknown template placeholder {" + name + "}");
      out += it->second;
      i = close;
    } else if (c == '}') {
      if (i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
        out.push_back('}');
        ++i;
        continue;
      }
      throw InvalidInput("stray '}' in template");
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace msrag::prompts
