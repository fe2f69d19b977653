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

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "msrag/context.hpp"
#include "msrag/core.hpp"
#include "msrag/providers/mock.hpp"

namespace msrag::testing {

namespace fs = std::filesystem;

/// A fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "msrag-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& p) const { return path_ / p; }

 private:
  fs::path path_;
};

inline fs::path fixtures_dir() { return MSRAG_FIXTURES_DIR; }

inline Question span_question(std::string id, std::string text, std::vector<std::string> golds) {
  Question q;
  q.id = std::move(id);
  q.text = std::move(text);
  q.gold_answers = std::move(golds);
  q.answer_kind = AnswerKind::Span;
  q.dataset_tag = "test";
  return q;
}

inline Question boolean_question(std::string id, std::string text, bool gold) {
  Question q = span_question(std::move(id), std::move(text), {gold ? "yes" : "no"});
  q.answer_kind = AnswerKind::Boolean;
  return q;
}

inline PipelineConfig mock_config(Mode mode = Mode::Full) {
  PipelineConfig c;
  c.mode = mode;
  c.chat.model_id = "gpt-3.5-turbo";
  c.reader.model_id = "llama-2-7b-chat";
  c.search.model_id = "mock-search";
  c.embed.model_id = "mock-bow";
  return c;
}

/// Mock providers with handles kept for counter assertions.
struct MockStack {
  std::shared_ptr<providers::MockChat> chat;
  std::shared_ptr<providers::MockSearch> search;
  std::shared_ptr<providers::Embedder> embedder;

  Providers providers() const { return Providers{chat, chat, search, embedder}; }
};

inline MockStack mock_stack(std::shared_ptr<const providers::MockScript> script = nullptr,
                            std::shared_ptr<providers::Embedder> embedder = nullptr,
                            bool record = false) {
  MockStack s;
  s.chat = std::make_shared<providers::MockChat>(script, record);
  s.search = std::make_shared<providers::MockSearch>(script);
  s.embedder = embedder ? embedder : std::make_shared<providers::BagOfWordsEmbedder>();
  return s;
}

inline RunContext mock_context(const MockStack& stack, Mode mode = Mode::Full) {
  RunContext ctx;
  ctx.config = mock_config(mode);
  ctx.providers = stack.providers();
  return ctx;
}

}  // namespace msrag::testing
