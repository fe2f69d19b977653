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

// Deterministic providers for offline runs and tests. They ship with the
// library so that a checkout can run end to end without credentials.
//
// MockChat recognises which pipeline prompt it was sent (segmentation,
// context generation, summarization, reader with or without context) from
// fixed phrases in the bundled templates, then answers from a MockScript or
// from a deterministic default derived from the question text.

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msrag/core.hpp"
#include "msrag/providers/types.hpp"

namespace msrag::providers {

enum class PromptKind { Segment, GptContext, Summarize, ReaderWithContext, ReaderDirect };

std::string_view to_string(PromptKind k);
PromptKind classify_prompt(std::string_view prompt);

/// Scripted behaviour for one question, matched by its text appearing in a prompt.
struct ScriptedQuestion {
  std::string question;
  std::optional<std::string> segmentation;  // raw reply to the segmentation prompt
  std::optional<std::string> gpt_context;   // raw reply to the context prompt
  std::optional<std::string> web_summary;   // raw reply to the summarization prompt
  std::map<Channel, std::string> answers;   // reader replies per channel
};

/// First rule whose substrings all occur in the prompt wins over everything else.
struct ScriptRule {
  std::vector<std::string> contains;
  std::string response;
  std::optional<std::string> error;  // "network" | "quota" | "refusal"
};

struct SearchFailure {
  std::string contains;
  std::string error;  // "network" | "quota" | "refusal"
};

struct MockScript {
  std::vector<ScriptRule> rules;
  std::vector<ScriptedQuestion> questions;
  std::vector<SearchFailure> search_failures;
  std::optional<int> search_max_results;
  std::map<std::string, std::vector<double>> vectors;  // for ScriptedEmbedder

  static MockScript from_json(const nlohmann::json& j);
  static MockScript load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

/// Default reader reply for the no-retrieval channel, e.g. "mock-direct:1a2b3c4d".
std::string default_answer(Channel channel, std::string_view question);

class MockChat final : public ChatProvider {
 public:
  explicit MockChat(std::shared_ptr<const MockScript> script = nullptr, bool record = false);

  std::size_t calls() const noexcept { return calls_.load(); }
  std::size_t calls(PromptKind kind) const noexcept;
  std::vector<ChatRequest> recorded() const;

 private:
  ChatResponse do_complete(const ChatRequest& req) override;
  std::string respond(PromptKind kind, const std::string& prompt) const;
  const ScriptedQuestion* find_question(const std::string& prompt) const;

  std::shared_ptr<const MockScript> script_;
  bool record_;
  std::atomic<std::size_t> calls_{0};
  std::array<std::atomic<std::size_t>, 5> by_kind_{};
  mutable std::mutex mu_;
  std::vector<ChatRequest> recorded_;
};

/// Snippets are a deterministic function of (query, rank).
class MockSearch final : public SearchProvider {
 public:
  explicit MockSearch(std::shared_ptr<const MockScript> script = nullptr);

  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  std::vector<SearchResult> do_search(std::string_view query, int k) override;

  std::shared_ptr<const MockScript> script_;
  std::atomic<std::size_t> calls_{0};
};

/// Hashed token counts over lowercase alphanumeric runs; word order is ignored.
class BagOfWordsEmbedder final : public Embedder {
 public:
  explicit BagOfWordsEmbedder(std::size_t dimension = 4096);

  std::size_t dimension() const override { return dimension_; }
  std::string model_id() const override { return "mock-bow"; }
  std::size_t calls() const noexcept { return calls_.load(); }

  static std::vector<std::string> tokens(std::string_view text);
  std::size_t bucket(std::string_view token) const;

 private:
  EmbeddingVector do_embed(std::string_view text) override;

  std::size_t dimension_;
  std::atomic<std::size_t> calls_{0};
};

/// Pseudo-random vector seeded by the normalized answer string, so cosine
/// similarity is 1 exactly when normalized strings are equal.
class ExactMatchEmbedder final : public Embedder {
 public:
  explicit ExactMatchEmbedder(std::size_t dimension = 64);

  std::size_t dimension() const override { return dimension_; }
  std::string model_id() const override { return "mock-exact"; }
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  EmbeddingVector do_embed(std::string_view text) override;

  std::size_t dimension_;
  std::atomic<std::size_t> calls_{0};
};

/// Looks texts up in a fixed table, deferring to `fallback` for unknown text.
class ScriptedEmbedder final : public Embedder {
 public:
  ScriptedEmbedder(std::map<std::string, std::vector<double>> table,
                   std::shared_ptr<Embedder> fallback);

  std::size_t dimension() const override { return dimension_; }
  std::string model_id() const override { return "mock-scripted"; }
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  EmbeddingVector do_embed(std::string_view text) override;

  std::map<std::string, std::vector<double>> table_;
  std::shared_ptr<Embedder> fallback_;
  std::size_t dimension_;
  std::atomic<std::size_t> calls_{0};
};

// Instrumented stand-ins for network providers: every contact is counted and
// fails. Used behind a strict-replay cache to prove hermeticity.

class UnreachableChat final : public ChatProvider {
 public:
  std::size_t attempts() const noexcept { return attempts_.load(); }

 private:
  ChatResponse do_complete(const ChatRequest&) override;
  std::atomic<std::size_t> attempts_{0};
};

class UnreachableSearch final : public SearchProvider {
 public:
  std::size_t attempts() const noexcept { return attempts_.load(); }

 private:
  std::vector<SearchResult> do_search(std::string_view, int) override;
  std::atomic<std::size_t> attempts_{0};
};

class UnreachableEmbedder final : public Embedder {
 public:
  UnreachableEmbedder(std::size_t dimension, std::string model_id)
      : dimension_(dimension), model_id_(std::move(model_id)) {}

  std::size_t dimension() const override { return dimension_; }
  std::string model_id() const override { return model_id_; }
  std::size_t attempts() const noexcept { return attempts_.load(); }

 private:
  EmbeddingVector do_embed(std::string_view) override;
  std::size_t dimension_;
  std::string model_id_;
  std::atomic<std::size_t> attempts_{0};
};

}  // namespace msrag::providers
