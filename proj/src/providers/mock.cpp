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

#include "msrag/providers/mock.hpp"

#include <cctype>
#include <fstream>

#include "msrag/error.hpp"
#include "msrag/eval/metrics.hpp"
#include "msrag/providers/digest.hpp"
#include "msrag/text.hpp"

namespace msrag::providers {

using nlohmann::json;

namespace {

bool contains(std::string_view hay, std::string_view needle) {
  return hay.find(needle) != std::string_view::npos;
}

std::string between(std::string_view s, std::string_view start, std::string_view end,
                    bool last_start = false) {
  auto b = last_start ? s.rfind(start) : s.find(start);
  if (b == std::string_view::npos) return {};
  b += start.size();
  auto e = s.find(end, b);
  if (e == std::string_view::npos) e = s.size();
  return std::string(s.substr(b, e - b));
}

std::string short_digest(std::string_view s) { return sha256_hex(s).substr(0, 8); }

std::string joined_prompt(const ChatRequest& req) {
  std::string out;
  for (const auto& m : req.messages) {
    if (!out.empty()) out += '\n';
    out += m.content;
  }
  return out;
}

[[noreturn]] void raise(const std::string& kind, const std::string& what) {
  if (kind == "quota") throw QuotaExceeded("mock quota exceeded: " + what);
  if (kind == "refusal") throw ProviderRefusal(400, "mock refusal: " + what);
  throw NetworkError("mock network failure: " + what);
}

std::string default_summary(std::string_view q) { return "Web summary about: " + std::string(q); }
std::string default_context(std::string_view q) {
  return "Generated context about: " + std::string(q);
}

// The text the pipeline will pass as context for a raw context reply.
std::string context_content(const std::string& raw) {
  json doc = json::parse(raw, nullptr, false);
  if (doc.is_object() && doc.contains("content") && doc["content"].is_string()) {
    return text::trim(doc["content"].get<std::string>());
  }
  return text::trim(raw);
}

std::string key_prefix(const std::string& s) { return s.substr(0, std::min<std::size_t>(48, s.size())); }

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::string_view to_string(PromptKind k) {
  switch (k) {
    case PromptKind::Segment: return "segment";
    case PromptKind::GptContext: return "gpt_context";
    case PromptKind::Summarize: return "summarize";
    case PromptKind::ReaderWithContext: return "reader_with_context";
    case PromptKind::ReaderDirect: return "reader_direct";
  }
  return "?";
}

PromptKind classify_prompt(std::string_view prompt) {
  if (contains(prompt, "generate relevant information to the best of your ability")) {
    return PromptKind::GptContext;
  }
  if (contains(prompt, "non-repetitive sub-questions")) return PromptKind::Segment;
  if (contains(prompt, "\nSearch results:\n")) return PromptKind::Summarize;
  if (contains(prompt, "\nInformation:\n")) return PromptKind::ReaderWithContext;
  return PromptKind::ReaderDirect;
}

std::string default_answer(Channel channel, std::string_view question) {
  std::string_view tag = channel == Channel::Web   ? "mock-web"
                         : channel == Channel::Gpt ? "mock-gpt"
                                                   : "mock-direct";
  return std::string(tag) + ":" + short_digest(text::trim(question));
}

// ---------------------------------------------------------------------------
// MockScript

MockScript MockScript::from_json(const json& j) {
  MockScript s;
  for (const auto& r : j.value("rules", json::array())) {
    ScriptRule rule;
    rule.contains = r.value("contains", std::vector<std::string>{});
    rule.response = r.value("response", std::string{});
    if (r.contains("error")) rule.error = r["error"].get<std::string>();
    s.rules.push_back(std::move(rule));
  }
  for (const auto& q : j.value("questions", json::array())) {
    ScriptedQuestion sq;
    sq.question = q.at("question").get<std::string>();
    if (q.contains("segmentation")) {
      const auto& seg = q["segmentation"];
      sq.segmentation = seg.is_string() ? seg.get<std::string>() : seg.dump();
    }
    if (q.contains("gpt_context")) {
      const auto& ctx = q["gpt_context"];
      sq.gpt_context = ctx.is_string() ? ctx.get<std::string>() : ctx.dump();
    }
    if (q.contains("web_summary")) sq.web_summary = q["web_summary"].get<std::string>();
    const json answers = q.value("answers", json::object());
    for (const auto& [channel, answer] : answers.items()) {
      sq.answers[channel_from_string(channel)] = answer.get<std::string>();
    }
    s.questions.push_back(std::move(sq));
  }
  for (const auto& f : j.value("search_failures", json::array())) {
    s.search_failures.push_back({f.at("contains").get<std::string>(), f.value("error", "network")});
  }
  if (j.contains("search_max_results")) s.search_max_results = j["search_max_results"].get<int>();
  const json vectors = j.value("vectors", json::object());
  for (const auto& [text, values] : vectors.items()) {
    s.vectors[text] = values.get<std::vector<double>>();
  }
  return s;
}

MockScript MockScript::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mock script " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("mock script " + path.string() + " is not valid JSON");
  return from_json(doc);
}

json MockScript::to_json() const {
  json j;
  j["rules"] = json::array();
  for (const auto& r : rules) {
    json rule{{"contains", r.contains}, {"response", r.response}};
    if (r.error) rule["error"] = *r.error;
    j["rules"].push_back(rule);
  }
  j["questions"] = json::array();
  for (const auto& q : questions) {
    json item{{"question", q.question}};
    if (q.segmentation) item["segmentation"] = *q.segmentation;
    if (q.gpt_context) item["gpt_context"] = *q.gpt_context;
    if (q.web_summary) item["web_summary"] = *q.web_summary;
    json answers = json::object();
    for (const auto& [c, a] : q.answers) answers[std::string(msrag::to_string(c))] = a;
    item["answers"] = answers;
    j["questions"].push_back(item);
  }
  j["search_failures"] = json::array();
  for (const auto& f : search_failures) {
    j["search_failures"].push_back({{"contains", f.contains}, {"error", f.error}});
  }
  if (search_max_results) j["search_max_results"] = *search_max_results;
  j["vectors"] = vectors;
  return j;
}

// ---------------------------------------------------------------------------
// MockChat

MockChat::MockChat(std::shared_ptr<const MockScript> script, bool record)
    : script_(script ? std::move(script) : std::make_shared<const MockScript>()), record_(record) {}

std::size_t MockChat::calls(PromptKind kind) const noexcept {
  return by_kind_[static_cast<std::size_t>(kind)].load();
}

std::vector<ChatRequest> MockChat::recorded() const {
  std::lock_guard lock(mu_);
  return recorded_;
}

const ScriptedQuestion* MockChat::find_question(const std::string& prompt) const {
  const ScriptedQuestion* best = nullptr;
  for (const auto& q : script_->questions) {
    if (!q.question.empty() && contains(prompt, q.question) &&
        (!best || q.question.size() > best->question.size())) {
      best = &q;
    }
  }
  return best;
}

ChatResponse MockChat::do_complete(const ChatRequest& req) {
  const std::string prompt = joined_prompt(req);
  const PromptKind kind = classify_prompt(prompt);
  ++calls_;
  ++by_kind_[static_cast<std::size_t>(kind)];
  if (record_) {
    std::lock_guard lock(mu_);
    recorded_.push_back(req);
  }
  for (const auto& rule : script_->rules) {
    bool all = std::all_of(rule.contains.begin(), rule.contains.end(),
                           [&](const std::string& s) { return contains(prompt, s); });
    if (!all) continue;
    if (rule.error) raise(*rule.error, "scripted rule");
    return {rule.response, FinishReason::Stop};
  }
  return {respond(kind, prompt), FinishReason::Stop};
}

std::string MockChat::respond(PromptKind kind, const std::string& prompt) const {
  const ScriptedQuestion* sq = find_question(prompt);
  switch (kind) {
    case PromptKind::Segment: {
      if (sq && sq->segmentation) return *sq->segmentation;
      std::string q = sq ? sq->question : text::trim(between(prompt, "Question: ", "\n"));
      json items = json::array();
      for (int i = 1; i <= 3; ++i) items.push_back(q + " (aspect " + std::to_string(i) + ")");
      return "Reasoning: the question needs three facts.\n" +
             items.dump(-1, ' ', false, json::error_handler_t::replace);
    }
    case PromptKind::GptContext: {
      if (sq && sq->gpt_context) return *sq->gpt_context;
      std::string q = sq ? sq->question
                         : text::trim(between(prompt, "separated by '-':\n--\n", "\n--\n"));
      return json{{"question", q}, {"content", default_context(q)}}.dump(
          -1, ' ', false, json::error_handler_t::replace);
    }
    case PromptKind::Summarize: {
      if (sq && sq->web_summary) return *sq->web_summary;
      std::string q = sq ? sq->question : text::trim(between(prompt, "Original question: ", "\n"));
      return default_summary(q);
    }
    case PromptKind::ReaderWithContext: {
      std::string q = sq ? sq->question : text::trim(between(prompt, "Question: ", "\n", true));
      std::string web_key = key_prefix(text::trim(
          sq && sq->web_summary ? *sq->web_summary : default_summary(q)));
      std::string gpt_key = key_prefix(
          sq && sq->gpt_context ? context_content(*sq->gpt_context) : default_context(q));
      std::optional<Channel> channel;
      if (!web_key.empty() && contains(prompt, web_key)) {
        channel = Channel::Web;
      } else if (!gpt_key.empty() && contains(prompt, gpt_key)) {
        channel = Channel::Gpt;
      }
      if (!channel) return "mock-context:" + short_digest(q);
      if (sq) {
        auto it = sq->answers.find(*channel);
        if (it != sq->answers.end()) return it->second;
      }
      return default_answer(*channel, q);
    }
    case PromptKind::ReaderDirect: {
      if (sq) {
        auto it = sq->answers.find(Channel::NoRetrieval);
        if (it != sq->answers.end()) return it->second;
        return default_answer(Channel::NoRetrieval, sq->question);
      }
      return default_answer(Channel::NoRetrieval,
                            text::trim(between(prompt, "Question: ", "\n", true)));
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// MockSearch

MockSearch::MockSearch(std::shared_ptr<const MockScript> script)
    : script_(script ? std::move(script) : std::make_shared<const MockScript>()) {}

std::vector<SearchResult> MockSearch::do_search(std::string_view query, int k) {
  ++calls_;
  for (const auto& f : script_->search_failures) {
    if (contains(query, f.contains)) raise(f.error, std::string(query));
  }
  int n = k;
  if (script_->search_max_results) n = std::min(n, *script_->search_max_results);
  const std::string qd = sha256_hex(query).substr(0, 12);
  std::vector<SearchResult> out;
  for (int rank = 1; rank <= n; ++rank) {
    SearchResult r;
    r.query = std::string(query);
    r.rank = rank;
    r.title = "Result " + std::to_string(rank) + " for: " + std::string(query);
    r.snippet = "Snippet " + short_digest(std::string(query) + "#" + std::to_string(rank)) +
                " about " + std::string(query);
    r.url = "https://search.mock/" + qd + "/" + std::to_string(rank);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embedders

BagOfWordsEmbedder::BagOfWordsEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw InvalidInput("embedding dimension must be positive");
}

std::vector<std::string> BagOfWordsEmbedder::tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::size_t BagOfWordsEmbedder::bucket(std::string_view token) const {
  return static_cast<std::size_t>(fnv1a(token) % dimension_);
}

EmbeddingVector BagOfWordsEmbedder::do_embed(std::string_view text) {
  ++calls_;
  EmbeddingVector v{std::vector<double>(dimension_, 0.0), model_id()};
  for (const auto& t : tokens(text)) v.values[bucket(t)] += 1.0;
  return v;
}

ExactMatchEmbedder::ExactMatchEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw InvalidInput("embedding dimension must be positive");
}

EmbeddingVector ExactMatchEmbedder::do_embed(std::string_view text) {
  ++calls_;
  EmbeddingVector v{std::vector<double>(dimension_, 0.0), model_id()};
  const std::string norm = eval::normalize_answer(text);
  if (norm.empty()) return v;
  std::uint64_t state = fnv1a(norm);
  for (auto& x : v.values) {
    // Uniform in [-1, 1) from the top 53 bits.
    x = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
  }
  return v;
}

ScriptedEmbedder::ScriptedEmbedder(std::map<std::string, std::vector<double>> table,
                                   std::shared_ptr<Embedder> fallback)
    : table_(std::move(table)), fallback_(std::move(fallback)) {
  if (fallback_) {
    dimension_ = fallback_->dimension();
  } else if (!table_.empty()) {
    dimension_ = table_.begin()->second.size();
  } else {
    throw InvalidInput("scripted embedder needs a table or a fallback");
  }
  for (const auto& [text, values] : table_) {
    if (values.size() != dimension_) throw DimensionMismatch(dimension_, values.size());
  }
}

EmbeddingVector ScriptedEmbedder::do_embed(std::string_view text) {
  ++calls_;
  auto it = table_.find(std::string(text));
  if (it != table_.end()) return {it->second, model_id()};
  if (!fallback_) throw InvalidInput("no scripted vector for \"" + std::string(text) + "\"");
  auto v = fallback_->embed(text);
  v.model_id = model_id();
  return v;
}

ChatResponse UnreachableChat::do_complete(const ChatRequest&) {
  ++attempts_;
  throw NetworkError("chat provider contacted during hermetic run");
}

std::vector<SearchResult> UnreachableSearch::do_search(std::string_view, int) {
  ++attempts_;
  throw NetworkError("search provider contacted during hermetic run");
}

EmbeddingVector UnreachableEmbedder::do_embed(std::string_view) {
  ++attempts_;
  throw NetworkError("embedding provider contacted during hermetic run");
}

}  // namespace msrag::providers
