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

#include "msrag/channels.hpp"

#include <future>

#include <nlohmann/json.hpp>

#include "msrag/decompose.hpp"
#include "msrag/error.hpp"
#include "msrag/log.hpp"
#include "msrag/providers/digest.hpp"
#include "msrag/text.hpp"

namespace msrag::channels {

using nlohmann::json;
using providers::sha256_hex;

namespace {

EvidenceBundle fallback_bundle(Channel channel, std::vector<std::string> provenance) {
  return EvidenceBundle{channel, std::string(kFallbackSentence), std::move(provenance), true,
                        false};
}

bool is_fallback_text(const std::string& s) {
  std::string t = text::trim(s);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
  return t == kFallbackSentence;
}

EvidenceBundle make_evidence(Channel channel, const std::string& reply,
                             std::vector<std::string> provenance, int max_words) {
  std::string content = text::trim(reply);
  if (content.empty() || is_fallback_text(content)) {
    return fallback_bundle(channel, std::move(provenance));
  }
  auto cut = text::truncate_words(content, max_words);
  return EvidenceBundle{channel, std::move(cut.text), std::move(provenance), false, cut.truncated};
}

std::string render_results(const SubQuestionSet& subs,
                           const std::vector<std::vector<SearchResult>>& results) {
  std::string out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const std::string idx = std::to_string(i + 1);
    out += "Sub-question " + idx + ": " + (i < subs.items.size() ? subs.items[i] : "") + "\n";
    if (results[i].empty()) out += "(no results)\n";
    for (const auto& r : results[i]) {
      out += "[" + idx + "." + std::to_string(r.rank) + "] " + r.title + "\n" + r.snippet + "\n";
    }
    if (i + 1 < results.size()) out += "\n";
  }
  return out;
}

}  // namespace

std::vector<std::vector<SearchResult>> web_search_fanout(const SubQuestionSet& subs,
                                                         const RunContext& ctx) {
  auto one = [&](const std::string& query) -> std::vector<SearchResult> {
    try {
      return ctx.providers.search->search(query, ctx.config.search_top_k);
    } catch (const ReplayMiss&) {
      throw;
    } catch (const ProviderError& e) {
      log::warn("search failed for \"" + query + "\": " + e.what());
      return {};
    }
  };

  std::vector<std::vector<SearchResult>> out(subs.items.size());
  if (ctx.parallel && subs.items.size() > 1) {
    std::vector<std::future<std::vector<SearchResult>>> pending;
    for (const auto& item : subs.items) pending.push_back(std::async(std::launch::async, one, item));
    for (std::size_t i = 0; i < pending.size(); ++i) out[i] = pending[i].get();
  } else {
    for (std::size_t i = 0; i < subs.items.size(); ++i) out[i] = one(subs.items[i]);
  }
  return out;
}

WebSummary summarize_web(const Question& q, const SubQuestionSet& subs,
                         const std::vector<std::vector<SearchResult>>& results,
                         const RunContext& ctx) {
  if (results.size() != subs.items.size()) {
    throw InvalidInput("search results do not match the sub-question count");
  }
  std::vector<std::string> urls;
  for (const auto& list : results) {
    for (const auto& r : list) urls.push_back(r.url);
  }
  if (urls.empty()) return {fallback_bundle(Channel::Web, {}), ""};

  std::string numbered;
  for (std::size_t i = 0; i < subs.items.size(); ++i) {
    numbered += std::to_string(i + 1) + ". " + subs.items[i];
    if (i + 1 < subs.items.size()) numbered += "\n";
  }
  std::string prompt = prompts::render(ctx.prompts.summarize,
                                       {{"question", q.text},
                                        {"sub_questions", numbered},
                                        {"results", render_results(subs, results)}});
  std::string digest = sha256_hex(prompt);
  auto reply = ctx.providers.chat->complete(
      make_chat_request(ctx, ctx.config.chat.model_id, std::move(prompt)));
  return {make_evidence(Channel::Web, reply.content, std::move(urls), ctx.config.max_context_words),
          std::move(digest)};
}

std::string parse_context_reply(const std::string& raw) {
  auto content_of = [](const json& doc) -> std::optional<std::string> {
    if (!doc.is_object()) return std::nullopt;
    auto it = doc.find("content");
    if (it == doc.end() || !it->is_string()) return std::string{};
    return it->get<std::string>();
  };
  const std::string clean = text::sanitize_utf8(raw);
  json doc = json::parse(clean, nullptr, false);
  if (!doc.is_discarded()) {
    if (auto c = content_of(doc)) return *c;
  }
  auto b = clean.find('{');
  auto e = clean.rfind('}');
  if (b != std::string::npos && e != std::string::npos && e > b) {
    json inner = json::parse(clean.substr(b, e - b + 1), nullptr, false);
    if (!inner.is_discarded()) {
      if (auto c = content_of(inner)) return *c;
    }
  }
  return clean;
}

GeneratedContext gpt_context(const Question& q, const RunContext& ctx) {
  std::string prompt = prompts::render(ctx.prompts.gpt_retrieval, {{"question", q.text}});
  std::string digest = sha256_hex(prompt);
  auto reply = ctx.providers.chat->complete(
      make_chat_request(ctx, ctx.config.chat.model_id, std::move(prompt)));
  return {make_evidence(Channel::Gpt, parse_context_reply(reply.content), {ctx.config.chat.model_id},
                        ctx.config.max_context_words),
          std::move(digest)};
}

std::string reader_prompt(const Question& q, const EvidenceBundle* evidence,
                          const RunContext& ctx) {
  std::string instruction = "Answer concisely.";
  if (q.answer_kind == AnswerKind::Boolean) instruction += " Answer yes or no.";
  if (evidence && evidence->channel != Channel::NoRetrieval) {
    return prompts::render(ctx.prompts.reader_with_context,
                           {{"context", evidence->text},
                            {"question", q.text},
                            {"instruction", instruction}});
  }
  return prompts::render(ctx.prompts.reader_direct,
                         {{"question", q.text}, {"instruction", instruction}});
}

CandidateAnswer generate_answer(const Question& q, const EvidenceBundle* evidence,
                                const RunContext& ctx) {
  Channel channel = evidence ? evidence->channel : Channel::NoRetrieval;
  std::string prompt = reader_prompt(q, evidence, ctx);
  std::string digest = sha256_hex(prompt);
  auto reply = ctx.providers.reader->complete(
      make_chat_request(ctx, ctx.config.reader.model_id, std::move(prompt)));
  return CandidateAnswer{channel, text::trim(reply.content), std::move(digest)};
}

ChannelsOutcome run_example_channels(const Question& q, const RunContext& ctx) {
  const auto active = active_channels(ctx.config.mode);
  auto is_active = [&](Channel c) {
    return std::find(active.begin(), active.end(), c) != active.end();
  };

  struct WebBranch {
    SubQuestionSet subs;
    WebChannelTrace trace;
    CandidateAnswer answer;
    ChannelTrace ct;
  };
  struct GptBranch {
    EvidenceBundle evidence;
    CandidateAnswer answer;
    ChannelTrace ct;
  };
  struct DirectBranch {
    CandidateAnswer answer;
    ChannelTrace ct;
  };

  auto run_web = [&]() {
    WebBranch b;
    b.subs = decompose::segment_question(q, ctx);
    b.trace.sub_results = web_search_fanout(b.subs, ctx);
    auto summary = summarize_web(q, b.subs, b.trace.sub_results, ctx);
    b.trace.summary_prompt_digest = summary.prompt_digest;
    b.trace.information_web = std::move(summary.evidence);
    b.answer = generate_answer(q, &b.trace.information_web, ctx);
    b.ct = ChannelTrace{Channel::Web,
                        sha256_hex(b.trace.information_web.text),
                        b.trace.summary_prompt_digest,
                        b.answer.prompt_digest,
                        b.trace.information_web.is_fallback,
                        b.trace.information_web.truncated};
    return b;
  };
  auto run_gpt = [&]() {
    GptBranch b;
    auto generated = gpt_context(q, ctx);
    b.evidence = std::move(generated.evidence);
    b.answer = generate_answer(q, &b.evidence, ctx);
    b.ct = ChannelTrace{Channel::Gpt,        sha256_hex(b.evidence.text),
                        generated.prompt_digest, b.answer.prompt_digest,
                        b.evidence.is_fallback, b.evidence.truncated};
    return b;
  };
  auto run_direct = [&]() {
    DirectBranch b;
    b.answer = generate_answer(q, nullptr, ctx);
    b.ct = ChannelTrace{Channel::NoRetrieval, "", "", b.answer.prompt_digest, false, false};
    return b;
  };

  std::optional<WebBranch> web;
  std::optional<GptBranch> gpt;
  std::optional<DirectBranch> direct;
  if (ctx.parallel && active.size() > 1) {
    std::future<WebBranch> fw;
    std::future<GptBranch> fg;
    std::future<DirectBranch> fd;
    if (is_active(Channel::Web)) fw = std::async(std::launch::async, run_web);
    if (is_active(Channel::Gpt)) fg = std::async(std::launch::async, run_gpt);
    if (is_active(Channel::NoRetrieval)) fd = std::async(std::launch::async, run_direct);
    // Join every branch before surfacing the first failure.
    std::exception_ptr failure;
    auto take = [&](auto& fut, auto& slot) {
      if (!fut.valid()) return;
      try {
        slot = fut.get();
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
    };
    take(fw, web);
    take(fg, gpt);
    take(fd, direct);
    if (failure) std::rethrow_exception(failure);
  } else {
    if (is_active(Channel::Web)) web = run_web();
    if (is_active(Channel::Gpt)) gpt = run_gpt();
    if (is_active(Channel::NoRetrieval)) direct = run_direct();
  }

  ChannelsOutcome out;
  if (web) {
    out.sub_questions = web->subs;
    out.web = web->trace;
    out.candidates.push_back(web->answer);
    out.traces.push_back(web->ct);
  }
  if (gpt) {
    out.information_gpt = gpt->evidence;
    out.candidates.push_back(gpt->answer);
    out.traces.push_back(gpt->ct);
  }
  if (direct) {
    out.candidates.push_back(direct->answer);
    out.traces.push_back(direct->ct);
  }
  return out;
}

}  // namespace msrag::channels
