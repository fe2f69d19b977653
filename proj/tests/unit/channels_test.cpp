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

#include <gtest/gtest.h>

#include "msrag/channels.hpp"
#include "msrag/error.hpp"
#include "msrag/providers/digest.hpp"
#include "msrag/text.hpp"
#include "support/helpers.hpp"

namespace msrag::channels {
namespace {

using testing::mock_context;
using testing::mock_stack;
using testing::span_question;

std::shared_ptr<providers::MockScript> script_from(const char* text) {
  return std::make_shared<providers::MockScript>(
      providers::MockScript::from_json(nlohmann::json::parse(text)));
}

TEST(WebFanout, OneListPerSubQuestionCappedAtK) {
  auto stack = mock_stack();
  auto ctx = mock_context(stack);
  SubQuestionSet subs{"q", {"a?", "b?", "c?"}, SubQuestionSource::Model};
  auto results = web_search_fanout(subs, ctx);
  ASSERT_EQ(results.size(), 3u);
  for (const auto& r : results) EXPECT_EQ(r.size(), 5u);
  SubQuestionSet single{"q", {"a?"}, SubQuestionSource::Fallback};
  EXPECT_EQ(web_search_fanout(single, ctx).size(), 1u);
}

TEST(WebFanout, FailedSearchLeavesEmptySlot) {
  auto stack = mock_stack(script_from(R"({"search_failures": [{"contains": "b?", "error": "quota"}]})"));
  for (bool parallel : {false, true}) {
    auto ctx = mock_context(stack);
    ctx.parallel = parallel;
    auto results = web_search_fanout({"q", {"a?", "b?", "c?"}, SubQuestionSource::Model}, ctx);
    EXPECT_EQ(results[0].size(), 5u);
    EXPECT_TRUE(results[1].empty());
    EXPECT_EQ(results[2].size(), 5u);
  }
}

TEST(WebFanout, ReplayMissPropagates) {
  class MissingSearch final : public providers::SearchProvider {
    std::vector<SearchResult> do_search(std::string_view, int) override { throw ReplayMiss("k"); }
  };
  auto stack = mock_stack();
  auto ctx = mock_context(stack);
  ctx.providers.search = std::make_shared<MissingSearch>();
  EXPECT_THROW(web_search_fanout({"q", {"a?"}, SubQuestionSource::Model}, ctx), ReplayMiss);
}

TEST(SummarizeWeb, EmptyResultsUseFallbackWithoutCalling) {
  auto stack = mock_stack();
  auto ctx = mock_context(stack);
  auto q = span_question("q", "Who?", {"x"});
  SubQuestionSet subs{"q", {"a?", "b?"}, SubQuestionSource::Model};
  auto s = summarize_web(q, subs, {{}, {}}, ctx);
  EXPECT_TRUE(s.evidence.is_fallback);
  EXPECT_EQ(s.evidence.text, kFallbackSentence);
  EXPECT_TRUE(s.evidence.provenance.empty());
  EXPECT_EQ(stack.chat->calls(), 0u);
}

TEST(SummarizeWeb, ProvenanceListsEveryUrlInRankOrder) {
  auto stack = mock_stack();
  auto ctx = mock_context(stack);
  auto q = span_question("q", "Who?", {"x"});
  SubQuestionSet subs{"q", {"a?", "b?", "c?"}, SubQuestionSource::Model};
  auto results = web_search_fanout(subs, ctx);
  auto s = summarize_web(q, subs, results, ctx);
  ASSERT_EQ(s.evidence.provenance.size(), 15u);
  EXPECT_EQ(s.evidence.provenance[0], results[0][0].url);
  EXPECT_EQ(s.evidence.provenance[14], results[2][4].url);
  EXPECT_FALSE(s.evidence.is_fallback);
  EXPECT_EQ(stack.chat->calls(providers::PromptKind::Summarize), 1u);
}

TEST(SummarizeWeb, LongSummaryIsTruncatedAtWordBoundary) {
  std::string long_summary;
  for (int i = 0; i < 400; ++i) long_summary += "word" + std::to_string(i) + " ";
  auto script = std::make_shared<providers::MockScript>();
  script->questions.push_back({"Who wrote it?", std::nullopt, std::nullopt, long_summary, {}});
  auto stack = mock_stack(script);
  auto ctx = mock_context(stack);
  auto q = span_question("q", "Who wrote it?", {"x"});
  SubQuestionSet subs{"q", {"a?"}, SubQuestionSource::Model};
  auto s = summarize_web(q, subs, web_search_fanout(subs, ctx), ctx);
  EXPECT_TRUE(s.evidence.truncated);
  EXPECT_EQ(text::split_whitespace(s.evidence.text).size(), 200u);
  EXPECT_EQ(text::split_whitespace(s.evidence.text).back(), "word199");
}

TEST(GptContext, KissAndTellExemplar) {
  const std::string question =
      "What government position was held by the woman who portrayed Corliss Archer in the film "
      "Kiss and Tell?";
  auto script = std::make_shared<providers::MockScript>();
  nlohmann::json reply{{"question", question},
                       {"content",
                        "Shirley Temple portrayed Corliss Archer. She was later appointed as a "
                        "United States Ambassador and served as Chief of Protocol."}};
  script->questions.push_back({question, std::nullopt, reply.dump(), std::nullopt, {}});
  auto stack = mock_stack(script, nullptr, true);
  auto ctx = mock_context(stack);
  auto g = gpt_context(span_question("k", question, {"Chief of Protocol"}), ctx);
  EXPECT_NE(g.evidence.text.find("appointed as a United States Ambassador"), std::string::npos);
  EXPECT_FALSE(g.evidence.is_fallback);
  EXPECT_EQ(g.evidence.provenance, (std::vector<std::string>{"gpt-3.5-turbo"}));
  const auto sent = stack.chat->recorded().at(0).messages.at(0).content;
  EXPECT_NE(sent.find("at least 70 words"), std::string::npos);
  EXPECT_NE(sent.find(question), std::string::npos);
  EXPECT_EQ(g.prompt_digest, providers::sha256_hex(sent));
}

TEST(GptContext, FallbackSentenceAndLenientParsing) {
  EXPECT_EQ(parse_context_reply(R"({"question":"q","content":"c"})"), "c");
  EXPECT_EQ(parse_context_reply("Sure! {\"content\": \"inner\"} done"), "inner");
  EXPECT_EQ(parse_context_reply("plain prose answer"), "plain prose answer");

  auto script = std::make_shared<providers::MockScript>();
  script->questions.push_back(
      {"Q1?", std::nullopt,
       R"({"question":"Q1?","content":"The relevant information could not be retrieved."})",
       std::nullopt, {}});
  std::string prose;
  for (int i = 0; i < 80; ++i) prose += "fact ";
  script->questions.push_back({"Q2?", std::nullopt, prose, std::nullopt, {}});
  auto stack = mock_stack(script);
  auto ctx = mock_context(stack);
  EXPECT_TRUE(gpt_context(span_question("1", "Q1?", {"x"}), ctx).evidence.is_fallback);
  auto g2 = gpt_context(span_question("2", "Q2?", {"x"}), ctx);
  EXPECT_FALSE(g2.evidence.is_fallback);
  EXPECT_EQ(text::split_whitespace(g2.evidence.text).size(), 80u);
}

TEST(GenerateAnswer, BooleanInstructionAndTrimmedReply) {
  auto script = std::make_shared<providers::MockScript>();
  script->questions.push_back({"Is it?", std::nullopt, std::nullopt, std::nullopt,
                               {{Channel::Web, "  Yes \n"}}});
  auto stack = mock_stack(script);
  auto ctx = mock_context(stack);
  auto q = testing::boolean_question("b", "Is it?", true);
  EvidenceBundle web{Channel::Web, "Web summary about: Is it?", {"u"}, false, false};
  auto prompt = reader_prompt(q, &web, ctx);
  EXPECT_NE(prompt.find("Answer yes or no."), std::string::npos);
  EXPECT_NE(prompt.find("Web summary about"), std::string::npos);
  auto a = generate_answer(q, &web, ctx);
  EXPECT_EQ(a.channel, Channel::Web);
  EXPECT_EQ(a.text, "Yes");
  EXPECT_EQ(a.prompt_digest, providers::sha256_hex(prompt));

  auto direct = generate_answer(span_question("s", "Who?", {"x"}), nullptr, ctx);
  EXPECT_EQ(direct.channel, Channel::NoRetrieval);
  EXPECT_EQ(direct.text, providers::default_answer(Channel::NoRetrieval, "Who?"));
  EXPECT_EQ(reader_prompt(span_question("s", "Who?", {"x"}), nullptr, ctx).find("yes or no"),
            std::string::npos);
}

TEST(RunChannels, ModesProduceCanonicalSubsets) {
  const std::vector<std::pair<Mode, std::vector<Channel>>> cases = {
      {Mode::Full, {Channel::Web, Channel::Gpt, Channel::NoRetrieval}},
      {Mode::NoGpt, {Channel::Web, Channel::NoRetrieval}},
      {Mode::NoWeb, {Channel::Gpt, Channel::NoRetrieval}},
      {Mode::GptOnly, {Channel::Gpt}},
      {Mode::WebOnly, {Channel::Web}},
      {Mode::DirectOnly, {Channel::NoRetrieval}}};
  auto q = span_question("q", "Who founded the company?", {"x"});
  for (const auto& [mode, expected] : cases) {
    for (bool parallel : {false, true}) {
      auto stack = mock_stack();
      auto ctx = mock_context(stack, mode);
      ctx.parallel = parallel;
      auto out = run_example_channels(q, ctx);
      std::vector<Channel> got;
      for (const auto& c : out.candidates) got.push_back(c.channel);
      EXPECT_EQ(got, expected) << to_string(mode);
      EXPECT_EQ(out.traces.size(), expected.size());
      const bool web = mode == Mode::Full || mode == Mode::NoGpt || mode == Mode::WebOnly;
      EXPECT_EQ(stack.search->calls(), web ? 3u : 0u) << to_string(mode);
      EXPECT_EQ(out.sub_questions.has_value(), web);
    }
  }
}

TEST(RunChannels, ParallelMatchesSequential) {
  auto q = span_question("q", "Which river flows through the capital?", {"x"});
  auto s1 = mock_stack();
  auto s2 = mock_stack();
  auto sequential = mock_context(s1);
  auto parallel = mock_context(s2);
  parallel.parallel = true;
  auto a = run_example_channels(q, sequential);
  auto b = run_example_channels(q, parallel);
  EXPECT_EQ(a.candidates, b.candidates);
  EXPECT_EQ(a.traces, b.traces);
  EXPECT_EQ(a.web->sub_results, b.web->sub_results);
}

TEST(RunChannels, FallbackEvidenceStillYieldsEveryCandidate) {
  // Every search fails and the context model declines: all channels still answer.
  auto script = script_from(R"({
    "search_failures": [{"contains": "", "error": "network"}],
    "rules": [{"contains": ["generate relevant information"],
               "response": "{\"content\": \"The relevant information could not be retrieved.\"}"}]
  })");
  auto stack = mock_stack(script);
  auto ctx = mock_context(stack);
  auto out = run_example_channels(span_question("q", "Who?", {"x"}), ctx);
  ASSERT_EQ(out.candidates.size(), 3u);
  EXPECT_TRUE(out.web->information_web.is_fallback);
  EXPECT_TRUE(out.traces[0].fallback_context);
  EXPECT_TRUE(out.traces[1].fallback_context);
  EXPECT_FALSE(out.traces[2].fallback_context);
}

TEST(RunChannels, HardFailureSurfacesAfterJoin) {
  auto script = script_from(R"({"rules": [{"contains": ["Answer concisely"], "response": "",
                                           "error": "refusal"}]})");
  auto stack = mock_stack(script);
  auto ctx = mock_context(stack);
  ctx.parallel = true;
  EXPECT_THROW(run_example_channels(span_question("q", "Who?", {"x"}), ctx), ProviderRefusal);
}

}  // namespace
}  // namespace msrag::channels
