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

#include "msrag/error.hpp"
#include "msrag/prompts.hpp"
#include "msrag/providers/mock.hpp"
#include "msrag/select.hpp"

namespace msrag::providers {
namespace {

ChatRequest prompt(std::string text) {
  ChatRequest r;
  r.model_id = "m";
  r.messages = {{Role::User, std::move(text)}};
  return r;
}

TEST(ClassifyPrompt, RecognisesEveryTemplate) {
  auto p = prompts::PromptSet::embedded();
  using prompts::render;
  EXPECT_EQ(classify_prompt(render(p.gpt_retrieval, {{"question", "q"}})), PromptKind::GptContext);
  EXPECT_EQ(classify_prompt(render(p.segment, {{"question", "q"}, {"n", "3"}})),
            PromptKind::Segment);
  EXPECT_EQ(classify_prompt(render(p.summarize,
                                   {{"question", "q"}, {"sub_questions", "s"}, {"results", "r"}})),
            PromptKind::Summarize);
  EXPECT_EQ(classify_prompt(render(p.reader_with_context,
                                   {{"context", "c"}, {"question", "q"}, {"instruction", "i"}})),
            PromptKind::ReaderWithContext);
  EXPECT_EQ(classify_prompt(render(p.reader_direct, {{"question", "q"}, {"instruction", "i"}})),
            PromptKind::ReaderDirect);
}

TEST(MockChatTest, DefaultsAreDeterministic) {
  MockChat a, b;
  auto r1 = a.complete(prompt("Question: who?\nAnswer concisely."));
  auto r2 = b.complete(prompt("Question: who?\nAnswer concisely."));
  EXPECT_EQ(r1, r2);
  EXPECT_EQ(r1.content, default_answer(Channel::NoRetrieval, "who?"));
  EXPECT_EQ(r1.content.rfind("mock-direct:", 0), 0u);
  EXPECT_EQ(a.calls(), 1u);
  EXPECT_EQ(a.calls(PromptKind::ReaderDirect), 1u);
}

TEST(MockChatTest, RulesWinAndCanFail) {
  auto script = std::make_shared<MockScript>(MockScript::from_json(nlohmann::json::parse(R"({
    "rules": [{"contains": ["alpha", "beta"], "response": "both"},
              {"contains": ["boom"], "response": "", "error": "quota"}]
  })")));
  MockChat chat(script);
  EXPECT_EQ(chat.complete(prompt("alpha and beta")).content, "both");
  EXPECT_NE(chat.complete(prompt("alpha only")).content, "both");
  EXPECT_THROW(chat.complete(prompt("boom")), QuotaExceeded);
}

TEST(MockChatTest, RecordsRequestsWhenAsked) {
  MockChat chat(nullptr, true);
  chat.complete(prompt("one"));
  chat.complete(prompt("two"));
  ASSERT_EQ(chat.recorded().size(), 2u);
  EXPECT_EQ(chat.recorded()[1].messages[0].content, "two");
}

TEST(MockScriptTest, JsonRoundTrip) {
  auto j = nlohmann::json::parse(R"({
    "questions": [{"question": "Q?", "segmentation": "[\"a\"]",
                   "answers": {"web": "w", "gpt": "g", "no_retrieval": "d"}}],
    "search_failures": [{"contains": "bad", "error": "network"}],
    "search_max_results": 2,
    "vectors": {"x": [1, 0]}
  })");
  auto s = MockScript::from_json(j);
  EXPECT_EQ(MockScript::from_json(s.to_json()).to_json(), s.to_json());
  EXPECT_EQ(s.questions.at(0).answers.at(Channel::Gpt), "g");
}

TEST(MockSearchTest, SnippetsDependOnQueryAndRank) {
  auto script = std::make_shared<MockScript>(MockScript::from_json(nlohmann::json::parse(
      R"({"search_failures": [{"contains": "bad", "error": "network"}], "search_max_results": 2})")));
  MockSearch search(script);
  auto a = search.search("who is x", 5);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a, search.search("who is x", 5));
  EXPECT_NE(a[0].snippet, a[1].snippet);
  EXPECT_NE(a[0].snippet, search.search("who is y", 5)[0].snippet);
  EXPECT_THROW(search.search("bad query", 5), NetworkError);
  EXPECT_EQ(search.calls(), 4u);
}

TEST(MockEmbedders, BagOfWordsCountsTokens) {
  BagOfWordsEmbedder e(4096);
  EXPECT_EQ(BagOfWordsEmbedder::tokens("The Nile-River, 2x!"),
            (std::vector<std::string>{"the", "nile", "river", "2x"}));
  auto v = e.embed("a a b");
  double total = 0;
  for (double x : v.values) total += x;
  EXPECT_EQ(total, 3.0);
  EXPECT_EQ(v.values[e.bucket("a")], 2.0);
  EXPECT_TRUE(e.embed("").is_zero());
}

TEST(MockEmbedders, ExactMatchIsOneOnlyForEqualNormalisedText) {
  ExactMatchEmbedder e;
  EXPECT_DOUBLE_EQ(select::cosine(e.embed("The Paris!"), e.embed("paris")), 1.0);
  EXPECT_LT(select::cosine(e.embed("Paris"), e.embed("Lyon")), 0.9);
}

TEST(MockEmbedders, ScriptedFallsBackForUnknownText) {
  ScriptedEmbedder e({{"x", {1.0, 0.0}}, {"y", {0.0, 1.0}}}, nullptr);
  EXPECT_EQ(e.embed("x").values, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(e.dimension(), 2u);
  EXPECT_THROW(e.embed("unknown"), InvalidInput);
}

TEST(Unreachable, CountsEveryAttempt) {
  UnreachableChat chat;
  UnreachableSearch search;
  UnreachableEmbedder embed(8, "m");
  EXPECT_THROW(chat.complete(prompt("x")), NetworkError);
  EXPECT_THROW(search.search("x", 1), NetworkError);
  EXPECT_THROW(embed.embed("x"), NetworkError);
  EXPECT_EQ(chat.attempts() + search.attempts() + embed.attempts(), 3u);
}

}  // namespace
}  // namespace msrag::providers
