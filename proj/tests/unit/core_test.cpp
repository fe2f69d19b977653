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

#include <random>

#include <gtest/gtest.h>

#include "msrag/core.hpp"
#include "msrag/error.hpp"
#include "support/helpers.hpp"

namespace msrag {
namespace {

using testing::span_question;

TEST(Modes, ActiveChannelsFollowAblationTable) {
  using V = std::vector<Channel>;
  EXPECT_EQ(active_channels(Mode::Full), (V{Channel::Web, Channel::Gpt, Channel::NoRetrieval}));
  EXPECT_EQ(active_channels(Mode::NoGpt), (V{Channel::Web, Channel::NoRetrieval}));
  EXPECT_EQ(active_channels(Mode::NoWeb), (V{Channel::Gpt, Channel::NoRetrieval}));
  EXPECT_EQ(active_channels(Mode::GptOnly), (V{Channel::Gpt}));
  EXPECT_EQ(active_channels(Mode::WebOnly), (V{Channel::Web}));
  EXPECT_EQ(active_channels(Mode::DirectOnly), (V{Channel::NoRetrieval}));
  EXPECT_TRUE(is_single_channel(Mode::GptOnly));
  EXPECT_FALSE(is_single_channel(Mode::NoWeb));
}

TEST(Modes, NamesRoundTripAndUnknownListsAllowed) {
  for (const auto& name : mode_names()) EXPECT_EQ(to_string(mode_from_string(name)), name);
  try {
    mode_from_string("no-rag");
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("direct-only"), std::string::npos);
  }
  EXPECT_EQ(table_label(Mode::Full), "MSRAG");
  EXPECT_EQ(table_label(Mode::NoGpt), "w/o GPT");
  EXPECT_EQ(table_label(Mode::NoWeb), "w/o Web");
  EXPECT_EQ(table_label(Mode::DirectOnly), "No-RAG");
}

TEST(QuestionValidation, RejectsMissingPieces) {
  EXPECT_NO_THROW(validate(span_question("a", "q?", {"x"})));
  EXPECT_THROW(validate(span_question("a", "   ", {"x"})), InvalidInput);
  EXPECT_THROW(validate(span_question("a", "q?", {})), InvalidInput);
  EXPECT_THROW(validate(span_question("a", "q?", {""})), InvalidInput);
  auto b = testing::boolean_question("b", "q?", true);
  EXPECT_NO_THROW(validate(b));
  EXPECT_EQ(boolean_gold(b), true);
  b.gold_answers = {"maybe"};
  EXPECT_THROW(validate(b), InvalidInput);
}

TEST(ConfigValidation, RejectsOutOfRangeCounts) {
  PipelineConfig c;
  EXPECT_NO_THROW(validate(c));
  c.runs = 0;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.sub_question_count = 0;
  EXPECT_THROW(validate(c), ConfigError);
}

std::string random_text(std::mt19937_64& rng) {
  static const std::string alphabet = "abc xyz\"\\\n\t{}";
  std::string s(rng() % 12, ' ');
  for (auto& c : s) c = alphabet[rng() % alphabet.size()];
  return s;
}

// Serialising then parsing any value gives back an equal value.
TEST(JsonRoundTrip, RandomisedDomainValues) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Question q = span_question(random_text(rng), random_text(rng), {random_text(rng)});
    q.answer_kind = rng() % 2 ? AnswerKind::Span : AnswerKind::Boolean;
    EXPECT_EQ(nlohmann::json(q).get<Question>(), q);

    SubQuestionSet s{random_text(rng), {random_text(rng), random_text(rng)},
                     rng() % 2 ? SubQuestionSource::Model : SubQuestionSource::Fallback};
    EXPECT_EQ(nlohmann::json(s).get<SubQuestionSet>(), s);

    EvidenceBundle e{Channel::Web, random_text(rng), {random_text(rng)}, rng() % 2 == 0,
                     rng() % 2 == 0};
    EXPECT_EQ(nlohmann::json(e).get<EvidenceBundle>(), e);

    SelectionResult r;
    r.similarities = {{Channel::Web, 0.25 * (rng() % 5)}, {Channel::Gpt, -0.5}};
    r.selected_channel = Channel::Gpt;
    r.selected_text = random_text(rng);
    r.tie_broken = rng() % 2;
    r.degenerate_flags = {Channel::NoRetrieval};
    EXPECT_EQ(nlohmann::json(r).get<SelectionResult>(), r);
  }
  PipelineConfig c;
  c.mode = Mode::NoWeb;
  c.random_seed = 42;
  c.chat = {"http://x", "m"};
  EXPECT_EQ(nlohmann::json(c).get<PipelineConfig>(), c);
}

}  // namespace
}  // namespace msrag
