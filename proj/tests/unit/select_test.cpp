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

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "msrag/error.hpp"
#include "msrag/providers/mock.hpp"
#include "msrag/select.hpp"

namespace msrag::select {
namespace {

EmbeddedCandidate cand(Channel c, std::vector<double> v) {
  bool zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  return {c, {std::move(v), "t"}, zero};
}

/// Candidates whose reference similarities are exactly the given values.
SelectionResult by_similarity(double web, double gpt, double direct) {
  auto unit = [](double s) { return std::vector<double>{s, std::sqrt(1.0 - s * s)}; };
  std::vector<EmbeddedCandidate> cs{cand(Channel::Web, unit(web)), cand(Channel::Gpt, unit(gpt)),
                                    cand(Channel::NoRetrieval, unit(direct))};
  std::vector<std::string> texts{"w", "g", "d"};
  std::vector<EmbeddingVector> refs{{{1.0, 0.0}, "t"}};
  return select_by_reference(cs, texts, refs);
}

TEST(Cosine, WorkedValues) {
  std::vector<double> a{1, 2, 2}, b{2, 1, 2};
  EXPECT_NEAR(cosine(a, b), 8.0 / 9.0, 1e-12);
  EXPECT_NEAR(cosine(a, a), 1.0, 1e-12);
  EXPECT_EQ(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0);
  EXPECT_EQ(cosine(std::vector<double>{0, 0}, std::vector<double>{0, 1}), 0.0);
  EXPECT_THROW(cosine(std::vector<double>{1}, std::vector<double>{1, 2}), DimensionMismatch);
}

TEST(Cosine, StaysWithinBounds) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> u(1 + rng() % 16), v(u.size());
    for (auto& x : u) x = d(rng);
    for (auto& x : v) x = d(rng);
    const double c = cosine(u, v);
    EXPECT_GE(c, -1.0);
    EXPECT_LE(c, 1.0);
    std::vector<double> w = u;
    for (auto& x : w) x *= 3.5;
    EXPECT_LE(cosine(u, w), 1.0);
  }
}

TEST(SelectByReference, ArgmaxAndTies) {
  auto r = by_similarity(0.2, 0.9, 0.5);
  EXPECT_EQ(r.selected_channel, Channel::Gpt);
  EXPECT_EQ(r.selected_text, "g");
  EXPECT_FALSE(r.tie_broken);
  EXPECT_NEAR(r.similarities.at(Channel::Web), 0.2, 1e-12);

  r = by_similarity(0.7, 0.7, 0.1);
  EXPECT_EQ(r.selected_channel, Channel::Web);
  EXPECT_TRUE(r.tie_broken);

  r = by_similarity(0.1, 0.6, 0.6);
  EXPECT_EQ(r.selected_channel, Channel::Gpt);
  EXPECT_TRUE(r.tie_broken);
}

TEST(SelectByReference, MaxOverAliases) {
  std::vector<EmbeddedCandidate> cs{cand(Channel::Web, {1, 0}), cand(Channel::Gpt, {0, 1})};
  std::vector<std::string> texts{"w", "g"};
  std::vector<EmbeddingVector> refs{{{1, 1}, "t"}, {{0, 1}, "t"}};
  auto r = select_by_reference(cs, texts, refs);
  EXPECT_EQ(r.selected_channel, Channel::Gpt);
  EXPECT_NEAR(r.similarities.at(Channel::Gpt), 1.0, 1e-12);
  EXPECT_NEAR(r.similarities.at(Channel::Web), std::sqrt(0.5), 1e-12);
}

TEST(SelectAnswer, BagOfWordsWorkedExample) {
  providers::BagOfWordsEmbedder e;
  std::vector<CandidateAnswer> cs{{Channel::Web, "Shirley Temple", "d1"},
                                  {Channel::Gpt, "the actress", "d2"},
                                  {Channel::NoRetrieval, "", "d3"}};
  std::vector<std::string> gold{"Shirley Temple"};
  auto r = select_answer(cs, gold, e);
  EXPECT_EQ(r.selected_channel, Channel::Web);
  EXPECT_NEAR(r.similarities.at(Channel::Web), 1.0, 1e-12);
  EXPECT_EQ(r.similarities.at(Channel::Gpt), 0.0);
  EXPECT_EQ(r.similarities.at(Channel::NoRetrieval), 0.0);
  EXPECT_EQ(r.degenerate_flags, (std::set<Channel>{Channel::NoRetrieval}));
  EXPECT_EQ(e.calls(), 3u);  // the blank candidate is never sent
}

TEST(SelectAnswer, SingleCandidateRecordsSimilarity) {
  providers::BagOfWordsEmbedder e;
  std::vector<CandidateAnswer> cs{{Channel::Gpt, "Paris France", "d"}};
  std::vector<std::string> gold{"Paris"};
  auto r = select_answer(cs, gold, e);
  EXPECT_EQ(r.selected_channel, Channel::Gpt);
  EXPECT_NEAR(r.similarities.at(Channel::Gpt), std::sqrt(0.5), 1e-12);
  EXPECT_FALSE(r.tie_broken);

  auto p = pass_through(cs[0]);
  EXPECT_EQ(p.selected_text, "Paris France");
  EXPECT_TRUE(p.similarities.empty());
}

TEST(SelectAnswer, RejectsDuplicateChannels) {
  providers::BagOfWordsEmbedder e;
  std::vector<CandidateAnswer> cs{{Channel::Gpt, "a", ""}, {Channel::Gpt, "b", ""}};
  std::vector<std::string> gold{"a"};
  EXPECT_THROW(select_answer(cs, gold, e), InvalidInput);
}

TEST(SelectConsensus, PicksTheMostAgreedAnswer) {
  providers::BagOfWordsEmbedder e;
  std::vector<CandidateAnswer> cs{{Channel::Web, "Greenwich Village", ""},
                                  {Channel::Gpt, "Greenwich Village New York", ""},
                                  {Channel::NoRetrieval, "Brooklyn", ""}};
  auto r = select_consensus(cs, e);
  // Web: (cos(W,G) + 0) / 2, Gpt: (cos(W,G) + 0) / 2 -> tie, Web wins.
  EXPECT_EQ(r.selected_channel, Channel::Web);
  EXPECT_TRUE(r.tie_broken);
  EXPECT_NEAR(r.similarities.at(Channel::Web), std::sqrt(0.5) / 2, 1e-12);
  EXPECT_EQ(r.similarities.at(Channel::NoRetrieval), 0.0);
}

// Positive rescaling and input order never change the choice.
TEST(SelectionProperties, ScaleAndPermutationInvariance) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  const std::vector<std::string> texts{"w", "g", "d"};
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t dim = 2 + rng() % 30;
    auto random_vec = [&] {
      std::vector<double> v(dim);
      for (auto& x : v) x = n(rng);
      return v;
    };
    std::vector<EmbeddedCandidate> cs{cand(Channel::Web, random_vec()),
                                      cand(Channel::Gpt, random_vec()),
                                      cand(Channel::NoRetrieval, random_vec())};
    std::vector<EmbeddingVector> refs{{random_vec(), "t"}};
    auto base = select_by_reference(cs, texts, refs);
    auto base_consensus = select_by_consensus(cs, texts);

    auto scaled = cs;
    const std::size_t which = rng() % 3;
    const double a = scale(rng);
    for (auto& x : scaled[which].vector.values) x *= a;
    EXPECT_EQ(select_by_reference(scaled, texts, refs).selected_channel, base.selected_channel);

    std::vector<std::size_t> order{0, 1, 2};
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<EmbeddedCandidate> permuted;
    std::vector<std::string> permuted_texts;
    for (auto i : order) {
      permuted.push_back(cs[i]);
      permuted_texts.push_back(texts[i]);
    }
    auto p = select_by_reference(permuted, permuted_texts, refs);
    EXPECT_EQ(p.selected_channel, base.selected_channel);
    EXPECT_EQ(p.selected_text, base.selected_text);
    EXPECT_EQ(p.similarities, base.similarities);
    EXPECT_EQ(select_by_consensus(permuted, permuted_texts).selected_channel,
              base_consensus.selected_channel);
  }
}

}  // namespace
}  // namespace msrag::select
