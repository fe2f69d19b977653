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

#include "msrag/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "msrag/error.hpp"

namespace msrag::select {

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DimensionMismatch(u.size(), v.size());
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, -1.0, 1.0);
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  return cosine(std::span<const double>(u.values), std::span<const double>(v.values));
}

EmbeddedCandidate embed_candidate(const CandidateAnswer& c, providers::Embedder& embedder) {
  auto v = embedder.embed(c.text);
  bool zero = v.is_zero();
  return EmbeddedCandidate{c.channel, std::move(v), zero};
}

namespace {

// Picks the maximum in canonical channel order so ties resolve the same way
// regardless of input order.
SelectionResult finish(std::span<const EmbeddedCandidate> candidates,
                       std::span<const std::string> texts, std::vector<double> scores) {
  if (candidates.empty()) throw InvalidInput("selection needs at least one candidate");
  if (texts.size() != candidates.size()) throw InvalidInput("candidate/text count mismatch");

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].channel < candidates[b].channel;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (candidates[order[i]].channel == candidates[order[i - 1]].channel) {
      throw InvalidInput("duplicate candidate channel");
    }
  }

  SelectionResult out;
  std::size_t best = order.front();
  int at_max = 0;
  for (std::size_t idx : order) {
    const auto& c = candidates[idx];
    out.similarities[c.channel] = scores[idx];
    if (c.zero_norm) out.degenerate_flags.insert(c.channel);
    if (scores[idx] > scores[best]) best = idx;
  }
  for (std::size_t idx : order) {
    if (scores[idx] == scores[best]) ++at_max;
  }
  out.selected_channel = candidates[best].channel;
  out.selected_text = texts[best];
  out.tie_broken = at_max >= 2;
  return out;
}

}  // namespace

SelectionResult select_by_reference(std::span<const EmbeddedCandidate> candidates,
                                    std::span<const std::string> texts,
                                    std::span<const EmbeddingVector> references) {
  if (references.empty()) throw InvalidInput("oracle selection needs at least one reference");
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) {
    double best = 0.0;
    bool first = true;
    for (const auto& ref : references) {
      double s = c.zero_norm ? 0.0 : cosine(c.vector, ref);
      if (first || s > best) best = s;
      first = false;
    }
    scores.push_back(best);
  }
  return finish(candidates, texts, std::move(scores));
}

SelectionResult select_by_consensus(std::span<const EmbeddedCandidate> candidates,
                                    std::span<const std::string> texts) {
  std::vector<double> scores(candidates.size(), 0.0);
  if (candidates.size() > 1) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (candidates[i].zero_norm) continue;
      double sum = 0.0;
      for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (j != i) sum += cosine(candidates[i].vector, candidates[j].vector);
      }
      scores[i] = sum / static_cast<double>(candidates.size() - 1);
    }
  }
  return finish(candidates, texts, std::move(scores));
}

namespace {

std::pair<std::vector<EmbeddedCandidate>, std::vector<std::string>> embed_all(
    std::span<const CandidateAnswer> candidates, providers::Embedder& embedder) {
  std::vector<EmbeddedCandidate> embedded;
  std::vector<std::string> texts;
  for (const auto& c : candidates) {
    embedded.push_back(embed_candidate(c, embedder));
    texts.push_back(c.text);
  }
  return {std::move(embedded), std::move(texts)};
}

}  // namespace

SelectionResult select_answer(std::span<const CandidateAnswer> candidates,
                              std::span<const std::string> reference,
                              providers::Embedder& embedder) {
  if (candidates.empty()) throw InvalidInput("selection needs at least one candidate");
  if (reference.empty()) throw InvalidInput("oracle selection needs a gold reference");
  auto [embedded, texts] = embed_all(candidates, embedder);
  std::vector<EmbeddingVector> refs;
  for (const auto& g : reference) refs.push_back(embedder.embed(g));
  return select_by_reference(embedded, texts, refs);
}

SelectionResult select_consensus(std::span<const CandidateAnswer> candidates,
                                 providers::Embedder& embedder) {
  if (candidates.empty()) throw InvalidInput("selection needs at least one candidate");
  auto [embedded, texts] = embed_all(candidates, embedder);
  return select_by_consensus(embedded, texts);
}

SelectionResult pass_through(const CandidateAnswer& only) {
  SelectionResult r;
  r.selected_channel = only.channel;
  r.selected_text = only.text;
  return r;
}

}  // namespace msrag::select
