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

// Answer selection by embedding cosine similarity.
//
// The oracle selector scores each candidate by its best cosine similarity to
// any gold alias and keeps the maximum. It needs gold answers and is only
// meaningful during evaluation. The consensus selector needs no reference:
// it keeps the candidate with the highest mean similarity to the other
// candidates.
//
// Exact ties go to the earliest channel in canonical order (Web, Gpt,
// NoRetrieval). A zero-norm embedding scores 0 and is flagged degenerate.

#include <span>
#include <string>
#include <vector>

#include "msrag/core.hpp"
#include "msrag/providers/types.hpp"

namespace msrag::select {

using providers::EmbeddingVector;

/// u.v / (|u||v|), or 0 when either norm is zero. Throws DimensionMismatch.
double cosine(std::span<const double> u, std::span<const double> v);
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

struct EmbeddedCandidate {
  Channel channel = Channel::NoRetrieval;
  EmbeddingVector vector;
  bool zero_norm = false;
};

EmbeddedCandidate embed_candidate(const CandidateAnswer& c, providers::Embedder& embedder);

/// Oracle selection over precomputed embeddings. `candidates` may be in any
/// order; `texts[i]` is the answer text of `candidates[i]`.
SelectionResult select_by_reference(std::span<const EmbeddedCandidate> candidates,
                                    std::span<const std::string> texts,
                                    std::span<const EmbeddingVector> references);

/// Consensus selection over precomputed embeddings.
SelectionResult select_by_consensus(std::span<const EmbeddedCandidate> candidates,
                                    std::span<const std::string> texts);

/// Single-channel modes skip selection: the lone candidate is returned with
/// no similarity scores and no embedding calls.
SelectionResult pass_through(const CandidateAnswer& only);

/// Embeds every candidate and every gold alias (one embedding call each),
/// then applies oracle selection.
SelectionResult select_answer(std::span<const CandidateAnswer> candidates,
                              std::span<const std::string> reference,
                              providers::Embedder& embedder);

/// Embeds every candidate, then applies consensus selection.
SelectionResult select_consensus(std::span<const CandidateAnswer> candidates,
                                 providers::Embedder& embedder);

}  // namespace msrag::select
