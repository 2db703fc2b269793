#pragma once

// Beam search that swaps log-probability pruning for readability/consistency
// reranking every k steps.
//
// Each step expands every active beam by every token with non-zero
// probability (BOS excluded) and orders the expansions:
//   * at steps t with t % k == 0, the top candidate_multiplier * beam_width
//     expansions by log-probability are scored and ordered by ranks_before();
//   * at all other steps, by length-penalized log-probability, then shorter,
//     then lexicographically smaller token ids.
// Walking that order, an EOS-terminated expansion ranked within the first
// beam_width positions joins the finished pool; other expansions fill the
// beam_width active slots. Decoding stops when no beam is active, when the
// finished pool holds beam_width beams, or at max_length. The answer is then
// picked from the finished pool (plus the active beams when max_length was
// reached): by ranks_before() when reranking or the hallucination heuristic
// is enabled, otherwise by log-probability.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "simplify/consistency.hpp"
#include "simplify/language_model.hpp"
#include "simplify/rerank.hpp"

namespace simplify {

struct DecoderConfig {
  std::size_t beam_width = 4;
  std::size_t rerank_interval = 5;  // k
  std::size_t max_length = 128;
  bool heuristic_on = true;
  double length_penalty = 0.0;
  // Rerank pool size as a multiple of beam_width; 0 scores every expansion.
  std::size_t candidate_multiplier = 2;
  const EntityExtractor* entities = nullptr;

  // Throws std::invalid_argument for zero width, interval or length, or a
  // negative length penalty.
  void validate() const;
  bool reranking_enabled() const { return rerank_interval <= max_length; }
};

struct DecodeStats {
  std::size_t steps_run = 0;
  std::vector<std::size_t> rerank_steps;
  std::size_t rerank_candidates = 0;    // candidates scored at rerank steps
  std::size_t rerank_scorer_calls = 0;  // consistency scorer invocations at rerank steps
  std::size_t scorer_calls = 0;         // consistency scorer invocations, final selection included
};

struct DecodeResult {
  std::vector<TokenId> token_ids;  // generated ids, BOS excluded, terminal EOS included when finished
  std::vector<std::string> words;  // generated words without markers
  std::string text;                // detokenized words
  double log_prob = 0.0;
  bool finished = false;
  BeamScore score;
  // Every candidate was zeroed by the hallucination heuristic; the most
  // probable one was returned instead.
  bool hallucination_warning = false;
  DecodeStats stats;
};

// Appends the most probable non-BOS token until EOS or max_length.
std::vector<std::string> greedy_decode(const LanguageModel& lm, std::string_view source, std::size_t max_length);

DecodeResult beam_search(const LanguageModel& lm, std::string_view source, const DecoderConfig& config,
                         const ConsistencyScorer& scorer);

}  // namespace simplify
