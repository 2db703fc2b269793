#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "simplify/consistency.hpp"
#include "simplify/readability.hpp"

namespace simplify {

struct BeamScore {
  GradeScore f_f;
  double f_b = 0.0;
  double r_f = 0.0;
  double r_b = 0.0;
  double r = 0.0;
  bool hallucination_zeroed = false;
  EntitySet unsupported;
};

// Squared harmonic mean of the two subscores; 0 when both are 0.
// Throws std::invalid_argument for inputs outside [0,1].
double composite_score(double r_f, double r_b);

// A partial or finished decode presented for reranking. `words` are the
// generated tokens without BOS/EOS markers.
struct RankCandidate {
  std::vector<std::string> words;
  double log_prob = 0.0;
  std::size_t length = 0;  // generated tokens including a terminal EOS
};

struct RerankOptions {
  bool heuristic_on = true;
  std::size_t top_n = 1;
  const EntityExtractor* entities = nullptr;  // defaults to the rule-based extractor
};

// Scores one candidate against a pre-tokenized source. A candidate without
// words cannot be graded and scores r = 0 without consulting the scorer.
class CandidateScorer {
 public:
  CandidateScorer(std::string_view source, const ConsistencyScorer& scorer, bool heuristic_on,
                  const EntityExtractor* entities = nullptr);

  BeamScore score(const std::vector<std::string>& words) const;
  std::size_t scorer_calls() const { return scorer_calls_; }

 private:
  std::string source_;
  std::vector<std::string> source_words_;
  const ConsistencyScorer& scorer_;
  bool heuristic_on_;
  const EntityExtractor& entities_;
  mutable std::size_t scorer_calls_ = 0;
};

struct RankedBeam {
  std::size_t index = 0;  // position in the input list
  BeamScore score;
};

// Ordering used for reranking: supported beams before zeroed ones, then r
// descending, log-probability descending, shorter first, lexicographic words.
bool ranks_before(const RankCandidate& a, const BeamScore& sa, const RankCandidate& b, const BeamScore& sb);

// Scores every candidate, orders them by ranks_before() and keeps top_n.
// Throws std::invalid_argument for top_n == 0 or an empty candidate list.
std::vector<RankedBeam> rank_beams(const std::vector<RankCandidate>& candidates, std::string_view source,
                                   const ConsistencyScorer& scorer, const RerankOptions& options);

// Orders already scored candidates in place (indices into `candidates`).
void order_scored(const std::vector<RankCandidate>& candidates, std::vector<RankedBeam>& ranked);

}  // namespace simplify
