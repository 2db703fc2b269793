#include "simplify/rerank.hpp"

#include <algorithm>
#include <stdexcept>

namespace simplify {
namespace {

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string("composite_score: ") + name + " outside [0,1]");
  }
}

}  // namespace

double composite_score(double r_f, double r_b) {
  require_unit(r_f, "r_F");
  require_unit(r_b, "r_B");
  const double sum = r_f + r_b;
  if (sum == 0.0) return 0.0;
  const double harmonic = 2.0 * r_f * r_b / sum;
  return harmonic * harmonic;
}

CandidateScorer::CandidateScorer(std::string_view source, const ConsistencyScorer& scorer, bool heuristic_on,
                                 const EntityExtractor* entities)
    : source_(source),
      source_words_(tokenize(source).lowercase_words()),
      scorer_(scorer),
      heuristic_on_(heuristic_on),
      entities_(entities ? *entities : default_entity_extractor()) {}

BeamScore CandidateScorer::score(const std::vector<std::string>& words) const {
  BeamScore s;
  const std::string text = join_words(words);
  const TokenList tokens = tokenize(text);
  if (tokens.word_count() == 0) return s;

  s.f_f = flesch_kincaid(tokens);
  ++scorer_calls_;
  s.f_b = scorer_.score({text, source_});
  s.r_f = readability_subscore(s.f_f);
  s.r_b = consistency_subscore(s.f_b);
  s.r = composite_score(s.r_f, s.r_b);
  if (heuristic_on_) {
    s.unsupported = unsupported_entities(tokens, source_words_, entities_);
    if (!s.unsupported.empty()) {
      s.r = 0.0;
      s.hallucination_zeroed = true;
    }
  }
  return s;
}

bool ranks_before(const RankCandidate& a, const BeamScore& sa, const RankCandidate& b, const BeamScore& sb) {
  if (sa.hallucination_zeroed != sb.hallucination_zeroed) return !sa.hallucination_zeroed;
  if (sa.r != sb.r) return sa.r > sb.r;
  if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
  if (a.length != b.length) return a.length < b.length;
  return a.words < b.words;
}

void order_scored(const std::vector<RankCandidate>& candidates, std::vector<RankedBeam>& ranked) {
  std::stable_sort(ranked.begin(), ranked.end(), [&](const RankedBeam& x, const RankedBeam& y) {
    return ranks_before(candidates[x.index], x.score, candidates[y.index], y.score);
  });
}

std::vector<RankedBeam> rank_beams(const std::vector<RankCandidate>& candidates, std::string_view source,
                                   const ConsistencyScorer& scorer, const RerankOptions& options) {
  if (options.top_n == 0) throw std::invalid_argument("rank_beams: top_n must be positive");
  if (candidates.empty()) throw std::invalid_argument("rank_beams: no candidates");
  const CandidateScorer scoring(source, scorer, options.heuristic_on, options.entities);
  std::vector<RankedBeam> ranked;
  ranked.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) ranked.push_back({i, scoring.score(candidates[i].words)});
  order_scored(candidates, ranked);
  if (ranked.size() > options.top_n) ranked.resize(options.top_n);
  return ranked;
}

}  // namespace simplify
