#include "simplify/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace simplify {
namespace {

struct Beam {
  std::vector<TokenId> ids;  // generated tokens, BOS excluded
  double log_prob = 0.0;

  bool finished() const { return !ids.empty() && ids.back() == Vocabulary::kEos; }
};

double penalized(const Beam& b, double length_penalty) {
  if (length_penalty == 0.0 || b.ids.empty()) return b.log_prob;
  return b.log_prob / std::pow(static_cast<double>(b.ids.size()), length_penalty);
}

bool prob_before(const Beam& a, const Beam& b, double length_penalty) {
  const double pa = penalized(a, length_penalty);
  const double pb = penalized(b, length_penalty);
  if (pa != pb) return pa > pb;
  if (a.ids.size() != b.ids.size()) return a.ids.size() < b.ids.size();
  return a.ids < b.ids;
}

struct Expansion {
  std::size_t parent = 0;
  TokenId token = 0;
  double log_prob = 0.0;
};

std::vector<std::string> words_of(const Beam& b, const Vocabulary& vocab) {
  std::vector<std::string> words;
  for (TokenId id : b.ids) {
    if (id != Vocabulary::kEos) words.push_back(vocab.word(id));
  }
  return words;
}

RankCandidate candidate_of(const Beam& b, const Vocabulary& vocab) {
  return {words_of(b, vocab), b.log_prob, b.ids.size()};
}

// Reorders `beams` by ranks_before() and returns the matching scores.
std::vector<BeamScore> rerank(std::vector<Beam>& beams, const Vocabulary& vocab, const CandidateScorer& scoring) {
  std::vector<RankCandidate> candidates;
  candidates.reserve(beams.size());
  for (const auto& b : beams) candidates.push_back(candidate_of(b, vocab));
  std::vector<RankedBeam> ranked;
  ranked.reserve(beams.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) ranked.push_back({i, scoring.score(candidates[i].words)});
  order_scored(candidates, ranked);

  std::vector<Beam> ordered;
  std::vector<BeamScore> scores;
  ordered.reserve(beams.size());
  scores.reserve(beams.size());
  for (auto& r : ranked) {
    ordered.push_back(std::move(beams[r.index]));
    scores.push_back(std::move(r.score));
  }
  beams = std::move(ordered);
  return scores;
}

}  // namespace

void DecoderConfig::validate() const {
  if (beam_width == 0) throw std::invalid_argument("decoder: beam width must be positive");
  if (rerank_interval == 0) throw std::invalid_argument("decoder: rerank interval must be positive");
  if (max_length == 0) throw std::invalid_argument("decoder: max length must be positive");
  if (!(length_penalty >= 0.0)) throw std::invalid_argument("decoder: length penalty must be non-negative");
}

std::vector<std::string> greedy_decode(const LanguageModel& lm, std::string_view source, std::size_t max_length) {
  const Vocabulary& vocab = lm.vocabulary();
  std::vector<TokenId> prefix{Vocabulary::kBos};
  std::vector<std::string> words;
  while (words.size() < max_length) {
    const StepDistribution dist = lm.next(prefix, source);
    TokenId best = Vocabulary::kEos;
    for (TokenId v = Vocabulary::kEos; v < dist.size(); ++v) {
      if (dist[v] > dist[best]) best = v;
    }
    if (best == Vocabulary::kEos) break;
    prefix.push_back(best);
    words.push_back(vocab.word(best));
  }
  return words;
}

DecodeResult beam_search(const LanguageModel& lm, std::string_view source, const DecoderConfig& config,
                         const ConsistencyScorer& scorer) {
  config.validate();
  const Vocabulary& vocab = lm.vocabulary();
  const CandidateScorer scoring(source, scorer, config.heuristic_on, config.entities);
  const std::size_t width = config.beam_width;
  const double lp = config.length_penalty;
  auto by_prob = [lp](const Beam& a, const Beam& b) { return prob_before(a, b, lp); };

  DecodeStats stats;
  std::vector<Beam> active{Beam{}};
  std::vector<Beam> finished;

  for (std::size_t t = 1; t <= config.max_length; ++t) {
    stats.steps_run = t;
    // Sort light (parent, token) records; only survivors become full beams.
    // Active beams share one length, so comparing ids means parent ids, then token.
    std::vector<Expansion> options;
    for (std::size_t b = 0; b < active.size(); ++b) {
      std::vector<TokenId> prefix{Vocabulary::kBos};
      prefix.insert(prefix.end(), active[b].ids.begin(), active[b].ids.end());
      const StepDistribution dist = lm.next(prefix, source);
      for (TokenId v = Vocabulary::kEos; v < dist.size(); ++v) {
        if (dist[v] <= 0.0) continue;
        options.push_back({b, v, active[b].log_prob + std::log(dist[v])});
      }
    }
    const double length = static_cast<double>(t);
    auto option_before = [&](const Expansion& x, const Expansion& y) {
      const double px = lp == 0.0 ? x.log_prob : x.log_prob / std::pow(length, lp);
      const double py = lp == 0.0 ? y.log_prob : y.log_prob / std::pow(length, lp);
      if (px != py) return px > py;
      if (x.parent != y.parent && active[x.parent].ids != active[y.parent].ids)
        return active[x.parent].ids < active[y.parent].ids;
      return x.token < y.token;
    };
    const bool rerank_step = t % config.rerank_interval == 0;
    const std::size_t keep = rerank_step && config.candidate_multiplier != 0
                                 ? std::min(options.size(), config.candidate_multiplier * width)
                                 : options.size();
    // Outside rerank steps at most 2 * width ranks are ever inspected.
    const std::size_t needed = rerank_step ? keep : std::min(options.size(), 2 * width);
    std::partial_sort(options.begin(), options.begin() + static_cast<std::ptrdiff_t>(needed), options.end(),
                      option_before);
    if (!rerank_step) {
      // Further ranks only matter while actives are still missing.
      std::size_t live = 0;
      std::size_t upto = 0;
      while (upto < needed && live < width) live += options[upto++].token != Vocabulary::kEos;
      if (live < width) {
        std::sort(options.begin() + static_cast<std::ptrdiff_t>(needed), options.end(), option_before);
      } else {
        options.resize(upto);
      }
    } else {
      options.resize(keep);
    }

    std::vector<Beam> expansions;
    expansions.reserve(options.size());
    for (const auto& o : options) {
      Beam next = active[o.parent];
      next.ids.push_back(o.token);
      next.log_prob = o.log_prob;
      expansions.push_back(std::move(next));
    }

    if (rerank_step) {
      stats.rerank_steps.push_back(t);
      stats.rerank_candidates += expansions.size();
      rerank(expansions, vocab, scoring);
    }

    std::vector<Beam> next_active;
    for (std::size_t rank = 0; rank < expansions.size() && next_active.size() < width; ++rank) {
      if (expansions[rank].finished()) {
        if (rank < width) finished.push_back(std::move(expansions[rank]));
      } else {
        next_active.push_back(std::move(expansions[rank]));
      }
    }
    active = std::move(next_active);
    if (active.empty()) break;
    if (finished.size() >= width) {
      // Stop once no active beam can outscore the width-th best finished one.
      std::vector<double> done;
      done.reserve(finished.size());
      for (const auto& b : finished) done.push_back(penalized(b, lp));
      std::nth_element(done.begin(), done.begin() + static_cast<std::ptrdiff_t>(width - 1), done.end(),
                       std::greater<>());
      double best_active = penalized(active.front(), lp);
      for (const auto& b : active) best_active = std::max(best_active, penalized(b, lp));
      if (best_active <= done[width - 1]) break;
    }
  }

  stats.rerank_scorer_calls = scoring.scorer_calls();
  std::vector<Beam> pool = std::move(finished);
  if (stats.steps_run == config.max_length) {
    for (auto& b : active) pool.push_back(std::move(b));
  }
  if (pool.empty()) throw std::logic_error("beam_search: language model offered no continuation");

  DecodeResult result;
  Beam chosen;
  if (config.reranking_enabled() || config.heuristic_on) {
    std::vector<BeamScore> scores = rerank(pool, vocab, scoring);
    if (scores.front().hallucination_zeroed) {
      result.hallucination_warning = true;
      const auto best = std::min_element(pool.begin(), pool.end(), by_prob);
      result.score = scores[static_cast<std::size_t>(best - pool.begin())];
      chosen = *best;
    } else {
      result.score = scores.front();
      chosen = pool.front();
    }
  } else {
    chosen = *std::min_element(pool.begin(), pool.end(), by_prob);
    result.score = scoring.score(words_of(chosen, vocab));
  }

  result.token_ids = chosen.ids;
  result.words = words_of(chosen, vocab);
  result.text = detokenize(result.words);
  result.log_prob = chosen.log_prob;
  result.finished = chosen.finished();
  stats.scorer_calls = scoring.scorer_calls();
  result.stats = std::move(stats);
  return result;
}

}  // namespace simplify
