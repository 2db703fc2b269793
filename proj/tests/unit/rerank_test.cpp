#include "simplify/rerank.hpp"

#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

namespace simplify {
namespace {

class FixedScorer final : public ConsistencyScorer {
 public:
  explicit FixedScorer(double value) : value_(value) {}
  double score(const ScoreQuery&) const override { return value_; }

 private:
  double value_;
};

TEST(CompositeScore, Examples) {
  EXPECT_EQ(composite_score(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(composite_score(0.5, 0.5), 0.25);
  EXPECT_NEAR(composite_score(0.8, 0.2), 0.1024, 1e-15);
  EXPECT_EQ(composite_score(0.0, 0.7), 0.0);
  EXPECT_EQ(composite_score(0.0, 0.0), 0.0);
  EXPECT_NEAR(composite_score(0.5, 0.6), 0.297520661157025, 1e-15);
}

TEST(CompositeScore, RejectsOutOfRange) {
  EXPECT_THROW(composite_score(-0.1, 0.5), std::invalid_argument);
  EXPECT_THROW(composite_score(0.5, 1.5), std::invalid_argument);
}

TEST(CompositeScore, SymmetricBoundedMonotone) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    const double r = composite_score(a, b);
    EXPECT_EQ(r, composite_score(b, a));
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, std::min(a, b) + 1e-15);
    const double a2 = std::min(1.0, a + 0.05);
    EXPECT_GE(composite_score(a2, b), r);
  }
}

BeamScore with_r(double r, bool zeroed = false) {
  BeamScore s;
  s.r = r;
  s.hallucination_zeroed = zeroed;
  return s;
}

TEST(RanksBefore, HigherCompositeFirst) {
  const RankCandidate a{{"x"}, -3.0, 1};
  const RankCandidate b{{"y"}, -1.0, 1};
  EXPECT_TRUE(ranks_before(a, with_r(composite_score(1, 1)), b, with_r(composite_score(0.5, 0.5))));
  EXPECT_FALSE(ranks_before(b, with_r(0.25), a, with_r(1.0)));
}

TEST(RanksBefore, TieBreakByLogProbThenLengthThenWords) {
  const RankCandidate a{{"x"}, -1.0, 2};
  const RankCandidate b{{"y"}, -2.0, 1};
  EXPECT_TRUE(ranks_before(a, with_r(0.3), b, with_r(0.3)));
  const RankCandidate c{{"x"}, -1.0, 1};
  EXPECT_TRUE(ranks_before(c, with_r(0.3), a, with_r(0.3)));
  const RankCandidate d{{"w"}, -1.0, 2};
  EXPECT_TRUE(ranks_before(d, with_r(0.3), a, with_r(0.3)));
  EXPECT_FALSE(ranks_before(a, with_r(0.3), a, with_r(0.3)));
}

TEST(RanksBefore, ZeroedAlwaysLast) {
  const RankCandidate a{{"x"}, -0.1, 1};
  const RankCandidate b{{"y"}, -9.0, 1};
  EXPECT_TRUE(ranks_before(b, with_r(0.0), a, with_r(0.0, true)));
}

TEST(CandidateScorer, Breakdown) {
  const FixedScorer scorer(0.84);
  const CandidateScorer cs("the cat sat on the mat", scorer, true);
  const BeamScore s = cs.score({"the", "cat", "sat", "."});
  EXPECT_LT(s.f_f.value, 4.0);
  EXPECT_EQ(s.r_f, 1.0);
  EXPECT_NEAR(s.r_b, 0.6, 1e-12);
  EXPECT_NEAR(s.r, composite_score(1.0, 0.6), 1e-15);
  EXPECT_FALSE(s.hallucination_zeroed);
  EXPECT_EQ(cs.scorer_calls(), 1u);
}

TEST(CandidateScorer, WordlessCandidateScoresZeroWithoutScorer) {
  const FixedScorer scorer(1.0);
  const CandidateScorer cs("src", scorer, true);
  EXPECT_EQ(cs.score({}).r, 0.0);
  EXPECT_EQ(cs.score({".", ","}).r, 0.0);
  EXPECT_EQ(cs.scorer_calls(), 0u);
}

TEST(RankBeams, UnsupportedEntityZeroedAndLast) {
  const FixedScorer scorer(1.0);
  const std::vector<RankCandidate> beams{
      {{"the", "trial", "ran", "in", "1999"}, -0.5, 5},
      {{"the", "trial", "ran", "well"}, -4.0, 4},
  };
  const auto ranked = rank_beams(beams, "the trial ran well in 2001", scorer, {.top_n = 2});
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].index, 1u);
  EXPECT_EQ(ranked[1].index, 0u);
  EXPECT_EQ(ranked[1].score.r, 0.0);
  EXPECT_TRUE(ranked[1].score.hallucination_zeroed);
  EXPECT_EQ(ranked[1].score.unsupported, (EntitySet{"1999"}));
}

TEST(RankBeams, HeuristicOffKeepsScore) {
  const FixedScorer scorer(1.0);
  const std::vector<RankCandidate> beams{{{"in", "1999"}, -0.5, 2}};
  const auto ranked = rank_beams(beams, "nothing", scorer, {.heuristic_on = false});
  EXPECT_GT(ranked[0].score.r, 0.0);
  EXPECT_FALSE(ranked[0].score.hallucination_zeroed);
}

TEST(RankBeams, TopNAndErrors) {
  const FixedScorer scorer(0.9);
  const std::vector<RankCandidate> beams{{{"a"}, -1, 1}, {{"b"}, -2, 1}, {{"c"}, -3, 1}};
  EXPECT_EQ(rank_beams(beams, "a b c", scorer, {.top_n = 2}).size(), 2u);
  EXPECT_EQ(rank_beams(beams, "a b c", scorer, {.top_n = 10}).size(), 3u);
  EXPECT_THROW(rank_beams(beams, "a", scorer, {.top_n = 0}), std::invalid_argument);
  EXPECT_THROW(rank_beams({}, "a", scorer, {}), std::invalid_argument);
}

TEST(RankBeams, Idempotent) {
  const LexicalScorer scorer;
  const std::vector<std::string> pool{"patients", "got", "better", "with", "medicine", "treatment", "Aspirin", "."};
  std::mt19937 rng(23);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> lp(-10.0, 0.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RankCandidate> beams;
    for (int b = 0; b < 6; ++b) {
      RankCandidate c;
      for (int w = 0; w < 5; ++w) c.words.push_back(pool[pick(rng)]);
      c.log_prob = lp(rng);
      c.length = c.words.size();
      beams.push_back(c);
    }
    const std::string source = "patients got better with treatment";
    const auto first = rank_beams(beams, source, scorer, {.top_n = 6});
    std::vector<RankCandidate> reordered;
    for (const auto& r : first) reordered.push_back(beams[r.index]);
    const auto second = rank_beams(reordered, source, scorer, {.top_n = 6});
    for (std::size_t i = 0; i < second.size(); ++i) EXPECT_EQ(second[i].index, i);
  }
}

}  // namespace
}  // namespace simplify
