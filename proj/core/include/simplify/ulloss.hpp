#pragma once

// Readability and consistency unlikelihood terms, the combined training loss
// and its analytic gradient on a per-step logit model.

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simplify/distribution.hpp"
#include "simplify/readability.hpp"

namespace simplify {

struct LossConfig {
  double lambda_r = 7.5e-4;
  double lambda_c = 2.5e-4;
  double epsilon = 1e-12;  // lower clamp for 1 - p inside the log
};

// Vocabulary indices of words penalized by the consistency term.
struct HallucinationSet {
  std::set<TokenId> indices;

  bool contains(TokenId id) const { return indices.contains(id); }
  // One word per line.
  std::string serialize(const Vocabulary& vocab) const;
  // Throws DataError for words missing from the vocabulary.
  static HallucinationSet parse(std::string_view text, const Vocabulary& vocab);
};

// Dense row-major (step, vocabulary) matrix.
struct LogitMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  LogitMatrix() = default;
  LogitMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

// Free per-step logits standing in for a seq2seq decoder head under teacher
// forcing: step t's distribution is softmax(logits row t).
class ToyModel {
 public:
  ToyModel(Vocabulary vocab, LogitMatrix logits);

  const Vocabulary& vocabulary() const { return vocab_; }
  const LogitMatrix& logits() const { return logits_; }
  LogitMatrix& logits() { return logits_; }
  std::size_t steps() const { return logits_.rows; }

  std::vector<StepDistribution> distributions() const;
  // Cross-entropy of the target ids, one per step.
  double nll(std::span<const TokenId> targets) const;
  // Argmax word per step, stopping before the first EOS.
  std::vector<std::string> greedy_words() const;

 private:
  Vocabulary vocab_;
  LogitMatrix logits_;
};

// -sum_t FK(argmax_t) * log(1 - p_t(argmax_t)), with 1 - p clamped at epsilon.
// Throws std::out_of_range when an argmax word has no weight.
double ul_readability(std::span<const StepDistribution> steps, const Vocabulary& vocab,
                      const FkWeightTable& weights, double epsilon = LossConfig{}.epsilon);
double ul_readability(std::span<const StepDistribution> steps, std::span<const double> weight_by_id,
                      double epsilon = LossConfig{}.epsilon);

// -sum_t [argmax_t in e] * log(1 - p_t(argmax_t)), clamped as above.
double ul_consistency(std::span<const StepDistribution> steps, const HallucinationSet& e,
                      double epsilon = LossConfig{}.epsilon);

// Greedy words absent from both the input and the label (case-insensitive)
// that the entity rules classify as entities within the greedy sequence.
// Words outside the vocabulary are ignored.
HallucinationSet hallucinated_set(std::span<const std::string> greedy_words, std::string_view input_text,
                                  std::string_view label_text, const Vocabulary& vocab);

struct LossBreakdown {
  double nll = 0.0;
  double ul_r = 0.0;
  double ul_c = 0.0;
  double total = 0.0;
};

double total_loss(double nll, std::span<const StepDistribution> steps, const Vocabulary& vocab,
                  const FkWeightTable& weights, const HallucinationSet& e, const LossConfig& config);
LossBreakdown loss_breakdown(double nll, std::span<const StepDistribution> steps, const Vocabulary& vocab,
                             const FkWeightTable& weights, const HallucinationSet& e, const LossConfig& config);

// Total loss of a toy model for the given targets.
LossBreakdown model_loss(const ToyModel& model, std::span<const TokenId> targets, const FkWeightTable& weights,
                         const HallucinationSet& e, const LossConfig& config);

// d(total loss)/d(logits). Argmax indices and e are treated as constants of
// the forward pass.
LogitMatrix loss_gradient(const ToyModel& model, std::span<const TokenId> targets, const FkWeightTable& weights,
                          const HallucinationSet& e, const LossConfig& config);

}  // namespace simplify
