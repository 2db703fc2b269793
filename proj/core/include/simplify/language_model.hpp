#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simplify/distribution.hpp"

namespace simplify {

// Next-token distribution given a prefix that starts with BOS. Implementations
// must be deterministic and must assign probability 0 to BOS.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual const Vocabulary& vocabulary() const = 0;
  virtual StepDistribution next(std::span<const TokenId> prefix, std::string_view source) const = 0;
};

// Add-one smoothed n-gram model over a closed vocabulary. The source text is
// ignored; conditioning happens through the choice of training texts.
class NGramLM final : public LanguageModel {
 public:
  NGramLM(Vocabulary vocab, std::size_t order);

  // Counts the tokenized text `times` times, padded with order-1 BOS markers
  // and one EOS. Throws std::out_of_range for tokens outside the vocabulary.
  void add_text(std::string_view text, std::size_t times = 1);

  const Vocabulary& vocabulary() const override { return vocab_; }
  StepDistribution next(std::span<const TokenId> prefix, std::string_view source = {}) const override;
  double probability(std::span<const TokenId> context, TokenId next) const;
  std::size_t order() const { return order_; }

 private:
  std::vector<TokenId> context_of(std::span<const TokenId> prefix) const;

  Vocabulary vocab_;
  std::size_t order_;
  std::map<std::vector<TokenId>, std::map<TokenId, std::size_t>> counts_;
  std::map<std::vector<TokenId>, std::size_t> context_totals_;
};

// Surface tokens of the texts, in first-seen order, after the markers.
Vocabulary vocabulary_from(std::span<const std::string> texts);

// Throws std::invalid_argument for an empty corpus or order 0.
NGramLM train_ngram_lm(std::span<const std::string> corpus, std::size_t order);

// Conditions on the source by training an n-gram model on the labels of the
// `neighbors` training pairs whose inputs are lexically closest to it.
// Per-source models are cached; concurrent calls are safe.
class NeighborNGramLM final : public LanguageModel {
 public:
  struct Pair {
    std::string input;
    std::string label;
  };

  NeighborNGramLM(std::vector<Pair> training, std::size_t order, std::size_t neighbors);

  const Vocabulary& vocabulary() const override { return vocab_; }
  StepDistribution next(std::span<const TokenId> prefix, std::string_view source) const override;

 private:
  const NGramLM& model_for(std::string_view source) const;

  std::vector<Pair> training_;
  std::size_t order_;
  std::size_t neighbors_;
  Vocabulary vocab_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::unique_ptr<NGramLM>, std::less<>> cache_;
};

// Lookup table keyed by the generated words (BOS excluded). Prefixes without
// an entry get the fallback distribution, which defaults to EOS with
// probability 1.
class ScriptedLM final : public LanguageModel {
 public:
  explicit ScriptedLM(Vocabulary vocab);

  // `probs` lists word -> probability; unlisted words get 0.
  void set(const std::vector<std::string>& prefix, const std::map<std::string, double>& probs);
  void set_fallback(const std::map<std::string, double>& probs);
  // Deterministic path: each word with probability 1, then EOS.
  void script(const std::vector<std::string>& words);

  const Vocabulary& vocabulary() const override { return vocab_; }
  StepDistribution next(std::span<const TokenId> prefix, std::string_view source = {}) const override;

 private:
  StepDistribution make(const std::map<std::string, double>& probs) const;

  Vocabulary vocab_;
  std::map<std::vector<TokenId>, StepDistribution> table_;
  StepDistribution fallback_;
};

}  // namespace simplify
