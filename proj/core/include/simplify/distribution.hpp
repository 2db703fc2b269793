#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace simplify {

using TokenId = std::size_t;

// Ordered word list. Index 0 is the BOS marker and index 1 the EOS marker;
// real words follow in insertion order.
class Vocabulary {
 public:
  static constexpr TokenId kBos = 0;
  static constexpr TokenId kEos = 1;
  static constexpr std::string_view kBosMarker = "<s>";
  static constexpr std::string_view kEosMarker = "</s>";

  Vocabulary();
  explicit Vocabulary(std::span<const std::string> words);

  // Returns the existing id when the word is already present.
  TokenId add(std::string_view word);
  // Throws std::out_of_range for unknown words.
  TokenId id(std::string_view word) const;
  bool contains(std::string_view word) const;
  const std::string& word(TokenId id) const { return words_.at(id); }
  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, TokenId> index_;
};

// Next-token probabilities at one generation step.
class StepDistribution {
 public:
  // Throws std::invalid_argument unless every entry lies in [0,1] and the
  // entries sum to 1 within 1e-9.
  explicit StepDistribution(std::vector<double> probs);

  static StepDistribution softmax(std::span<const double> logits);

  const std::vector<double>& probs() const { return probs_; }
  double operator[](TokenId id) const { return probs_[id]; }
  std::size_t size() const { return probs_.size(); }
  // Most probable entry; the lowest index wins ties.
  TokenId argmax() const { return argmax_; }

 private:
  std::vector<double> probs_;
  TokenId argmax_ = 0;
};

}  // namespace simplify
