#include "simplify/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace simplify {

Vocabulary::Vocabulary() {
  add(kBosMarker);
  add(kEosMarker);
}

Vocabulary::Vocabulary(std::span<const std::string> words) : Vocabulary() {
  for (const auto& w : words) add(w);
}

TokenId Vocabulary::add(std::string_view word) {
  const auto [it, inserted] = index_.emplace(std::string(word), words_.size());
  if (inserted) words_.emplace_back(word);
  return it->second;
}

TokenId Vocabulary::id(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) throw std::out_of_range("unknown vocabulary word '" + std::string(word) + "'");
  return it->second;
}

bool Vocabulary::contains(std::string_view word) const { return index_.contains(std::string(word)); }

StepDistribution::StepDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("StepDistribution: empty vocabulary");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("StepDistribution: probability outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("StepDistribution: probabilities do not sum to 1");
  argmax_ = static_cast<TokenId>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

StepDistribution StepDistribution::softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty logits");
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - peak);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return StepDistribution(std::move(p));
}

}  // namespace simplify
