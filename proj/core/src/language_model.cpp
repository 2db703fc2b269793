#include "simplify/language_model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "simplify/consistency.hpp"
#include "simplify/textseg.hpp"

namespace simplify {
namespace {

std::vector<std::string> surfaces(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text).tokens) out.push_back(std::move(t.surface));
  return out;
}

}  // namespace

NGramLM::NGramLM(Vocabulary vocab, std::size_t order) : vocab_(std::move(vocab)), order_(order) {
  if (order_ == 0) throw std::invalid_argument("NGramLM: order must be positive");
}

void NGramLM::add_text(std::string_view text, std::size_t times) {
  std::vector<TokenId> ids(order_ - 1, Vocabulary::kBos);
  for (const auto& s : surfaces(text)) ids.push_back(vocab_.id(s));
  ids.push_back(Vocabulary::kEos);
  for (std::size_t i = order_ - 1; i < ids.size(); ++i) {
    std::vector<TokenId> context(ids.begin() + static_cast<std::ptrdiff_t>(i - (order_ - 1)),
                                 ids.begin() + static_cast<std::ptrdiff_t>(i));
    counts_[context][ids[i]] += times;
    context_totals_[context] += times;
  }
}

std::vector<TokenId> NGramLM::context_of(std::span<const TokenId> prefix) const {
  const std::size_t want = order_ - 1;
  std::vector<TokenId> context(want, Vocabulary::kBos);
  const std::size_t take = std::min(want, prefix.size());
  std::copy(prefix.end() - static_cast<std::ptrdiff_t>(take), prefix.end(),
            context.end() - static_cast<std::ptrdiff_t>(take));
  return context;
}

double NGramLM::probability(std::span<const TokenId> context_prefix, TokenId next) const {
  if (next == Vocabulary::kBos) return 0.0;
  const auto context = context_of(context_prefix);
  const double predictable = static_cast<double>(vocab_.size() - 1);
  const auto total_it = context_totals_.find(context);
  const double total = total_it == context_totals_.end() ? 0.0 : static_cast<double>(total_it->second);
  double count = 0.0;
  if (const auto it = counts_.find(context); it != counts_.end()) {
    if (const auto c = it->second.find(next); c != it->second.end()) count = static_cast<double>(c->second);
  }
  return (count + 1.0) / (total + predictable);
}

StepDistribution NGramLM::next(std::span<const TokenId> prefix, std::string_view) const {
  const auto context = context_of(prefix);
  const double predictable = static_cast<double>(vocab_.size() - 1);
  const auto total_it = context_totals_.find(context);
  const double denom = (total_it == context_totals_.end() ? 0.0 : static_cast<double>(total_it->second)) + predictable;
  std::vector<double> probs(vocab_.size(), 1.0 / denom);
  probs[Vocabulary::kBos] = 0.0;
  if (const auto it = counts_.find(context); it != counts_.end()) {
    for (const auto& [id, c] : it->second) probs[id] = (static_cast<double>(c) + 1.0) / denom;
  }
  return StepDistribution(std::move(probs));
}

Vocabulary vocabulary_from(std::span<const std::string> texts) {
  Vocabulary vocab;
  for (const auto& text : texts) {
    for (const auto& s : surfaces(text)) vocab.add(s);
  }
  return vocab;
}

NGramLM train_ngram_lm(std::span<const std::string> corpus, std::size_t order) {
  if (corpus.empty()) throw std::invalid_argument("train_ngram_lm: empty corpus");
  NGramLM lm(vocabulary_from(corpus), order);
  for (const auto& text : corpus) lm.add_text(text);
  return lm;
}

NeighborNGramLM::NeighborNGramLM(std::vector<Pair> training, std::size_t order, std::size_t neighbors)
    : training_(std::move(training)), order_(order), neighbors_(std::max<std::size_t>(neighbors, 1)) {
  if (training_.empty()) throw std::invalid_argument("NeighborNGramLM: empty training set");
  if (order_ == 0) throw std::invalid_argument("NeighborNGramLM: order must be positive");
  std::vector<std::string> labels;
  for (const auto& p : training_) labels.push_back(p.label);
  vocab_ = vocabulary_from(labels);
}

const NGramLM& NeighborNGramLM::model_for(std::string_view source) const {
  {
    std::lock_guard lock(mutex_);
    if (const auto it = cache_.find(source); it != cache_.end()) return *it->second;
  }
  const bool source_has_words = tokenize(source).word_count() > 0;
  std::vector<double> similarity(training_.size(), 0.0);
  for (std::size_t i = 0; i < training_.size(); ++i) {
    if (source_has_words && tokenize(training_[i].input).word_count() > 0) {
      similarity[i] = lexical_score(training_[i].input, source);
    }
  }
  std::vector<std::size_t> order(training_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return similarity[a] > similarity[b]; });
  auto model = std::make_unique<NGramLM>(vocab_, order_);
  for (std::size_t i = 0; i < std::min(neighbors_, order.size()); ++i) model->add_text(training_[order[i]].label);

  std::lock_guard lock(mutex_);
  const auto [it, inserted] = cache_.emplace(std::string(source), std::move(model));
  return *it->second;
}

StepDistribution NeighborNGramLM::next(std::span<const TokenId> prefix, std::string_view source) const {
  return model_for(source).next(prefix, source);
}

ScriptedLM::ScriptedLM(Vocabulary vocab)
    : vocab_(std::move(vocab)), fallback_(make({{std::string(Vocabulary::kEosMarker), 1.0}})) {}

StepDistribution ScriptedLM::make(const std::map<std::string, double>& probs) const {
  std::vector<double> p(vocab_.size(), 0.0);
  for (const auto& [word, prob] : probs) p[vocab_.id(word)] = prob;
  if (p[Vocabulary::kBos] != 0.0) throw std::invalid_argument("ScriptedLM: BOS must have probability 0");
  return StepDistribution(std::move(p));
}

void ScriptedLM::set(const std::vector<std::string>& prefix, const std::map<std::string, double>& probs) {
  std::vector<TokenId> key;
  for (const auto& w : prefix) key.push_back(vocab_.id(w));
  table_.insert_or_assign(std::move(key), make(probs));
}

void ScriptedLM::set_fallback(const std::map<std::string, double>& probs) { fallback_ = make(probs); }

void ScriptedLM::script(const std::vector<std::string>& words) {
  std::vector<std::string> prefix;
  for (const auto& w : words) {
    set(prefix, {{w, 1.0}});
    prefix.push_back(w);
  }
  set(prefix, {{std::string(Vocabulary::kEosMarker), 1.0}});
}

StepDistribution ScriptedLM::next(std::span<const TokenId> prefix, std::string_view) const {
  std::vector<TokenId> key(prefix.begin(), prefix.end());
  if (!key.empty() && key.front() == Vocabulary::kBos) key.erase(key.begin());
  const auto it = table_.find(key);
  return it == table_.end() ? fallback_ : it->second;
}

}  // namespace simplify
