#include "simplify/ulloss.hpp"

#include <cmath>
#include <stdexcept>

#include "simplify/error.hpp"
#include "simplify/numeric_text.hpp"
#include "simplify/textseg.hpp"

namespace simplify {
namespace {

double unlikelihood(double p, double epsilon) { return -std::log(std::max(1.0 - p, epsilon)); }

std::vector<double> weights_by_id(const Vocabulary& vocab, const FkWeightTable& weights) {
  std::vector<double> out(vocab.size());
  for (TokenId id = 0; id < vocab.size(); ++id) {
    out[id] = weights.contains(vocab.word(id)) ? weights.at(vocab.word(id)) : -1.0;
  }
  return out;
}

double weight_of(std::span<const double> weight_by_id, TokenId id, const char* who) {
  if (id >= weight_by_id.size() || weight_by_id[id] < 0.0) {
    throw std::out_of_range(std::string(who) + ": no FK weight for vocabulary index " + std::to_string(id));
  }
  return weight_by_id[id];
}

}  // namespace

std::string HallucinationSet::serialize(const Vocabulary& vocab) const {
  std::string out;
  for (TokenId id : indices) {
    out += vocab.word(id);
    out += '\n';
  }
  return out;
}

HallucinationSet HallucinationSet::parse(std::string_view text, const Vocabulary& vocab) {
  HallucinationSet e;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    const auto word = trim(line);
    if (word.empty()) continue;
    if (!vocab.contains(word)) {
      throw DataError("line " + std::to_string(line_no) + ": '" + std::string(word) + "' not in vocabulary");
    }
    e.indices.insert(vocab.id(word));
  }
  return e;
}

ToyModel::ToyModel(Vocabulary vocab, LogitMatrix logits) : vocab_(std::move(vocab)), logits_(std::move(logits)) {
  if (logits_.cols != vocab_.size()) throw std::invalid_argument("ToyModel: logit width differs from vocabulary");
}

std::vector<StepDistribution> ToyModel::distributions() const {
  std::vector<StepDistribution> out;
  out.reserve(logits_.rows);
  for (std::size_t t = 0; t < logits_.rows; ++t) out.push_back(StepDistribution::softmax(logits_.row(t)));
  return out;
}

double ToyModel::nll(std::span<const TokenId> targets) const {
  if (targets.size() != logits_.rows) throw std::invalid_argument("ToyModel::nll: one target per step required");
  double total = 0.0;
  for (std::size_t t = 0; t < logits_.rows; ++t) {
    const auto row = logits_.row(t);
    double peak = row[0];
    for (double z : row) peak = std::max(peak, z);
    double sum = 0.0;
    for (double z : row) sum += std::exp(z - peak);
    total -= row[targets[t]] - peak - std::log(sum);
  }
  return total;
}

std::vector<std::string> ToyModel::greedy_words() const {
  std::vector<std::string> words;
  for (const auto& step : distributions()) {
    if (step.argmax() == Vocabulary::kEos) break;
    words.push_back(vocab_.word(step.argmax()));
  }
  return words;
}

double ul_readability(std::span<const StepDistribution> steps, std::span<const double> weight_by_id, double epsilon) {
  double total = 0.0;
  for (const auto& step : steps) {
    const TokenId a = step.argmax();
    total += weight_of(weight_by_id, a, "ul_readability") * unlikelihood(step[a], epsilon);
  }
  return total;
}

double ul_readability(std::span<const StepDistribution> steps, const Vocabulary& vocab, const FkWeightTable& weights,
                      double epsilon) {
  return ul_readability(steps, weights_by_id(vocab, weights), epsilon);
}

double ul_consistency(std::span<const StepDistribution> steps, const HallucinationSet& e, double epsilon) {
  double total = 0.0;
  for (const auto& step : steps) {
    const TokenId a = step.argmax();
    if (e.contains(a)) total += unlikelihood(step[a], epsilon);
  }
  return total;
}

HallucinationSet hallucinated_set(std::span<const std::string> greedy_words, std::string_view input_text,
                                  std::string_view label_text, const Vocabulary& vocab) {
  std::set<std::string> supported;
  for (auto& w : tokenize(input_text).lowercase_words()) supported.insert(std::move(w));
  for (auto& w : tokenize(label_text).lowercase_words()) supported.insert(std::move(w));

  // The greedy sequence has no trustworthy sentence structure, so a
  // capitalized first word is as much an entity candidate as any other.
  const TokenList greedy = tokenize(join_words(greedy_words));
  std::set<std::string> entity_words;
  for (const auto& entity : extract_entities(greedy, {.sentence_initial_capitals = true})) {
    for (const auto& t : tokenize(entity).tokens) entity_words.insert(t.surface);
  }

  HallucinationSet e;
  for (const auto& word : greedy_words) {
    if (supported.contains(to_lower(word)) || !entity_words.contains(word)) continue;
    if (vocab.contains(word)) e.indices.insert(vocab.id(word));
  }
  return e;
}

LossBreakdown loss_breakdown(double nll, std::span<const StepDistribution> steps, const Vocabulary& vocab,
                             const FkWeightTable& weights, const HallucinationSet& e, const LossConfig& config) {
  if (!std::isfinite(nll)) throw std::invalid_argument("total_loss: non-finite NLL");
  LossBreakdown b;
  b.nll = nll;
  b.ul_r = ul_readability(steps, vocab, weights, config.epsilon);
  b.ul_c = ul_consistency(steps, e, config.epsilon);
  b.total = nll + config.lambda_r * b.ul_r + config.lambda_c * b.ul_c;
  return b;
}

double total_loss(double nll, std::span<const StepDistribution> steps, const Vocabulary& vocab,
                  const FkWeightTable& weights, const HallucinationSet& e, const LossConfig& config) {
  return loss_breakdown(nll, steps, vocab, weights, e, config).total;
}

LossBreakdown model_loss(const ToyModel& model, std::span<const TokenId> targets, const FkWeightTable& weights,
                         const HallucinationSet& e, const LossConfig& config) {
  const auto steps = model.distributions();
  return loss_breakdown(model.nll(targets), steps, model.vocabulary(), weights, e, config);
}

LogitMatrix loss_gradient(const ToyModel& model, std::span<const TokenId> targets, const FkWeightTable& weights,
                          const HallucinationSet& e, const LossConfig& config) {
  if (targets.size() != model.steps()) throw std::invalid_argument("loss_gradient: one target per step required");
  const auto weight = weights_by_id(model.vocabulary(), weights);
  const auto steps = model.distributions();
  LogitMatrix grad(model.steps(), model.vocabulary().size());
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const auto& p = steps[t].probs();
    // Cross-entropy: p - onehot(target).
    for (std::size_t j = 0; j < p.size(); ++j) grad.at(t, j) = p[j];
    grad.at(t, targets[t]) -= 1.0;

    const TokenId a = steps[t].argmax();
    const double coeff = config.lambda_r * weight_of(weight, a, "loss_gradient") +
                         (e.contains(a) ? config.lambda_c : 0.0);
    const double one_minus = 1.0 - p[a];
    if (coeff == 0.0 || one_minus < config.epsilon) continue;  // zero or clamped (constant) term
    // d/dz_j [-log(1 - p_a)] = p_a (delta_aj - p_j) / (1 - p_a)
    const double scale = coeff * p[a] / one_minus;
    for (std::size_t j = 0; j < p.size(); ++j) grad.at(t, j) += scale * ((j == a ? 1.0 : 0.0) - p[j]);
  }
  return grad;
}

}  // namespace simplify
