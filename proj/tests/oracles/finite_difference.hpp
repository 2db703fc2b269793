#pragma once

// Reference loss evaluation and central-difference gradients for the toy
// per-step logit model, written without the library's loss code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct ToyInstance {
  std::vector<std::string> words;           // full vocabulary, markers first
  std::size_t steps = 0;
  std::vector<double> logits;               // steps x words, row-major
  std::vector<std::size_t> targets;         // one per step
  std::set<std::size_t> hallucinated;       // vocabulary indices
  double lambda_r = 0.0;
  double lambda_c = 0.0;
  double epsilon = 1e-12;
};

inline std::vector<double> softmax_row(const std::vector<double>& logits, std::size_t row, std::size_t width) {
  std::vector<double> p(width);
  double peak = logits[row * width];
  for (std::size_t j = 0; j < width; ++j) peak = std::max(peak, logits[row * width + j]);
  double sum = 0.0;
  for (std::size_t j = 0; j < width; ++j) sum += p[j] = std::exp(logits[row * width + j] - peak);
  for (double& v : p) v /= sum;
  return p;
}

inline std::size_t first_argmax(const std::vector<double>& p) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < p.size(); ++j)
    if (p[j] > p[best]) best = j;
  return best;
}

// Loss with the per-step argmax indices supplied by the caller, so that the
// function stays smooth under small logit perturbations.
inline double loss_with_fixed_argmax(const ToyInstance& inst, const std::vector<double>& logits,
                                     const std::vector<std::size_t>& argmax, const std::vector<double>& weight) {
  const std::size_t width = inst.words.size();
  double nll = 0.0;
  double ul_r = 0.0;
  double ul_c = 0.0;
  for (std::size_t t = 0; t < inst.steps; ++t) {
    const auto p = softmax_row(logits, t, width);
    nll -= std::log(p[inst.targets[t]]);
    const std::size_t a = argmax[t];
    const double term = -std::log(std::max(1.0 - p[a], inst.epsilon));
    ul_r += weight[a] * term;
    if (inst.hallucinated.count(a)) ul_c += term;
  }
  return nll + inst.lambda_r * ul_r + inst.lambda_c * ul_c;
}

inline std::vector<std::size_t> argmax_per_step(const ToyInstance& inst) {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < inst.steps; ++t) out.push_back(first_argmax(softmax_row(inst.logits, t, inst.words.size())));
  return out;
}

inline std::vector<double> central_difference(const ToyInstance& inst, const std::vector<double>& weight,
                                              double h = 1e-5) {
  const auto argmax = argmax_per_step(inst);
  std::vector<double> grad(inst.logits.size());
  std::vector<double> z = inst.logits;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double saved = z[i];
    z[i] = saved + h;
    const double up = loss_with_fixed_argmax(inst, z, argmax, weight);
    z[i] = saved - h;
    const double down = loss_with_fixed_argmax(inst, z, argmax, weight);
    z[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

// Elementwise |a - b| / max(|a|, |b|, floor).
inline double max_relative_error(const std::vector<double>& a, const std::vector<double>& b, double floor = 1e-6) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

inline const std::vector<std::string>& toy_word_pool() {
  static const std::vector<std::string> pool{
      "cat",      "heart",       "attack",    "myocardial", "infarction", "Aspirin",  "1999",
      "patients", "medicine",    "treatment", "improved",   "better",     "hemorrhage", "bleeding",
      "risk",     "London",      "trial",     "randomised", "understandability", "the", "of", "."};
  return pool;
}

// Vocabulary of at most 20 entries (markers included), up to 10 steps,
// logits in [-3, 3]; every other instance uses the default loss weights,
// the rest weights large enough to make the unlikelihood terms visible.
inline ToyInstance random_toy_instance(std::mt19937& rng, std::size_t index) {
  ToyInstance inst;
  inst.words = {"<s>", "</s>"};
  std::vector<std::string> pool = toy_word_pool();
  std::shuffle(pool.begin(), pool.end(), rng);
  const std::size_t extra = std::uniform_int_distribution<std::size_t>(1, 18)(rng);
  inst.words.insert(inst.words.end(), pool.begin(), pool.begin() + extra);
  const std::size_t width = inst.words.size();
  inst.steps = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
  std::uniform_real_distribution<double> z(-3.0, 3.0);
  inst.logits.resize(inst.steps * width);
  for (double& v : inst.logits) v = z(rng);
  std::uniform_int_distribution<std::size_t> word(1, width - 1);
  for (std::size_t t = 0; t < inst.steps; ++t) inst.targets.push_back(word(rng));
  std::bernoulli_distribution coin(0.4);
  for (std::size_t id = 2; id < width; ++id)
    if (coin(rng)) inst.hallucinated.insert(id);
  if (index % 2 == 0) {
    inst.lambda_r = 7.5e-4;
    inst.lambda_c = 2.5e-4;
  } else {
    inst.lambda_r = std::uniform_real_distribution<double>(0.01, 0.1)(rng);
    inst.lambda_c = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
  }
  return inst;
}

}  // namespace oracle
