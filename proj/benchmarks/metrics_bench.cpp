#include <benchmark/benchmark.h>

#include <string>

#include "simplify/consistency.hpp"
#include "simplify/readability.hpp"
#include "simplify/simpeval.hpp"

namespace {

using namespace simplify;

const std::string kSource =
    "Forty-nine randomised trials involving 3639 participants were included. All trials were conducted and "
    "published in China. The evidence for reduced mortality was of low certainty.";
const std::string kOutput =
    "Forty-nine trials with 3639 people were included. All of them took place in China. We are not sure that "
    "fewer people died.";

void BM_FleschKincaid(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(flesch_kincaid(kOutput).value);
}
BENCHMARK(BM_FleschKincaid);

void BM_Sari(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sari(kSource, kOutput, {kOutput}));
}
BENCHMARK(BM_Sari);

void BM_RougeLsum(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rouge_lsum(kOutput, kSource));
}
BENCHMARK(BM_RougeLsum);

void BM_LexicalScore(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lexical_score(kOutput, kSource));
}
BENCHMARK(BM_LexicalScore);

}  // namespace
BENCHMARK_MAIN();
