#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "simplify/consistency.hpp"
#include "simplify/decoder.hpp"
#include "simplify/language_model.hpp"

namespace {

using namespace simplify;

const std::vector<std::string>& training_texts() {
  static const std::vector<std::string> texts{
      "nurses gave the injection to kids after the meal .",
      "nurses gave the shot to kids after the meal .",
      "the medication eased the discomfort within a day .",
      "the drug eased the pain within a day .",
      "staff saw less hemorrhage in the ward .",
      "staff saw less bleeding in the ward .",
  };
  return texts;
}

const NGramLM& model() {
  static const NGramLM lm = [] {
    NGramLM m(vocabulary_from(training_texts()), 2);
    for (const auto& t : training_texts()) m.add_text(t);
    return m;
  }();
  return lm;
}

// Decode cost as a function of the rerank interval k.
void BM_BeamSearchRerankInterval(benchmark::State& state) {
  const LexicalScorer scorer;
  DecoderConfig config;
  config.beam_width = 4;
  config.rerank_interval = static_cast<std::size_t>(state.range(0));
  config.max_length = 40;
  const std::string source = "nurses gave the injection ( shot ) to kids after the meal .";
  std::size_t calls = 0;
  for (auto _ : state) {
    const DecodeResult r = beam_search(model(), source, config, scorer);
    calls = r.stats.scorer_calls;
    benchmark::DoNotOptimize(r.words.data());
  }
  state.counters["scorer_calls"] = static_cast<double>(calls);
}
BENCHMARK(BM_BeamSearchRerankInterval)->Arg(1)->Arg(5)->Arg(10)->Arg(20);

void BM_BeamSearchWidth(benchmark::State& state) {
  const LexicalScorer scorer;
  DecoderConfig config;
  config.beam_width = static_cast<std::size_t>(state.range(0));
  config.max_length = 40;
  const std::string source = "the medication eased the discomfort within a day .";
  for (auto _ : state) benchmark::DoNotOptimize(beam_search(model(), source, config, scorer).words.data());
}
BENCHMARK(BM_BeamSearchWidth)->Arg(1)->Arg(4)->Arg(8);

}  // namespace
