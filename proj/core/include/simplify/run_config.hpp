#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simplify/consistency.hpp"
#include "simplify/decoder.hpp"
#include "simplify/ulloss.hpp"

namespace simplify {

enum class ScorerKind { kLexical, kPrecomputed };
enum class EntitySource { kHeuristic, kExternal };

struct RunConfig {
  DecoderConfig decoder;
  LossConfig loss;
  ScorerKind scorer = ScorerKind::kLexical;
  std::string scores_path;  // precomputed `id<TAB>score` file
  EntitySource entity_source = EntitySource::kHeuristic;
  std::string entities_path;  // external `entity[<TAB>label]` file
  std::string corpus_path;
  std::string train_path;
  std::string outputs_path;
  std::size_t lm_order = 2;
  std::size_t lm_neighbors = 3;
  std::size_t jobs = 1;

  // Throws DataError when a referenced input path does not exist.
  void check_paths() const;
  std::unique_ptr<ConsistencyScorer> make_scorer() const;
  std::unique_ptr<EntityExtractor> make_entity_extractor() const;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

// `key = value` lines; blank lines and lines starting with '#' are skipped.
// Throws UsageError naming the line for anything else.
std::vector<ConfigEntry> parse_config_file(std::string_view text);

}  // namespace simplify
