#include "simplify/run_config.hpp"

#include <filesystem>

#include "simplify/error.hpp"
#include "simplify/numeric_text.hpp"

namespace simplify {

void RunConfig::check_paths() const {
  auto require = [](const std::string& path, const char* what) {
    if (!path.empty() && !std::filesystem::exists(path)) {
      throw DataError(std::string(what) + " not found: " + path);
    }
  };
  require(corpus_path, "corpus");
  require(train_path, "training corpus");
  require(outputs_path, "outputs file");
  if (scorer == ScorerKind::kPrecomputed) {
    if (scores_path.empty()) throw UsageError("--scorer precomputed requires --scores");
    require(scores_path, "score file");
  }
  if (entity_source == EntitySource::kExternal) require(entities_path, "entity file");
}

std::unique_ptr<ConsistencyScorer> RunConfig::make_scorer() const {
  if (scorer == ScorerKind::kPrecomputed) return std::make_unique<PrecomputedScorer>(PrecomputedScorer::load(scores_path));
  return std::make_unique<LexicalScorer>();
}

std::unique_ptr<EntityExtractor> RunConfig::make_entity_extractor() const {
  if (entity_source == EntitySource::kExternal) {
    return std::make_unique<LexiconEntityExtractor>(LexiconEntityExtractor::load(entities_path));
  }
  return std::make_unique<HeuristicEntityExtractor>();
}

std::vector<ConfigEntry> parse_config_file(std::string_view text) {
  std::vector<ConfigEntry> entries;
  std::size_t line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError("config line " + std::to_string(line_no) + ": empty key");
    entries.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
  }
  return entries;
}

}  // namespace simplify
