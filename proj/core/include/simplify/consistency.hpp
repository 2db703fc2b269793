#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "simplify/textseg.hpp"

namespace simplify {

struct ScoreQuery {
  std::string_view candidate;
  std::string_view source;
  // Identifies a corpus output for precomputed lookups; empty for partial
  // beams, which are keyed by their text.
  std::string_view candidate_id = {};
};

// Raw factual-consistency score f_B in [0,1] of a candidate against its
// source. Implementations are immutable and safe for concurrent calls.
class ConsistencyScorer {
 public:
  virtual ~ConsistencyScorer() = default;
  virtual double score(const ScoreQuery& query) const = 0;
};

// Greedy soft token matching: every candidate word is matched to its most
// similar source word (character-trigram cosine) and vice versa; the result
// is the F1 of the mean precision and mean recall similarities.
class LexicalScorer final : public ConsistencyScorer {
 public:
  double score(const ScoreQuery& query) const override;
};

// Convenience wrapper around LexicalScorer. Throws std::invalid_argument
// when the candidate has no words; returns 0 for a source without words.
double lexical_score(std::string_view candidate, std::string_view source);

// Cosine similarity of the '#'-padded character-trigram count vectors.
double trigram_similarity(std::string_view a, std::string_view b);

// Scores computed elsewhere (e.g. neural BERTScore), keyed by candidate id,
// or by candidate text when the query carries no id.
class PrecomputedScorer final : public ConsistencyScorer {
 public:
  explicit PrecomputedScorer(std::map<std::string, double, std::less<>> scores);

  // Line-delimited `candidate_id<TAB>score`; throws DataError naming the line.
  static PrecomputedScorer parse(std::string_view text);
  static PrecomputedScorer load(const std::string& path);

  // Throws DataError for unknown keys.
  double score(const ScoreQuery& query) const override;
  std::size_t size() const { return scores_.size(); }

 private:
  std::map<std::string, double, std::less<>> scores_;
};

// Maps f_B onto [0,1]: 0 below 0.60, linear up to 1 at f_B = 1.
// Throws std::invalid_argument when f_B lies outside [0,1].
double consistency_subscore(double f_b);

class EntityExtractor {
 public:
  virtual ~EntityExtractor() = default;
  virtual EntitySet extract(const TokenList& tokens) const = 0;
};

// extract_entities() with the given options.
class HeuristicEntityExtractor final : public EntityExtractor {
 public:
  explicit HeuristicEntityExtractor(EntityOptions options = {}) : options_(options) {}
  EntitySet extract(const TokenList& tokens) const override;

 private:
  EntityOptions options_;
};

// Entities supplied from outside (e.g. an offline NER run): every lexicon
// entry found as a case-insensitive word sequence in the text.
class LexiconEntityExtractor final : public EntityExtractor {
 public:
  explicit LexiconEntityExtractor(std::vector<std::string> entities);

  // Line-delimited `entity[<TAB>label...]`; extra columns are ignored.
  static LexiconEntityExtractor parse(std::string_view text);
  static LexiconEntityExtractor load(const std::string& path);

  EntitySet extract(const TokenList& tokens) const override;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::string surface;
    std::vector<std::string> words;
  };
  std::vector<Entry> entries_;
};

const EntityExtractor& default_entity_extractor();

// True when `needle` occurs as a contiguous run inside `haystack`.
bool contains_sequence(const std::vector<std::string>& haystack, const std::vector<std::string>& needle);

// Entities of the candidate whose lowercased word sequence does not occur in
// the source.
EntitySet unsupported_entities(std::string_view candidate, std::string_view source,
                               const EntityExtractor& extractor = default_entity_extractor());
EntitySet unsupported_entities(const TokenList& candidate, const std::vector<std::string>& source_words,
                               const EntityExtractor& extractor);

}  // namespace simplify
