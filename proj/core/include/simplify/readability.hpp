#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simplify/textseg.hpp"

namespace simplify {

// US school grade level. Finite, but may fall below 0 or above 20.
struct GradeScore {
  double value = 0.0;
  friend auto operator<=>(const GradeScore&, const GradeScore&) = default;
};

struct TextCounts {
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
  std::size_t characters = 0;  // letters and digits inside word tokens
};

TextCounts count_text(const TokenList& tokens);

// Kincaid grade level: 0.39 * words/sentence + 11.8 * syllables/word - 15.59.
// Throws std::domain_error when the text has no words.
GradeScore flesch_kincaid(std::string_view text);
GradeScore flesch_kincaid(const TokenList& tokens);
// Space-joined word sequence, as used for partial beams.
GradeScore flesch_kincaid(std::span<const std::string> words);

// Automated Readability Index: 4.71 * chars/word + 0.5 * words/sentence - 21.43.
// Throws std::domain_error when the text has no words.
GradeScore ari(std::string_view text);
GradeScore ari(const TokenList& tokens);

// Grade of the word as a one-word, one-sentence text, clamped at zero so that
// the unlikelihood term never rewards a word. Throws std::invalid_argument
// for an empty string.
double word_fk(std::string_view word);

// Maps f_F onto [0,1]: 1 below grade 4, 0 above grade 20, linear in between.
double readability_subscore(GradeScore fk);

// Per-word FK weights for the readability unlikelihood term.
class FkWeightTable {
 public:
  FkWeightTable() = default;

  // Weights for every vocabulary entry. Entries that are not words (markers,
  // punctuation) get weight 0.
  static FkWeightTable for_vocabulary(std::span<const std::string> vocabulary);

  void set(std::string word, double weight);
  // Throws std::out_of_range when the word has no weight.
  double at(std::string_view word) const;
  bool contains(std::string_view word) const;
  std::size_t size() const { return weights_.size(); }
  const std::map<std::string, double, std::less<>>& entries() const { return weights_; }

  // Line-delimited `word<TAB>weight`.
  std::string serialize() const;
  // Throws DataError naming the offending line.
  static FkWeightTable parse(std::string_view text);

 private:
  std::map<std::string, double, std::less<>> weights_;
};

}  // namespace simplify
