#pragma once

// Deterministic text segmentation shared by every other module: tokenization,
// sentence boundaries, syllable estimation, n-grams and rule-based entities.

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simplify {

struct Token {
  std::string surface;
  std::string separator;  // whitespace between the previous token and this one
  bool is_word = false;
  bool is_numeric = false;
  bool is_capitalized = false;
  std::size_t sentence_index = 0;
  bool is_sentence_initial = false;
};

struct TokenList {
  std::vector<Token> tokens;
  std::string trailing;  // whitespace after the last token
  std::size_t sentence_count = 0;

  // Concatenation of separators, surfaces and trailing whitespace; equals the
  // text passed to tokenize().
  std::string reconstruct() const;
  std::size_t word_count() const;
  // Lowercased surfaces of the word tokens, in order.
  std::vector<std::string> lowercase_words() const;
};

using EntitySet = std::set<std::string>;

using NGram = std::vector<std::string>;
using NGramCounts = std::map<NGram, std::size_t>;

// Words are maximal runs of letters/digits (bytes >= 0x80 count as letters so
// UTF-8 text stays intact) with internal apostrophes or hyphens. Digit runs
// may contain internal '.' or ',' followed by a digit ("0.73", "3,639").
// Every other non-space character is a one-character punctuation token.
// Sentence indices are assigned as by split_sentences().
TokenList tokenize(std::string_view text);

struct SentenceSplit {
  std::size_t count = 0;
  std::vector<std::size_t> sentence_index;  // one entry per token
};

// Boundaries fall after '.', '!' or '?' followed by whitespace or end of text,
// unless the period closes a known abbreviation. Only sentences containing at
// least one word are counted.
SentenceSplit split_sentences(std::string_view text);

// Abbreviations whose final period never ends a sentence, lowercased and
// including the period ("e.g.", "vs.", "dr.", ...).
const std::set<std::string, std::less<>>& sentence_abbreviations();

// Vowel-group syllable estimate. Throws std::invalid_argument unless `word`
// is a single word token.
int count_syllables(std::string_view word);

// Contiguous windows of length n over lowercased words. Throws
// std::invalid_argument when n == 0.
NGramCounts extract_ngrams(std::span<const std::string> words, std::size_t n);

struct EntityOptions {
  // Treat every capitalized word as an entity candidate, including the first
  // word of a sentence. Used for decoder word lists, which carry no reliable
  // sentence structure.
  bool sentence_initial_capitals = false;
};

// Rule-based entity extraction:
//   R1 maximal spans of capitalized words that are not sentence-initial,
//   R2 sentence-initial capitalized words also seen capitalized mid-sentence,
//   R3 numeric tokens.
// The pronoun "I" is never an entity.
EntitySet extract_entities(const TokenList& tokens, EntityOptions options = {});
EntitySet extract_entities(std::string_view text, EntityOptions options = {});

std::string to_lower(std::string_view s);

// Joins words with single spaces.
std::string join_words(std::span<const std::string> words);

// Joins words into display text: no space before closing punctuation, none
// after opening brackets.
std::string detokenize(std::span<const std::string> words);

}  // namespace simplify
