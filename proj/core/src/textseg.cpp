#include "simplify/textseg.hpp"

#include <algorithm>
#include <stdexcept>

namespace simplify {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_word_char(char c) {
  return is_ascii_letter(c) || is_digit(c) || static_cast<unsigned char>(c) >= 0x80;
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

bool is_vowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      return false;
  }
}

bool is_consonant(char c) { return c >= 'a' && c <= 'z' && !is_vowel(c); }

bool all_numeric(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (is_digit(c)) {
      digit = true;
    } else if (c != '.' && c != ',') {
      return false;
    }
  }
  return digit;
}

bool is_terminator(const Token& t) {
  return t.surface == "." || t.surface == "!" || t.surface == "?";
}

bool is_closer(const Token& t) {
  return t.surface == ")" || t.surface == "]" || t.surface == "\"" || t.surface == "'";
}

bool is_opener(char c) { return c == '(' || c == '[' || c == '"' || c == '\''; }

// Lowercased text of the whitespace-free chunk ending at token `end`.
std::string chunk_ending_at(const std::vector<Token>& tokens, std::size_t end) {
  std::size_t begin = end;
  while (begin > 0 && tokens[begin].separator.empty()) --begin;
  std::string chunk;
  for (std::size_t i = begin; i <= end; ++i) chunk += tokens[i].surface;
  std::size_t skip = 0;
  while (skip < chunk.size() && is_opener(chunk[skip])) ++skip;
  return to_lower(std::string_view(chunk).substr(skip));
}

std::vector<Token> scan_tokens(std::string_view text, std::string& trailing) {
  std::vector<Token> tokens;
  std::string sep;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (is_space(c)) {
      sep += c;
      ++i;
      continue;
    }
    Token tok;
    tok.separator = std::move(sep);
    sep.clear();
    if (is_word_char(c)) {
      std::size_t j = i + 1;
      bool digits_only = is_digit(c);
      while (j < n) {
        const char d = text[j];
        if (is_word_char(d)) {
          digits_only = digits_only && is_digit(d);
          ++j;
        } else if ((d == '\'' || d == '-') && j + 1 < n && is_word_char(text[j + 1])) {
          digits_only = false;
          j += 1;
        } else if ((d == '.' || d == ',') && digits_only && is_digit(text[j - 1]) &&
                   j + 1 < n && is_digit(text[j + 1])) {
          j += 1;
        } else {
          break;
        }
      }
      tok.surface = std::string(text.substr(i, j - i));
      tok.is_word = true;
      tok.is_numeric = all_numeric(tok.surface);
      tok.is_capitalized = is_upper(tok.surface.front());
      i = j;
    } else {
      tok.surface = std::string(1, c);
      ++i;
    }
    tokens.push_back(std::move(tok));
  }
  trailing = std::move(sep);
  return tokens;
}

// Assigns sentence indices in place and returns the number of sentences that
// contain at least one word.
std::size_t assign_sentences(std::vector<Token>& tokens) {
  const auto& abbreviations = sentence_abbreviations();
  std::size_t current = 0;
  bool has_word = false;
  bool seen_word_in_sentence = false;
  std::size_t i = 0;
  while (i < tokens.size()) {
    Token& tok = tokens[i];
    tok.sentence_index = current;
    if (tok.is_word) {
      tok.is_sentence_initial = !seen_word_in_sentence;
      seen_word_in_sentence = true;
      has_word = true;
    }
    if (!is_terminator(tok)) {
      ++i;
      continue;
    }
    if (tok.surface == "." && abbreviations.contains(chunk_ending_at(tokens, i))) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < tokens.size() && tokens[j].separator.empty() && is_closer(tokens[j])) {
      tokens[j].sentence_index = current;
      ++j;
    }
    const bool boundary = j == tokens.size() || !tokens[j].separator.empty();
    if (boundary && has_word) {
      ++current;
      has_word = false;
      seen_word_in_sentence = false;
    }
    i = j;
  }
  return has_word ? current + 1 : current;
}

}  // namespace

std::string TokenList::reconstruct() const {
  std::string out;
  for (const auto& t : tokens) {
    out += t.separator;
    out += t.surface;
  }
  out += trailing;
  return out;
}

std::size_t TokenList::word_count() const {
  return static_cast<std::size_t>(
      std::count_if(tokens.begin(), tokens.end(), [](const Token& t) { return t.is_word; }));
}

std::vector<std::string> TokenList::lowercase_words() const {
  std::vector<std::string> words;
  for (const auto& t : tokens) {
    if (t.is_word) words.push_back(to_lower(t.surface));
  }
  return words;
}

const std::set<std::string, std::less<>>& sentence_abbreviations() {
  static const std::set<std::string, std::less<>> kAbbreviations = {
      "e.g.", "i.e.", "vs.", "dr.", "fig.", "figs.", "al.", "mr.", "mrs.", "ms.",
      "prof.", "approx.", "cf.", "no.", "st.", "jr.", "sr.", "ref.",
  };
  return kAbbreviations;
}

TokenList tokenize(std::string_view text) {
  TokenList list;
  list.tokens = scan_tokens(text, list.trailing);
  list.sentence_count = assign_sentences(list.tokens);
  return list;
}

SentenceSplit split_sentences(std::string_view text) {
  const TokenList list = tokenize(text);
  SentenceSplit split;
  split.count = list.sentence_count;
  split.sentence_index.reserve(list.tokens.size());
  for (const auto& t : list.tokens) split.sentence_index.push_back(t.sentence_index);
  return split;
}

int count_syllables(std::string_view word) {
  const TokenList list = tokenize(word);
  if (list.tokens.size() != 1 || !list.tokens.front().is_word ||
      !list.tokens.front().separator.empty() || !list.trailing.empty()) {
    throw std::invalid_argument("count_syllables: not a single word: '" + std::string(word) + "'");
  }
  const std::string w = to_lower(word);
  int groups = 0;
  bool in_group = false;
  for (char c : w) {
    const bool vowel = is_vowel(c);
    if (vowel && !in_group) ++groups;
    in_group = vowel;
  }
  const std::size_t n = w.size();
  if (n >= 2 && w[n - 1] == 'e' && is_consonant(w[n - 2])) {
    const bool consonant_le = w[n - 2] == 'l' && n >= 3 && is_consonant(w[n - 3]);
    if (!consonant_le) --groups;
  }
  return std::max(groups, 1);
}

NGramCounts extract_ngrams(std::span<const std::string> words, std::size_t n) {
  if (n == 0) throw std::invalid_argument("extract_ngrams: n must be positive");
  NGramCounts counts;
  if (words.size() < n) return counts;
  for (std::size_t i = 0; i + n <= words.size(); ++i) {
    NGram gram;
    gram.reserve(n);
    for (std::size_t j = i; j < i + n; ++j) gram.push_back(to_lower(words[j]));
    ++counts[std::move(gram)];
  }
  return counts;
}

EntitySet extract_entities(const TokenList& list, EntityOptions options) {
  const auto& tokens = list.tokens;
  auto capital_candidate = [](const Token& t) {
    return t.is_word && t.is_capitalized && !t.is_numeric && t.surface != "I";
  };

  std::set<std::string> mid_sentence_capitals;
  for (const auto& t : tokens) {
    if (capital_candidate(t) && !t.is_sentence_initial) mid_sentence_capitals.insert(t.surface);
  }
  auto eligible = [&](const Token& t) {
    if (!capital_candidate(t)) return false;
    return !t.is_sentence_initial || options.sentence_initial_capitals ||
           mid_sentence_capitals.contains(t.surface);
  };

  EntitySet entities;
  std::string span;
  auto flush = [&] {
    if (!span.empty()) entities.insert(std::move(span));
    span.clear();
  };
  for (const auto& t : tokens) {
    if (t.is_numeric) {
      flush();
      entities.insert(t.surface);
      continue;
    }
    if (eligible(t)) {
      // Spans continue across whitespace only and stop at sentence starts.
      if (!span.empty() && (t.separator.empty() || t.is_sentence_initial)) flush();
      if (!span.empty()) span += ' ';
      span += t.surface;
    } else {
      flush();
    }
  }
  flush();
  return entities;
}

EntitySet extract_entities(std::string_view text, EntityOptions options) {
  return extract_entities(tokenize(text), options);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string join_words(std::span<const std::string> words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string detokenize(std::span<const std::string> words) {
  static const std::set<std::string, std::less<>> kNoSpaceBefore = {
      ".", ",", ";", ":", "!", "?", ")", "]", "}", "%"};
  static const std::set<std::string, std::less<>> kNoSpaceAfter = {"(", "[", "{"};
  std::string out;
  bool suppress = true;
  for (const auto& w : words) {
    if (!suppress && !kNoSpaceBefore.contains(w)) out += ' ';
    out += w;
    suppress = kNoSpaceAfter.contains(w);
  }
  return out;
}

}  // namespace simplify
