#include "simplify/readability.hpp"

#include <algorithm>
#include <stdexcept>

#include "simplify/error.hpp"
#include "simplify/numeric_text.hpp"

namespace simplify {
namespace {

constexpr double kFkSentenceWeight = 0.39;
constexpr double kFkSyllableWeight = 11.8;
constexpr double kFkIntercept = -15.59;

constexpr double kAriCharWeight = 4.71;
constexpr double kAriSentenceWeight = 0.5;
constexpr double kAriIntercept = -21.43;

constexpr double kEasiestGrade = 4.0;
constexpr double kHardestGrade = 20.0;

std::size_t alnum_chars(std::string_view word) {
  std::size_t n = 0;
  for (char c : word) {
    const auto u = static_cast<unsigned char>(c);
    const bool ascii_alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    // Count UTF-8 lead bytes, not continuation bytes.
    if (ascii_alnum || (u >= 0xC0)) ++n;
  }
  return n;
}

TextCounts checked_counts(const TokenList& tokens, const char* what) {
  TextCounts counts = count_text(tokens);
  if (counts.words == 0) throw std::domain_error(std::string(what) + ": text has no words");
  return counts;
}

}  // namespace

TextCounts count_text(const TokenList& tokens) {
  TextCounts counts;
  for (const auto& t : tokens.tokens) {
    if (!t.is_word) continue;
    ++counts.words;
    counts.syllables += static_cast<std::size_t>(count_syllables(t.surface));
    counts.characters += alnum_chars(t.surface);
  }
  counts.sentences = tokens.sentence_count;
  return counts;
}

GradeScore flesch_kincaid(const TokenList& tokens) {
  const TextCounts c = checked_counts(tokens, "flesch_kincaid");
  const double words = static_cast<double>(c.words);
  return {kFkSentenceWeight * (words / static_cast<double>(c.sentences)) +
          kFkSyllableWeight * (static_cast<double>(c.syllables) / words) + kFkIntercept};
}

GradeScore flesch_kincaid(std::string_view text) { return flesch_kincaid(tokenize(text)); }

GradeScore flesch_kincaid(std::span<const std::string> words) {
  return flesch_kincaid(tokenize(join_words(words)));
}

GradeScore ari(const TokenList& tokens) {
  const TextCounts c = checked_counts(tokens, "ari");
  const double words = static_cast<double>(c.words);
  return {kAriCharWeight * (static_cast<double>(c.characters) / words) +
          kAriSentenceWeight * (words / static_cast<double>(c.sentences)) + kAriIntercept};
}

GradeScore ari(std::string_view text) { return ari(tokenize(text)); }

double word_fk(std::string_view word) {
  if (word.empty()) throw std::invalid_argument("word_fk: empty word");
  const double syllables = count_syllables(word);
  return std::max(0.0, kFkSentenceWeight + kFkSyllableWeight * syllables + kFkIntercept);
}

double readability_subscore(GradeScore fk) {
  if (fk.value < kEasiestGrade) return 1.0;
  if (fk.value > kHardestGrade) return 0.0;
  return (kHardestGrade - fk.value) / (kHardestGrade - kEasiestGrade);
}

FkWeightTable FkWeightTable::for_vocabulary(std::span<const std::string> vocabulary) {
  FkWeightTable table;
  for (const auto& entry : vocabulary) {
    const TokenList t = tokenize(entry);
    const bool single_word = t.tokens.size() == 1 && t.tokens.front().is_word &&
                             t.tokens.front().separator.empty() && t.trailing.empty();
    table.set(entry, single_word ? word_fk(entry) : 0.0);
  }
  return table;
}

void FkWeightTable::set(std::string word, double weight) {
  if (!(weight >= 0.0)) throw std::invalid_argument("FkWeightTable: negative weight for '" + word + "'");
  weights_.insert_or_assign(std::move(word), weight);
}

double FkWeightTable::at(std::string_view word) const {
  const auto it = weights_.find(word);
  if (it == weights_.end()) {
    throw std::out_of_range("FkWeightTable: no weight for '" + std::string(word) + "'");
  }
  return it->second;
}

bool FkWeightTable::contains(std::string_view word) const { return weights_.find(word) != weights_.end(); }

std::string FkWeightTable::serialize() const {
  std::string out;
  for (const auto& [word, weight] : weights_) {
    out += word;
    out += '\t';
    out += format_double(weight);
    out += '\n';
  }
  return out;
}

FkWeightTable FkWeightTable::parse(std::string_view text) {
  FkWeightTable table;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError("line " + std::to_string(line_no) + ": expected word<TAB>weight");
    }
    const auto weight = parse_double(line.substr(tab + 1));
    if (!weight || *weight < 0.0) {
      throw DataError("line " + std::to_string(line_no) + ": invalid weight");
    }
    table.set(std::string(line.substr(0, tab)), *weight);
  }
  return table;
}

}  // namespace simplify
