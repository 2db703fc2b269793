#include "simplify/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "simplify/error.hpp"
#include "simplify/numeric_text.hpp"

namespace simplify {
namespace {

constexpr double kConsistencyFloor = 0.60;

// Sorted (packed trigram, count) pairs of a '#'-padded, lowercased word.
struct TrigramVector {
  std::vector<std::pair<std::uint32_t, int>> counts;
  double norm = 0.0;
};

TrigramVector make_vector(std::string_view word) {
  const std::string padded = "#" + to_lower(word) + "#";
  std::vector<std::uint32_t> keys;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    keys.push_back(static_cast<std::uint32_t>(static_cast<unsigned char>(padded[i])) << 16 |
                   static_cast<std::uint32_t>(static_cast<unsigned char>(padded[i + 1])) << 8 |
                   static_cast<unsigned char>(padded[i + 2]));
  }
  std::sort(keys.begin(), keys.end());
  TrigramVector v;
  for (std::uint32_t k : keys) {
    if (v.counts.empty() || v.counts.back().first != k) {
      v.counts.emplace_back(k, 1);
    } else {
      ++v.counts.back().second;
    }
  }
  double sq = 0.0;
  for (const auto& [gram, count] : v.counts) sq += static_cast<double>(count) * count;
  v.norm = std::sqrt(sq);
  return v;
}

double cosine(const TrigramVector& a, const TrigramVector& b) {
  if (a.norm == 0.0 || b.norm == 0.0) return 0.0;
  double dot = 0.0;
  auto ia = a.counts.begin();
  auto ib = b.counts.begin();
  while (ia != a.counts.end() && ib != b.counts.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += static_cast<double>(ia->second) * ib->second;
      ++ia;
      ++ib;
    }
  }
  // Clamp rounding so identical words score exactly 1.
  return std::min(1.0, dot / (a.norm * b.norm));
}

// Distinct words with their vectors, plus the distinct index of every token.
struct WordProfile {
  std::vector<TrigramVector> vectors;
  std::vector<std::size_t> token_index;
};

WordProfile profile_of(const std::vector<std::string>& words) {
  WordProfile p;
  std::unordered_map<std::string_view, std::size_t> seen;
  p.token_index.reserve(words.size());
  for (const auto& w : words) {
    const auto [it, fresh] = seen.emplace(w, p.vectors.size());
    if (fresh) p.vectors.push_back(make_vector(w));
    p.token_index.push_back(it->second);
  }
  return p;
}

double token_mean(const WordProfile& p, const std::vector<double>& best) {
  double total = 0.0;
  for (std::size_t idx : p.token_index) total += best[idx];
  return total / static_cast<double>(p.token_index.size());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

double trigram_similarity(std::string_view a, std::string_view b) {
  return cosine(make_vector(a), make_vector(b));
}

double LexicalScorer::score(const ScoreQuery& query) const {
  const auto candidate = tokenize(query.candidate).lowercase_words();
  if (candidate.empty()) throw std::invalid_argument("lexical_score: candidate has no words");
  const auto source = tokenize(query.source).lowercase_words();
  if (source.empty()) return 0.0;
  const WordProfile cand = profile_of(candidate);
  const WordProfile src = profile_of(source);
  // Best match of every distinct candidate word against the source and back.
  std::vector<double> best_cand(cand.vectors.size(), 0.0);
  std::vector<double> best_src(src.vectors.size(), 0.0);
  for (std::size_t i = 0; i < cand.vectors.size(); ++i) {
    for (std::size_t j = 0; j < src.vectors.size(); ++j) {
      const double sim = cosine(cand.vectors[i], src.vectors[j]);
      best_cand[i] = std::max(best_cand[i], sim);
      best_src[j] = std::max(best_src[j], sim);
    }
  }
  const double precision = token_mean(cand, best_cand);
  const double recall = token_mean(src, best_src);
  if (precision + recall == 0.0) return 0.0;
  return std::clamp(2.0 * precision * recall / (precision + recall), 0.0, 1.0);
}

double lexical_score(std::string_view candidate, std::string_view source) {
  return LexicalScorer{}.score({candidate, source});
}

PrecomputedScorer::PrecomputedScorer(std::map<std::string, double, std::less<>> scores)
    : scores_(std::move(scores)) {
  for (const auto& [key, value] : scores_) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw DataError("precomputed score for '" + key + "' outside [0,1]");
    }
  }
}

PrecomputedScorer PrecomputedScorer::parse(std::string_view text) {
  std::map<std::string, double, std::less<>> scores;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (tab == std::string_view::npos) throw DataError(where + "expected candidate_id<TAB>score");
    const auto value = parse_double(line.substr(tab + 1));
    if (!value || *value < 0.0 || *value > 1.0) throw DataError(where + "score must be a decimal in [0,1]");
    if (!scores.emplace(std::string(line.substr(0, tab)), *value).second) {
      throw DataError(where + "duplicate candidate id '" + std::string(line.substr(0, tab)) + "'");
    }
  }
  return PrecomputedScorer(std::move(scores));
}

PrecomputedScorer PrecomputedScorer::load(const std::string& path) { return parse(read_file(path)); }

double PrecomputedScorer::score(const ScoreQuery& query) const {
  const std::string_view key = query.candidate_id.empty() ? query.candidate : query.candidate_id;
  const auto it = scores_.find(key);
  if (it == scores_.end()) throw DataError("no precomputed score for '" + std::string(key) + "'");
  return it->second;
}

double consistency_subscore(double f_b) {
  if (!(f_b >= 0.0 && f_b <= 1.0)) {
    throw std::invalid_argument("consistency_subscore: f_B outside [0,1]");
  }
  if (f_b < kConsistencyFloor) return 0.0;
  return (f_b - kConsistencyFloor) / (1.0 - kConsistencyFloor);
}

EntitySet HeuristicEntityExtractor::extract(const TokenList& tokens) const {
  return extract_entities(tokens, options_);
}

LexiconEntityExtractor::LexiconEntityExtractor(std::vector<std::string> entities) {
  for (auto& e : entities) {
    auto words = tokenize(e).lowercase_words();
    if (words.empty()) continue;
    entries_.push_back({std::move(e), std::move(words)});
  }
}

LexiconEntityExtractor LexiconEntityExtractor::parse(std::string_view text) {
  std::vector<std::string> entities;
  for (const auto& line : split_lines(text)) {
    const auto entity = trim(line.substr(0, line.find('\t')));
    if (!entity.empty()) entities.emplace_back(entity);
  }
  return LexiconEntityExtractor(std::move(entities));
}

LexiconEntityExtractor LexiconEntityExtractor::load(const std::string& path) {
  return parse(read_file(path));
}

EntitySet LexiconEntityExtractor::extract(const TokenList& tokens) const {
  const auto words = tokens.lowercase_words();
  EntitySet found;
  for (const auto& entry : entries_) {
    if (contains_sequence(words, entry.words)) found.insert(entry.surface);
  }
  return found;
}

const EntityExtractor& default_entity_extractor() {
  static const HeuristicEntityExtractor kDefault;
  return kDefault;
}

bool contains_sequence(const std::vector<std::string>& haystack, const std::vector<std::string>& needle) {
  if (needle.empty()) return true;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

EntitySet unsupported_entities(const TokenList& candidate, const std::vector<std::string>& source_words,
                               const EntityExtractor& extractor) {
  EntitySet unsupported;
  for (const auto& entity : extractor.extract(candidate)) {
    if (!contains_sequence(source_words, tokenize(entity).lowercase_words())) unsupported.insert(entity);
  }
  return unsupported;
}

EntitySet unsupported_entities(std::string_view candidate, std::string_view source,
                               const EntityExtractor& extractor) {
  return unsupported_entities(tokenize(candidate), tokenize(source).lowercase_words(), extractor);
}

}  // namespace simplify
