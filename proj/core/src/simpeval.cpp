#include "simplify/simpeval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "simplify/parallel.hpp"
#include "simplify/readability.hpp"
#include "simplify/textseg.hpp"

namespace simplify {
namespace {

constexpr std::size_t kMaxSariOrder = 4;

using GramSet = std::set<NGram>;

GramSet gram_set(const std::vector<std::string>& words, std::size_t n) {
  GramSet out;
  for (auto& [gram, count] : extract_ngrams(words, n)) out.insert(gram);
  return out;
}

GramSet set_minus(const GramSet& a, const GramSet& b) {
  GramSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

GramSet set_and(const GramSet& a, const GramSet& b) {
  GramSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

// |cand & target| / |denominator|, with the vacuous-set convention.
double ratio(const GramSet& cand, const GramSet& target, const GramSet& denominator, const GramSet& other) {
  if (denominator.empty()) return other.empty() ? 1.0 : 0.0;
  return static_cast<double>(set_and(cand, target).size()) / static_cast<double>(denominator.size());
}

double precision(const GramSet& cand, const GramSet& target) { return ratio(cand, target, cand, target); }
double recall(const GramSet& cand, const GramSet& target) { return ratio(cand, target, target, cand); }

double f1(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

std::vector<std::vector<std::string>> sentence_words(std::string_view text) {
  const TokenList list = tokenize(text);
  std::vector<std::vector<std::string>> sentences;
  for (const auto& t : list.tokens) {
    if (!t.is_word) continue;
    if (sentences.size() <= t.sentence_index) sentences.resize(t.sentence_index + 1);
    sentences[t.sentence_index].push_back(to_lower(t.surface));
  }
  std::erase_if(sentences, [](const auto& s) { return s.empty(); });
  return sentences;
}

// Positions in `ref` of one LCS with `cand`, recovered by the usual
// backtrack from the end of both sequences.
std::vector<std::size_t> lcs_positions(const std::vector<std::string>& ref, const std::vector<std::string>& cand) {
  const std::size_t n = ref.size();
  const std::size_t m = cand.size();
  std::vector<std::vector<std::size_t>> table(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      table[i][j] = ref[i - 1] == cand[j - 1] ? table[i - 1][j - 1] + 1
                                               : std::max(table[i - 1][j], table[i][j - 1]);
    }
  }
  std::vector<std::size_t> positions;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 && j > 0) {
    if (ref[i - 1] == cand[j - 1]) {
      positions.push_back(i - 1);
      --i;
      --j;
    } else if (table[i][j - 1] > table[i - 1][j]) {
      --j;
    } else {
      --i;
    }
  }
  std::reverse(positions.begin(), positions.end());
  return positions;
}

std::map<std::string, std::size_t> word_counts(const std::vector<std::vector<std::string>>& sentences) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : sentences) {
    for (const auto& w : s) ++counts[w];
  }
  return counts;
}

std::string format_cell(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

std::vector<std::string> cells(const MetricBundle& m) {
  return {format_cell(m.fk),         format_cell(m.ari),        format_cell(m.consistency),
          format_cell(m.sari),       format_cell(m.rouge_lsum), format_cell(m.fourgram_overlap)};
}

const std::vector<std::string>& headers() {
  static const std::vector<std::string> kHeaders = {"id", "FK", "ARI", "BScr", "SARI", "RL", "4gram"};
  return kHeaders;
}

std::vector<std::vector<std::string>> report_lines(const EvalReport& report) {
  std::vector<std::vector<std::string>> lines{headers()};
  auto add = [&](const std::string& id, const MetricBundle& m) {
    std::vector<std::string> line{id};
    for (auto& c : cells(m)) line.push_back(std::move(c));
    lines.push_back(std::move(line));
  };
  for (const auto& row : report.rows) add(row.id, row.metrics);
  add("mean", report.mean);
  return lines;
}

}  // namespace

double sari(std::string_view source, std::string_view output, const std::vector<std::string>& references) {
  if (references.empty()) throw std::invalid_argument("sari: at least one reference required");
  const auto src_words = tokenize(source).lowercase_words();
  const auto out_words = tokenize(output).lowercase_words();
  std::vector<std::vector<std::string>> ref_words;
  for (const auto& r : references) ref_words.push_back(tokenize(r).lowercase_words());

  double total = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= kMaxSariOrder; ++n) {
    const GramSet src = gram_set(src_words, n);
    const GramSet out = gram_set(out_words, n);
    GramSet ref;
    for (const auto& r : ref_words) ref.merge(gram_set(r, n));
    if (src.empty() && out.empty() && ref.empty()) continue;

    const GramSet add_cand = set_minus(out, src);
    const GramSet add_target = set_minus(ref, src);
    const GramSet keep_cand = set_and(out, src);
    const GramSet keep_target = set_and(ref, src);
    const GramSet del_cand = set_minus(src, out);
    const GramSet del_target = set_minus(src, ref);

    const double add = f1(precision(add_cand, add_target), recall(add_cand, add_target));
    const double keep = f1(precision(keep_cand, keep_target), recall(keep_cand, keep_target));
    const double del = precision(del_cand, del_target);
    total += (add + keep + del) / 3.0;
    ++orders;
  }
  if (orders == 0) return 100.0;
  return 100.0 * total / static_cast<double>(orders);
}

double rouge_lsum(std::string_view output, std::string_view reference) {
  const auto out_sents = sentence_words(output);
  const auto ref_sents = sentence_words(reference);
  if (out_sents.empty() || ref_sents.empty()) throw std::invalid_argument("rouge_lsum: text has no words");

  auto ref_left = word_counts(ref_sents);
  auto out_left = word_counts(out_sents);
  std::size_t ref_total = 0;
  std::size_t out_total = 0;
  for (const auto& [w, c] : ref_left) ref_total += c;
  for (const auto& [w, c] : out_left) out_total += c;

  std::size_t hits = 0;
  for (const auto& ref : ref_sents) {
    std::set<std::size_t> union_positions;
    for (const auto& out : out_sents) {
      for (std::size_t p : lcs_positions(ref, out)) union_positions.insert(p);
    }
    for (std::size_t p : union_positions) {
      const auto& w = ref[p];
      if (ref_left[w] > 0 && out_left[w] > 0) {
        ++hits;
        --ref_left[w];
        --out_left[w];
      }
    }
  }
  const double p = static_cast<double>(hits) / static_cast<double>(out_total);
  const double r = static_cast<double>(hits) / static_cast<double>(ref_total);
  return f1(p, r);
}

std::optional<double> fourgram_overlap(std::string_view output, std::string_view source) {
  const auto out = gram_set(tokenize(output).lowercase_words(), 4);
  if (out.empty()) return std::nullopt;
  const auto src = gram_set(tokenize(source).lowercase_words(), 4);
  return 100.0 * static_cast<double>(set_and(out, src).size()) / static_cast<double>(out.size());
}

MetricBundle evaluate_document(const Document& doc, std::string_view output, const ConsistencyScorer& scorer) {
  MetricBundle m;
  const TokenList out_tokens = tokenize(output);
  const bool has_words = out_tokens.word_count() > 0;
  if (has_words) {
    m.fk = flesch_kincaid(out_tokens).value;
    m.ari = ari(out_tokens).value;
    m.consistency = scorer.score({output, doc.input, doc.id});
    m.rouge_lsum = rouge_lsum(output, doc.label);
  }
  m.sari = sari(doc.input, output, {doc.label});
  m.fourgram_overlap = fourgram_overlap(output, doc.input);
  return m;
}

EvalReport evaluate_corpus(const std::vector<Document>& documents, const std::vector<std::string>& outputs,
                           const ConsistencyScorer& scorer, std::size_t jobs) {
  if (documents.empty()) throw std::invalid_argument("evaluate_corpus: empty corpus");
  if (documents.size() != outputs.size()) {
    throw std::invalid_argument("evaluate_corpus: " + std::to_string(documents.size()) + " documents but " +
                                std::to_string(outputs.size()) + " outputs");
  }
  EvalReport report;
  report.rows.resize(documents.size());
  parallel_for(documents.size(), jobs, [&](std::size_t i) {
    report.rows[i] = {documents[i].id, evaluate_document(documents[i], outputs[i], scorer)};
  });

  auto mean_of = [&](auto field) -> std::optional<double> {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : report.rows) {
      if (const std::optional<double> v = field(row.metrics)) {
        sum += *v;
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  };
  report.mean.fk = mean_of([](const MetricBundle& m) { return m.fk; });
  report.mean.ari = mean_of([](const MetricBundle& m) { return m.ari; });
  report.mean.consistency = *mean_of([](const MetricBundle& m) { return std::optional(m.consistency); });
  report.mean.sari = *mean_of([](const MetricBundle& m) { return std::optional(m.sari); });
  report.mean.rouge_lsum = *mean_of([](const MetricBundle& m) { return std::optional(m.rouge_lsum); });
  report.mean.fourgram_overlap = mean_of([](const MetricBundle& m) { return m.fourgram_overlap; });
  return report;
}

std::string EvalReport::to_tsv() const {
  std::string out;
  for (const auto& line : report_lines(*this)) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out += '\t';
      out += line[i];
    }
    out += '\n';
  }
  return out;
}

std::string EvalReport::to_table() const {
  const auto lines = report_lines(*this);
  std::vector<std::size_t> width(headers().size(), 0);
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::string out;
  for (const auto& line : lines) {
    std::string row;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i == 0) {
        row += line[i] + std::string(width[i] - line[i].size(), ' ');
      } else {
        row += "  " + std::string(width[i] - line[i].size(), ' ') + line[i];
      }
    }
    out += row + '\n';
  }
  return out;
}

}  // namespace simplify
