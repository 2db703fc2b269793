#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simplify/consistency.hpp"
#include "simplify/document.hpp"

namespace simplify {

// SARI in [0,100] over n-gram orders 1..4, with set-valued operations:
//   add  = output \ source   graded against references \ source (F1)
//   keep = output & source   graded against references & source (F1)
//   del  = source \ output   graded against source \ references (precision)
// References are pooled by set union. A precision (recall) with an empty
// candidate (target) set scores 1 when the other set is empty too, else 0.
// Orders without any n-gram in source, output or
// references are left out of the mean; texts with no words at all score 100.
// Throws std::invalid_argument for an empty reference list.
double sari(std::string_view source, std::string_view output, const std::vector<std::string>& references);

// Summary-level ROUGE-L F1 in [0,1]: for each reference sentence, the union
// of its LCS positions against every output sentence; hits are clipped by the
// remaining word counts on both sides. Throws std::invalid_argument when
// either text has no words.
double rouge_lsum(std::string_view output, std::string_view reference);

// Percentage of distinct output 4-grams that occur in the source; nullopt
// when the output has fewer than 4 words.
std::optional<double> fourgram_overlap(std::string_view output, std::string_view source);

struct MetricBundle {
  std::optional<double> fk;   // absent when the output has no words
  std::optional<double> ari;  // absent when the output has no words
  double consistency = 0.0;   // f_B of output against source
  double sari = 0.0;
  double rouge_lsum = 0.0;
  std::optional<double> fourgram_overlap;
};

struct ReportRow {
  std::string id;
  MetricBundle metrics;
};

struct EvalReport {
  std::vector<ReportRow> rows;
  MetricBundle mean;  // optional fields averaged over defined entries only

  // Header `id FK ARI BScr SARI RL 4gram`, one line per document and a final
  // `mean` line; undefined values are written as `NA`.
  std::string to_tsv() const;
  // Same columns, space-aligned.
  std::string to_table() const;
};

MetricBundle evaluate_document(const Document& doc, std::string_view output, const ConsistencyScorer& scorer);

// Throws std::invalid_argument when the sizes differ or the corpus is empty.
// `jobs` > 1 evaluates documents on a worker pool; results keep input order.
EvalReport evaluate_corpus(const std::vector<Document>& documents, const std::vector<std::string>& outputs,
                           const ConsistencyScorer& scorer, std::size_t jobs = 1);

}  // namespace simplify
