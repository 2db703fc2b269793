#pragma once

// Brute-force metric references over whitespace-separated lowercase tokens
// (no punctuation, single sentence). n-grams are enumerated as joined
// strings, LCS by trying every subset of reference positions.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

inline std::vector<std::string> split_ws(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::set<std::string> grams(const std::vector<std::string>& w, std::size_t n) {
  std::set<std::string> out;
  for (std::size_t i = 0; i + n <= w.size(); ++i) {
    std::string g;
    for (std::size_t j = i; j < i + n; ++j) g += w[j] + "\x1f";
    out.insert(g);
  }
  return out;
}

inline std::size_t count_in(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t c = 0;
  for (const auto& g : a) c += b.count(g);
  return c;
}

inline double oracle_precision(const std::set<std::string>& cand, const std::set<std::string>& target) {
  if (cand.empty()) return target.empty() ? 1.0 : 0.0;
  return static_cast<double>(count_in(cand, target)) / static_cast<double>(cand.size());
}

inline double oracle_recall(const std::set<std::string>& cand, const std::set<std::string>& target) {
  if (target.empty()) return cand.empty() ? 1.0 : 0.0;
  return static_cast<double>(count_in(cand, target)) / static_cast<double>(target.size());
}

inline double oracle_f1(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

inline double oracle_sari(const std::string& source, const std::string& output, const std::vector<std::string>& refs) {
  const auto s = split_ws(source);
  const auto o = split_ws(output);
  double total = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto S = grams(s, n);
    const auto O = grams(o, n);
    std::set<std::string> R;
    for (const auto& r : refs) {
      const auto g = grams(split_ws(r), n);
      R.insert(g.begin(), g.end());
    }
    if (S.empty() && O.empty() && R.empty()) continue;
    std::set<std::string> add_c, add_t, keep_c, keep_t, del_c, del_t;
    for (const auto& g : O) (S.count(g) ? keep_c : add_c).insert(g);
    for (const auto& g : R) (S.count(g) ? keep_t : add_t).insert(g);
    for (const auto& g : S) {
      if (!O.count(g)) del_c.insert(g);
      if (!R.count(g)) del_t.insert(g);
    }
    const double add = oracle_f1(oracle_precision(add_c, add_t), oracle_recall(add_c, add_t));
    const double keep = oracle_f1(oracle_precision(keep_c, keep_t), oracle_recall(keep_c, keep_t));
    const double del = oracle_precision(del_c, del_t);
    total += (add + keep + del) / 3.0;
    ++orders;
  }
  if (orders == 0) return 100.0;
  return 100.0 * total / static_cast<double>(orders);
}

inline bool is_subsequence(const std::vector<std::string>& needle, const std::vector<std::string>& hay) {
  std::size_t j = 0;
  for (const auto& w : hay)
    if (j < needle.size() && needle[j] == w) ++j;
  return j == needle.size();
}

inline std::size_t brute_force_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << a.size()); ++mask) {
    std::vector<std::string> sub;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (mask & (std::size_t{1} << i)) sub.push_back(a[i]);
    if (sub.size() > best && is_subsequence(sub, b)) best = sub.size();
  }
  return best;
}

// Single-sentence texts: the union LCS is one LCS, so hits = LCS length.
inline std::optional<double> oracle_rouge_l(const std::string& output, const std::string& reference) {
  const auto o = split_ws(output);
  const auto r = split_ws(reference);
  if (o.empty() || r.empty()) return std::nullopt;
  const double hits = static_cast<double>(brute_force_lcs(r, o));
  return oracle_f1(hits / static_cast<double>(o.size()), hits / static_cast<double>(r.size()));
}

inline std::optional<double> oracle_fourgram(const std::string& output, const std::string& source) {
  const auto O = grams(split_ws(output), 4);
  if (O.empty()) return std::nullopt;
  const auto S = grams(split_ws(source), 4);
  return 100.0 * static_cast<double>(count_in(O, S)) / static_cast<double>(O.size());
}

}  // namespace oracle
