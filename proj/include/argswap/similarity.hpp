#pragma once

// Abbreviation-aware morpheme similarity.
//
// Morphemes that do not share a first character score 0. Otherwise every
// character that has to be deleted (from either morpheme) to leave a common
// subsequence is charged a penalty: vowels cost 0.25, consonants 1.0, a
// trailing 's' is free (singular/plural), and the cost fades linearly toward
// the end of the string. The summed penalty is normalized by the longer
// length, so longer morphemes tolerate more missing characters.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace argswap {

struct SynonymTable {
  // Stored with the lexicographically smaller token first.
  std::set<std::pair<std::string, std::string>> pairs;

  void add(const std::string& a, const std::string& b) {
    if (a == b) return;
    pairs.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
  }

  bool contains(const std::string& a, const std::string& b) const {
    if (a == b) return false;
    return pairs.count(a < b ? std::make_pair(a, b) : std::make_pair(b, a)) > 0;
  }

  bool empty() const { return pairs.empty(); }

  // File format: one `token,token` pair per line; blank lines and lines
  // starting with '#' are ignored.
  static SynonymTable load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open synonym file: " + path);
    SynonymTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      auto comma = line.find(',');
      if (comma == std::string::npos || comma == 0 || comma + 1 == line.size())
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected `token,token`");
      table.add(line.substr(0, comma), line.substr(comma + 1));
    }
    return table;
  }
};

namespace detail {

inline bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// Penalty for deleting character at `index` of a string of length `n`.
inline double deletion_penalty(char c, std::size_t index, std::size_t n) {
  if (c == 's' && index == n - 1) return 0.0;
  double base = is_vowel(c) ? 0.25 : 1.0;
  return base * static_cast<double>(n - index) / static_cast<double>(n);
}

// Marks the characters of `a` and `b` that belong to a leftmost-greedy
// longest common subsequence (matches with the smallest index sums win).
inline void mark_lcs(const std::string& a, const std::string& b,
                     std::vector<char>& in_a, std::vector<char>& in_b) {
  const std::size_t n = a.size(), m = b.size();
  // dp[i][j] = LCS length of a[i:], b[j:]
  std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      dp[i][j] = a[i] == b[j] ? dp[i + 1][j + 1] + 1
                              : std::max(dp[i + 1][j], dp[i][j + 1]);
  in_a.assign(n, 0);
  in_b.assign(m, 0);
  std::size_t i = 0, j = 0;
  while (i < n && j < m && dp[i][j] > 0) {
    if (a[i] == b[j] && dp[i][j] == dp[i + 1][j + 1] + 1) {
      in_a[i] = in_b[j] = 1;
      ++i, ++j;
    } else if (dp[i + 1][j] > dp[i][j + 1]) {
      ++i;
    } else if (dp[i + 1][j] < dp[i][j + 1]) {
      ++j;
    } else {
      // Tie: advance the side whose remaining suffix orders first, so the
      // result does not depend on argument order.
      if (a.compare(i, n - i, b, j, m - j) <= 0) ++i; else ++j;
    }
  }
}

}  // namespace detail

// The ~ metric. Symmetric, in [0, 1], 1 for identical morphemes and for
// synonym pairs, 0 when the first characters differ.
inline double sim(const std::string& m1, const std::string& m2,
                  const SynonymTable* synonyms = nullptr) {
  if (m1.empty() || m2.empty()) return 0.0;
  if (m1 == m2) return 1.0;
  if (synonyms && synonyms->contains(m1, m2)) return 1.0;
  if (m1[0] != m2[0]) return 0.0;

  std::vector<char> in1, in2;
  detail::mark_lcs(m1, m2, in1, in2);
  double total = 0.0;
  for (std::size_t i = 0; i < m1.size(); ++i)
    if (!in1[i]) total += detail::deletion_penalty(m1[i], i, m1.size());
  for (std::size_t i = 0; i < m2.size(); ++i)
    if (!in2[i]) total += detail::deletion_penalty(m2[i], i, m2.size());

  double longer = static_cast<double>(std::max(m1.size(), m2.size()));
  return std::max(0.0, 1.0 - total / longer);
}

}  // namespace argswap
