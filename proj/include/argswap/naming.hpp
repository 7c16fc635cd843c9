#pragma once

// Name extraction and morpheme splitting.
//
// Splitting runs in two stages. Stage 1 cuts on underscores, digit runs,
// non-ASCII bytes and lower-to-upper case transitions; an uppercase run
// followed by lowercase splits before its last letter ("XMLFile" -> xml,
// file). Stage 2 greedily sub-splits residual tokens using a corpus
// frequency table and an English wordlist, which is how "sigkill" becomes
// {sig, kill} and "cpid" becomes {c, pid}.

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "argswap/types.hpp"

namespace argswap {

using MorphemeSet = std::set<std::string>;

// ---------------------------------------------------------------------------
// Name extraction from argument expressions.

// Returns the name of an argument expression, or nothing for string
// literals and anything else that carries no name.
inline std::optional<std::string> extract_name(const ArgExpr& expr) {
  switch (expr.kind) {
    case ExprKind::Identifier:
    case ExprKind::MacroIdentifier:
    case ExprKind::NonStringLiteral:
      return expr.text;
    case ExprKind::This:
      return std::string("this");
    case ExprKind::Sizeof:
      return std::string("sizeof");
    case ExprKind::Paren:
    case ExprKind::PrefixIncDec:
    case ExprKind::PostfixIncDec:
    case ExprKind::UnaryOp:
    case ExprKind::Cast:
    case ExprKind::Index:
    case ExprKind::Call:
      if (expr.children.empty()) return std::nullopt;
      return extract_name(expr.children.front());
    case ExprKind::Member:
      // a.b / a->b / a::b: the member name.
      if (expr.children.size() < 2) return std::nullopt;
      return extract_name(expr.children.back());
    case ExprKind::StringLiteral:
    case ExprKind::Other:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Supporting tables.

struct FrequencyTable {
  std::map<std::string, long> counts;
  // Tokens need this many corpus occurrences before stage 2 trusts them.
  long min_count = 5;

  long count(const std::string& token) const {
    auto it = counts.find(token);
    return it == counts.end() ? 0 : it->second;
  }

  bool trusted(const std::string& token) const {
    return count(token) >= min_count;
  }

  void save(std::ostream& out) const {
    out << "argswap-freq v1\n";
    for (const auto& [token, n] : counts) out << token << '\t' << n << '\n';
  }

  void save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write frequency table: " + path);
    save(out);
  }

  static FrequencyTable load(std::istream& in, const std::string& origin) {
    FrequencyTable table;
    std::string line;
    if (!std::getline(in, line) || line.rfind("argswap-freq v1", 0) != 0)
      throw std::runtime_error(origin + ": not an argswap frequency table");
    int line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                 ": expected `token<TAB>count`");
      table.counts[line.substr(0, tab)] = std::stol(line.substr(tab + 1));
    }
    return table;
  }

  static FrequencyTable load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open frequency table: " + path);
    return load(in, path);
  }
};

struct WordList {
  std::set<std::string> words;

  bool contains(const std::string& w) const { return words.count(w) > 0; }

  // One lowercase word per line.
  static WordList load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open wordlist: " + path);
    WordList list;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] != '#') list.words.insert(line);
    }
    return list;
  }
};

struct StopList {
  std::set<std::string> words;

  StopList() = default;
  explicit StopList(std::set<std::string> w) : words(std::move(w)) {}

  bool contains(const std::string& w) const { return words.count(w) > 0; }

  static StopList defaults() {
    return StopList({"get", "set", "is", "to", "my", "the", "a", "an", "i",
                     "j", "k", "n", "m", "t", "p", "s"});
  }

  static StopList load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stop list: " + path);
    StopList list;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] != '#') list.words.insert(line);
    }
    return list;
  }
};

// Everything split() needs. The referenced tables must outlive the context.
struct SplitContext {
  const FrequencyTable* freq = nullptr;
  const WordList* words = nullptr;
  StopList stops = StopList::defaults();

  bool known(const std::string& token) const {
    if (words && words->contains(token)) return true;
    return freq && freq->trusted(token);
  }

  bool table_trusted(const std::string& token) const {
    return freq && freq->trusted(token);
  }
};

// ---------------------------------------------------------------------------
// Splitting.

// Stage 1: underscore/digit/non-ASCII boundaries and case transitions,
// lowercased. "origSrcPort" -> {orig, src, port}; "LIBNET_TCP_H" ->
// {libnet, tcp, h}; digits never survive.
inline std::vector<std::string> stage1_tokens(const std::string& name) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(current);
    current.clear();
  };
  unsigned char prev = 0;
  for (std::size_t idx = 0; idx < name.size(); ++idx) {
    unsigned char c = static_cast<unsigned char>(name[idx]);
    if (c >= 0x80 || !std::isalpha(c)) {
      flush();
      prev = 0;
      continue;
    }
    if (std::isupper(c)) {
      if (prev && std::islower(prev)) flush();  // lower -> upper
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      // An uppercase run followed by lowercase keeps only its last letter:
      // "XMLFile" breaks between "XML" and "File".
      if (prev && std::isupper(prev) && current.size() > 1) {
        char last = current.back();
        current.pop_back();
        flush();
        current.push_back(last);
      }
      current.push_back(static_cast<char>(c));
    }
    prev = c;
  }
  flush();
  return tokens;
}

namespace detail {

struct GreedySplitter {
  const SplitContext& ctx;
  int backtracks_left = 3;

  // Repeatedly takes the longest known prefix (length >= 2, or a single
  // character when the whole remainder is frequency-table-backed).
  bool decompose(const std::string& token, std::vector<std::string>& out) {
    if (token.empty()) return true;
    for (std::size_t len = token.size(); len >= 2; --len) {
      std::string prefix = token.substr(0, len);
      if (!ctx.known(prefix)) continue;
      std::vector<std::string> rest;
      if (decompose(token.substr(len), rest)) {
        out.push_back(std::move(prefix));
        out.insert(out.end(), rest.begin(), rest.end());
        return true;
      }
      if (--backtracks_left <= 0) return false;
    }
    if (token.size() >= 2 && ctx.table_trusted(token.substr(1))) {
      out.push_back(token.substr(0, 1));
      out.push_back(token.substr(1));
      return true;
    }
    return false;
  }
};

inline constexpr std::size_t kMinSubSplitLength = 4;

}  // namespace detail

// Splits one name into its morpheme set. Stop morphemes are removed; if
// that empties the set, the stage-1 tokens are restored so the name keeps
// some signal.
inline MorphemeSet split(const std::string& name, const SplitContext& ctx) {
  std::vector<std::string> stage1 = stage1_tokens(name);
  MorphemeSet result;
  for (const std::string& token : stage1) {
    if (token.size() >= detail::kMinSubSplitLength && !ctx.known(token)) {
      detail::GreedySplitter splitter{ctx};
      std::vector<std::string> parts;
      if (splitter.decompose(token, parts)) {
        result.insert(parts.begin(), parts.end());
        continue;
      }
    }
    result.insert(token);
  }
  MorphemeSet kept;
  for (const std::string& token : result)
    if (!ctx.stops.contains(token)) kept.insert(token);
  if (kept.empty()) return MorphemeSet(stage1.begin(), stage1.end());
  return kept;
}

// Removes the shared morphemes from both sets: (a \ b, b \ a).
inline std::pair<MorphemeSet, MorphemeSet> eliminate_common(
    const MorphemeSet& a, const MorphemeSet& b) {
  MorphemeSet ra, rb;
  for (const auto& m : a)
    if (!b.count(m)) ra.insert(m);
  for (const auto& m : b)
    if (!a.count(m)) rb.insert(m);
  return {std::move(ra), std::move(rb)};
}

// Checker-side normalization: single-letter morphemes carry no signal next
// to real ones and are dropped, unless that would empty the set.
inline MorphemeSet drop_single_letters(const MorphemeSet& set) {
  MorphemeSet kept;
  for (const auto& m : set)
    if (m.size() > 1) kept.insert(m);
  if (kept.empty()) return set;
  return kept;
}

// Counts stage-1 tokens of every extractable argument and parameter name.
inline FrequencyTable build_frequency_table(
    const std::vector<ProjectRecord>& projects) {
  FrequencyTable table;
  auto add_name = [&](const std::string& name) {
    for (const std::string& token : stage1_tokens(name)) ++table.counts[token];
  };
  for (const ProjectRecord& project : projects) {
    for (const CallSiteRecord& call : project.call_sites)
      for (const ArgExpr& arg : call.args)
        if (auto name = extract_name(arg)) add_name(*name);
    for (const DeclarationRecord& decl : project.declarations)
      if (decl.param_names)
        for (const auto& param : *decl.param_names)
          if (param) add_name(*param);
  }
  return table;
}

}  // namespace argswap
