#pragma once

// The statistical database: (function, argument position, morpheme) ->
// number of distinct corpus projects using that morpheme there. Weights
// feed the relative-frequency comparisons behind vetting and the
// statistical checker.

#include <array>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "argswap/naming.hpp"
#include "argswap/types.hpp"
#include "argswap/version.hpp"

namespace argswap {

// Argument positions past this are not worth counting (pathological
// variadic calls).
inline constexpr int kMaxTrackedPosition = 32;

struct StatsDB {
  struct Meta {
    long project_count = 0;
    std::string build_timestamp;
    std::string tool_version = ARGSWAP_VERSION;

    friend bool operator==(const Meta&, const Meta&) = default;
  };

  Meta meta;
  // function -> position (1-based) -> morpheme -> weight
  std::map<std::string, std::map<int, std::map<std::string, long>>> weights;

  friend bool operator==(const StatsDB&, const StatsDB&) = default;

  long weight(const std::string& function, const std::string& morpheme,
              int position) const {
    auto f = weights.find(function);
    if (f == weights.end()) return 0;
    auto p = f->second.find(position);
    if (p == f->second.end()) return 0;
    auto m = p->second.find(morpheme);
    return m == p->second.end() ? 0 : m->second;
  }

  bool has_function(const std::string& function) const {
    return weights.count(function) > 0;
  }

  // psi(f,m,i,j) > threshold, with a zero-denominator convention: the
  // comparison is w_i > threshold * max(w_j, 1).
  bool psi_exceeds(const std::string& function, const std::string& morpheme,
                   int pos_i, int pos_j, double threshold) const {
    long wi = weight(function, morpheme, pos_i);
    long wj = weight(function, morpheme, pos_j);
    return static_cast<double>(wi) >
           threshold * static_cast<double>(wj < 1 ? 1 : wj);
  }

  // The morpheme with the largest positive w(f,x,pos_hi) - w(f,x,pos_lo)
  // gap, ties broken lexicographically.
  std::optional<std::string> argmax_position_gap(const std::string& function,
                                                 int pos_hi, int pos_lo) const {
    auto f = weights.find(function);
    if (f == weights.end()) return std::nullopt;
    std::set<std::string> candidates;
    for (int pos : {pos_hi, pos_lo}) {
      auto p = f->second.find(pos);
      if (p == f->second.end()) continue;
      for (const auto& [m, w] : p->second) candidates.insert(m);
    }
    std::optional<std::string> best;
    long best_gap = 0;
    for (const std::string& m : candidates) {
      long gap = weight(function, m, pos_hi) - weight(function, m, pos_lo);
      if (gap > best_gap) {
        best_gap = gap;
        best = m;
      }
    }
    return best;
  }

  // --- persistence -------------------------------------------------------

  static constexpr const char* kFormatVersion = "v1";

  void save(std::ostream& out) const {
    out << "argswap-statsdb " << kFormatVersion << " projects=" << meta.project_count
        << " built=" << (meta.build_timestamp.empty() ? "-" : meta.build_timestamp)
        << " tool=" << meta.tool_version << "\n";
    for (const auto& [fn, positions] : weights)
      for (const auto& [pos, morphemes] : positions)
        for (const auto& [m, w] : morphemes)
          out << fn << '\t' << pos << '\t' << m << '\t' << w << '\n';
  }

  void save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write stats db: " + path);
    save(out);
  }

  static StatsDB load(std::istream& in, const std::string& origin) {
    StatsDB db;
    std::string header;
    if (!std::getline(in, header))
      throw std::runtime_error(origin + ": empty stats db (corrupt at byte 0)");
    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "argswap-statsdb")
      throw std::runtime_error(origin + ": not an argswap stats db (corrupt at byte 0)");
    if (version != kFormatVersion)
      throw std::runtime_error(origin + ": stats db version mismatch: file has '" +
                               version + "', tool expects '" + kFormatVersion + "'");
    std::string field;
    while (hs >> field) {
      auto eq = field.find('=');
      if (eq == std::string::npos) continue;
      std::string key = field.substr(0, eq), value = field.substr(eq + 1);
      if (key == "projects") db.meta.project_count = std::stol(value);
      if (key == "built") db.meta.build_timestamp = value == "-" ? "" : value;
      if (key == "tool") db.meta.tool_version = value;
    }
    std::size_t offset = header.size() + 1;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) {
        std::array<std::size_t, 3> tabs{};
        std::size_t found = 0;
        for (std::size_t k = 0; k < line.size() && found < 3; ++k)
          if (line[k] == '\t') tabs[found++] = k;
        if (found != 3)
          throw std::runtime_error(origin + ": corrupt stats db line at byte " +
                                   std::to_string(offset));
        try {
          std::string fn = line.substr(0, tabs[0]);
          int pos = std::stoi(line.substr(tabs[0] + 1, tabs[1] - tabs[0] - 1));
          std::string morpheme = line.substr(tabs[1] + 1, tabs[2] - tabs[1] - 1);
          long w = std::stol(line.substr(tabs[2] + 1));
          if (pos < 1 || w < 1) throw std::invalid_argument("range");
          db.weights[fn][pos][morpheme] = w;
        } catch (const std::exception&) {
          throw std::runtime_error(origin + ": corrupt stats db line at byte " +
                                   std::to_string(offset));
        }
      }
      offset += line.size() + 1;
    }
    return db;
  }

  static StatsDB load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open stats db: " + path);
    return load(in, path);
  }
};

// Morpheme sets per argument position for one call, with the build-time
// normalizations applied: morphemes shared by every named position are
// eliminated, then single letters are dropped (kept only when a position
// would end up empty).
inline std::vector<MorphemeSet> call_position_morphemes(const CallSiteRecord& call,
                                                        const SplitContext& ctx) {
  std::vector<MorphemeSet> sets;
  std::size_t arity = std::min<std::size_t>(call.args.size(), kMaxTrackedPosition);
  for (std::size_t a = 0; a < arity; ++a) {
    MorphemeSet set;
    if (auto name = extract_name(call.args[a])) set = split(*name, ctx);
    sets.push_back(std::move(set));
  }
  // Morphemes appearing at every named position say something about the
  // call, not about any one position.
  std::vector<std::size_t> named;
  for (std::size_t a = 0; a < sets.size(); ++a)
    if (!sets[a].empty()) named.push_back(a);
  if (named.size() >= 2) {
    MorphemeSet common = sets[named[0]];
    for (std::size_t k = 1; k < named.size() && !common.empty(); ++k) {
      MorphemeSet next;
      for (const auto& m : common)
        if (sets[named[k]].count(m)) next.insert(m);
      common = std::move(next);
    }
    if (!common.empty())
      for (std::size_t a : named)
        for (const auto& m : common) sets[a].erase(m);
  }
  for (MorphemeSet& set : sets)
    if (!set.empty()) set = drop_single_letters(set);
  return sets;
}

// Builds the database: each (function, position, morpheme) key counts at
// most once per project, so the weight is the number of projects.
inline StatsDB build_db(const std::vector<ProjectRecord>& projects,
                        const SplitContext& ctx) {
  StatsDB db;
  db.meta.project_count = static_cast<long>(projects.size());
  for (const ProjectRecord& project : projects) {
    std::set<std::tuple<std::string, int, std::string>> keys;
    for (const CallSiteRecord& call : project.call_sites) {
      std::vector<MorphemeSet> sets = call_position_morphemes(call, ctx);
      for (std::size_t a = 0; a < sets.size(); ++a)
        for (const std::string& m : sets[a])
          keys.emplace(call.callee, static_cast<int>(a + 1), m);
    }
    for (const auto& [fn, pos, m] : keys) ++db.weights[fn][pos][m];
  }
  return db;
}

// Morpheme-set-size histograms over a corpus, bucketed {1, 2, >=3}.
// Nameless arguments/parameters are not counted.
struct MorphologyReport {
  std::array<long, 3> argument_names{};   // [size 1, size 2, size >= 3]
  std::array<long, 3> parameter_names{};

  friend bool operator==(const MorphologyReport&, const MorphologyReport&) = default;
};

inline MorphologyReport morphology_report(const std::vector<ProjectRecord>& projects,
                                          const SplitContext& ctx) {
  MorphologyReport report;
  auto bucket = [](std::array<long, 3>& hist, std::size_t size) {
    if (size == 0) return;  // nothing extractable
    hist[size >= 3 ? 2 : size - 1] += 1;
  };
  for (const ProjectRecord& project : projects) {
    for (const CallSiteRecord& call : project.call_sites)
      for (const ArgExpr& arg : call.args)
        if (auto name = extract_name(arg))
          bucket(report.argument_names, split(*name, ctx).size());
    for (const DeclarationRecord& decl : project.declarations)
      if (decl.param_names)
        for (const auto& param : *decl.param_names)
          if (param) bucket(report.parameter_names, split(*param, ctx).size());
  }
  return report;
}

}  // namespace argswap
