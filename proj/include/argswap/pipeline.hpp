#pragma once

// Stage sequencing. The cover-based checker runs first when a usable
// declaration exists; its candidates go through statistical vetting. The
// statistical checker only looks at calls the cover checker had nothing to
// say about. Every survivor then faces the false-positive filters.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "argswap/check.hpp"
#include "argswap/filters.hpp"
#include "argswap/naming.hpp"
#include "argswap/stats.hpp"
#include "argswap/types.hpp"

namespace argswap {

struct PipelineConfig {
  Thresholds thresholds;
  FilterConfig filters;
  bool cover_enabled = true;
  bool vetting_enabled = true;
  bool statistical_enabled = true;
  bool filtering_enabled = true;
};

struct Warning {
  std::string rule_id;  // "swap.cover" or "swap.statistical"
  std::string message;
  SourceLocation location;
  std::string fingerprint;
  std::string callee;
  int pos_i = 0;
  int pos_j = 0;
  Origin origin = Origin::CoverChecker;
};

namespace pipeline_detail {

inline std::uint64_t fnv1a(std::string_view s,
                           std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string normalize_text(const std::string& text) {
  std::string out;
  bool in_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(c);
  }
  return out;
}

inline std::string set_text(const MorphemeSet& set) {
  std::string out = "{";
  for (const auto& m : set) {
    if (out.size() > 1) out += ", ";
    out += m;
  }
  return out + "}";
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace pipeline_detail

// Location-independent identity for a warning: survives edits elsewhere in
// the file.
inline std::string warning_fingerprint(const CandidateWarning& cand,
                                       const std::string& rule_id) {
  using pipeline_detail::fnv1a;
  std::uint64_t h = fnv1a(cand.call.callee);
  for (const std::string& text : cand.call.arg_source_texts) {
    h = fnv1a("\x1f", h);
    h = fnv1a(pipeline_detail::normalize_text(text), h);
  }
  h = fnv1a("\x1f" + std::to_string(cand.pos_i) + "," + std::to_string(cand.pos_j), h);
  h = fnv1a("\x1f" + rule_id, h);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Warning make_warning(const CandidateWarning& cand) {
  using pipeline_detail::format_double;
  using pipeline_detail::set_text;
  Warning w;
  w.origin = cand.origin;
  w.rule_id = cand.origin == Origin::CoverChecker ? "swap.cover" : "swap.statistical";
  w.location = cand.call.location;
  w.callee = cand.call.callee;
  w.pos_i = cand.pos_i;
  w.pos_j = cand.pos_j;
  w.fingerprint = warning_fingerprint(cand, w.rule_id);

  std::string msg = "call to '" + cand.call.callee + "': arguments " +
                    std::to_string(cand.pos_i) + " and " + std::to_string(cand.pos_j) +
                    " appear swapped; ";
  if (cand.origin == Origin::CoverChecker) {
    std::string pname_i = "?", pname_j = "?";
    if (cand.decl && cand.decl->param_names) {
      const auto& names = *cand.decl->param_names;
      if (cand.pos_i <= static_cast<int>(names.size()) && names[cand.pos_i - 1])
        pname_i = *names[cand.pos_i - 1];
      if (cand.pos_j <= static_cast<int>(names.size()) && names[cand.pos_j - 1])
        pname_j = *names[cand.pos_j - 1];
    }
    msg += "argument morphemes " + set_text(cand.arg_i_morphemes) +
           " match parameter '" + pname_j + "' and " + set_text(cand.arg_j_morphemes) +
           " match parameter '" + pname_i + "' (cover in place " +
           format_double(cand.cover_ii) + "/" + format_double(cand.cover_jj) +
           ", swapped " + format_double(cand.cover_ij) + "/" +
           format_double(cand.cover_ji) + ")";
  } else {
    msg += "morpheme '" + cand.morpheme_i + "' is used at position " +
           std::to_string(cand.pos_j) + " in " + std::to_string(cand.weight_i_there) +
           " project(s) vs " + std::to_string(cand.weight_i_here) + " at position " +
           std::to_string(cand.pos_i) + ", and '" + cand.morpheme_j + "' at position " +
           std::to_string(cand.pos_i) + " in " + std::to_string(cand.weight_j_there) +
           " vs " + std::to_string(cand.weight_j_here) + " at position " +
           std::to_string(cand.pos_j);
  }
  w.message = msg;
  return w;
}

// ---------------------------------------------------------------------------
// Declaration lookup.

class DeclIndex {
 public:
  explicit DeclIndex(const std::vector<DeclarationRecord>& decls) {
    for (const DeclarationRecord& decl : decls) by_name_[decl.function_name].push_back(&decl);
  }

  // Exact name; among several, the first declaration whose arity matches
  // wins, then first-seen order.
  const DeclarationRecord* lookup(const std::string& name, std::size_t arity) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return nullptr;
    for (const DeclarationRecord* decl : it->second) {
      if (decl->param_names && decl->param_names->size() == arity) return decl;
      if (!decl->param_names && decl->param_types &&
          decl->param_types->size() == arity)
        return decl;
    }
    return it->second.front();
  }

  std::set<std::string> files_declaring(const std::string& name) const {
    std::set<std::string> files;
    auto it = by_name_.find(name);
    if (it != by_name_.end())
      for (const DeclarationRecord* decl : it->second)
        files.insert(decl->location.file_path);
    return files;
  }

  std::set<std::string> all_names() const {
    std::set<std::string> names;
    for (const auto& [name, _] : by_name_) names.insert(name);
    return names;
  }

  bool empty() const { return by_name_.empty(); }

 private:
  std::map<std::string, std::vector<const DeclarationRecord*>> by_name_;
};

// ---------------------------------------------------------------------------
// Analysis over a set of scanned files or ingested records.

struct AnalysisUniverse {
  std::vector<CallSiteRecord> calls;
  std::vector<DeclarationRecord> decls;
  // file path -> identifier -> declared type text
  std::map<std::string, std::map<std::string, std::string>> var_types_by_file;
};

struct AnalysisResult {
  std::vector<Warning> warnings;
  // Pre-filter stage counts, for threshold sweeps and diagnostics.
  long cover_candidates = 0;
  long vetted_away = 0;
  long statistical_candidates = 0;
  long filtered_away = 0;
  // (callee, location, pos_i, pos_j, filter) of suppressed candidates.
  std::vector<std::tuple<std::string, SourceLocation, int, int, std::string>> suppressed;
};

inline AnalysisResult analyze(const AnalysisUniverse& universe, const StatsDB* db,
                              const SplitContext& ctx, const SynonymTable* synonyms,
                              const PipelineConfig& cfg) {
  AnalysisResult result;
  DeclIndex decl_index(universe.decls);

  // Pass 1: checker stages for every call.
  std::vector<CandidateWarning> survivors;
  std::map<SourceLocation, std::set<std::pair<int, int>>> checker_pairs;
  for (const CallSiteRecord& call : universe.calls) {
    const DeclarationRecord* decl = decl_index.lookup(call.callee, call.args.size());

    std::vector<CandidateWarning> cover_cands;
    if (cfg.cover_enabled && decl)
      cover_cands = cover_check(call, *decl, cfg.thresholds, ctx, synonyms);
    result.cover_candidates += static_cast<long>(cover_cands.size());
    for (const CandidateWarning& cand : cover_cands)
      checker_pairs[call.location].insert({cand.pos_i, cand.pos_j});

    bool cover_spoke = !cover_cands.empty();
    if (db && cfg.vetting_enabled) {
      std::vector<CandidateWarning> kept;
      for (CandidateWarning& cand : cover_cands) {
        if (vet(cand, *db, cfg.thresholds))
          kept.push_back(std::move(cand));
        else
          ++result.vetted_away;
      }
      cover_cands = std::move(kept);
    }
    for (CandidateWarning& cand : cover_cands) survivors.push_back(std::move(cand));

    // The statistical checker only gets calls the cover checker was silent
    // about (even a vetted-away candidate counts as it having spoken).
    if (!cover_spoke && cfg.statistical_enabled && db) {
      std::vector<CandidateWarning> stat_cands =
          statistical_check(call, *db, cfg.thresholds, ctx, synonyms);
      result.statistical_candidates += static_cast<long>(stat_cands.size());
      for (CandidateWarning& cand : stat_cands) {
        checker_pairs[call.location].insert({cand.pos_i, cand.pos_j});
        survivors.push_back(std::move(cand));
      }
    }
  }

  // Pass 2: build caller contexts, filter.
  std::map<std::pair<std::string, std::string>, CallerContext> contexts;
  for (const CallSiteRecord& call : universe.calls) {
    std::pair<std::string, std::string> key{call.location.file_path,
                                            call.caller_name.value_or("")};
    contexts[key].calls.push_back(&call);
  }
  for (auto& [key, context] : contexts) {
    context.checker_pairs = checker_pairs;  // shared view, copied per group
    auto vt = universe.var_types_by_file.find(key.first);
    if (vt != universe.var_types_by_file.end()) context.var_types = &vt->second;
  }

  std::vector<CandidateWarning> reported;
  for (CandidateWarning& cand : survivors) {
    std::pair<std::string, std::string> key{cand.call.location.file_path,
                                            cand.call.caller_name.value_or("")};
    CallerContext& context = contexts[key];
    if (context.callee_decl_file.find(cand.call.callee) ==
        context.callee_decl_file.end()) {
      for (const std::string& file : decl_index.files_declaring(cand.call.callee))
        if (file == cand.call.location.file_path)
          context.callee_decl_file[cand.call.callee] = file;
    }
    if (cfg.filtering_enabled) {
      FilterDecision decision = apply_filters(cand, context, cfg.filters);
      if (!decision.keep) {
        ++result.filtered_away;
        result.suppressed.emplace_back(cand.call.callee, cand.call.location,
                                       cand.pos_i, cand.pos_j, decision.suppressed_by);
        continue;
      }
    }
    reported.push_back(std::move(cand));
  }

  // One warning per (location, pair); cover origin outranks statistical.
  std::map<std::tuple<std::string, int, int, int, int>, CandidateWarning> unique;
  for (CandidateWarning& cand : reported) {
    std::tuple<std::string, int, int, int, int> key{
        cand.call.location.file_path, cand.call.location.line,
        cand.call.location.column, cand.pos_i, cand.pos_j};
    auto it = unique.find(key);
    if (it == unique.end()) {
      unique.emplace(std::move(key), std::move(cand));
    } else if (it->second.origin == Origin::StatisticalChecker &&
               cand.origin == Origin::CoverChecker) {
      it->second = std::move(cand);
    }
  }
  for (auto& [key, cand] : unique) result.warnings.push_back(make_warning(cand));
  // std::map iteration already sorts by (file, line, column, pos_i, pos_j).
  return result;
}

// Convenience single-call entry point used by tests: runs the full pipeline
// for one call with an ad-hoc context.
inline std::vector<Warning> run_pipeline(const CallSiteRecord& call,
                                         const DeclarationRecord* decl,
                                         const StatsDB* db, const SplitContext& ctx,
                                         const SynonymTable* synonyms,
                                         const PipelineConfig& cfg) {
  AnalysisUniverse universe;
  universe.calls.push_back(call);
  if (decl) universe.decls.push_back(*decl);
  return analyze(universe, db, ctx, synonyms, cfg).warnings;
}

}  // namespace argswap
