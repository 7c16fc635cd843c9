#pragma once

// False-positive filtering. Every candidate passes through an ordered list
// of heuristics for telling intentional swaps from mistakes; the first one
// that fires suppresses the warning and is reported by name.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "argswap/check.hpp"
#include "argswap/types.hpp"

namespace argswap {

struct FilterConfig {
  std::set<std::string> whitelist_words = {"swap", "exchange", "rotate", "flip"};
  int max_swap_distance = 2;
  int not_rare_count = 3;
  std::set<std::string> disabled;

  bool enabled(const std::string& name) const { return !disabled.count(name); }
};

inline const std::vector<std::string>& filter_names() {
  static const std::vector<std::string> names = {
      "whitelist-words",  "swap-distance",       "geometric-negation",
      "type-check",       "nearby-declaration",  "nearby-correct-call",
      "swap-not-rare"};
  return names;
}

// Everything the filters may consult about the surrounding caller
// function. Grouped per (file, caller name).
struct CallerContext {
  std::vector<const CallSiteRecord*> calls;
  // Position pairs flagged by either checker (pre-vetting), per call site.
  std::map<SourceLocation, std::set<std::pair<int, int>>> checker_pairs;
  // Declaration file of each callee, when a declaration is known.
  std::map<std::string, std::string> callee_decl_file;
  // Identifier -> declared type, for the call's file.
  const std::map<std::string, std::string>* var_types = nullptr;
};

namespace filter_detail {

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline bool contains_word(const std::string& haystack_lower, const std::string& word) {
  return haystack_lower.find(word) != std::string::npos;
}

// Unwraps parentheses to find a top-level unary minus.
inline bool negated(const ArgExpr& expr) {
  const ArgExpr* e = &expr;
  while (e->kind == ExprKind::Paren && !e->children.empty()) e = &e->children.front();
  return e->kind == ExprKind::UnaryOp && e->op == "-";
}

// Best-effort argument type: declared identifier types and literal types
// only; anything else stays unknown.
inline std::optional<std::string> inferred_type(const ArgExpr& expr,
                                                const CallerContext& ctx) {
  const ArgExpr* e = &expr;
  while (e->kind == ExprKind::Paren && !e->children.empty()) e = &e->children.front();
  switch (e->kind) {
    case ExprKind::Identifier: {
      if (!ctx.var_types) return std::nullopt;
      auto it = ctx.var_types->find(e->text);
      if (it == ctx.var_types->end()) return std::nullopt;
      return it->second;
    }
    case ExprKind::StringLiteral:
      return std::string("const char *");
    case ExprKind::NonStringLiteral: {
      const std::string& text = e->text;
      if (!text.empty() && text.front() == '\'') return std::string("char");
      if (text.find('.') != std::string::npos) return std::string("double");
      return std::string("int");
    }
    default:
      return std::nullopt;
  }
}

}  // namespace filter_detail

// --- individual predicates (true = suppress) --------------------------------

// Words like "rotate" near the call say the swap is probably deliberate.
// Checked in the callee name, the caller name, the retained enclosing
// conditions and the preceding lines (comments included).
inline bool filter_whitelist_words(const CandidateWarning& cand,
                                   const CallerContext&, const FilterConfig& cfg) {
  using filter_detail::contains_word;
  using filter_detail::lower;
  std::vector<std::string> texts;
  texts.push_back(lower(cand.call.callee));
  if (cand.call.caller_name) texts.push_back(lower(*cand.call.caller_name));
  for (const auto& cond : cand.call.enclosing_conditions) texts.push_back(lower(cond));
  for (const auto& line : cand.call.preceding_lines) texts.push_back(lower(line));
  for (const std::string& word : cfg.whitelist_words) {
    std::string w = lower(word);
    for (const std::string& text : texts)
      if (contains_word(text, w)) return true;
  }
  return false;
}

inline bool filter_swap_distance(const CandidateWarning& cand, const CallerContext&,
                                 const FilterConfig& cfg) {
  return cand.pos_j - cand.pos_i > cfg.max_swap_distance;
}

// Geometric code often swaps two axes and negates one of them.
inline bool filter_geometric_negation(const CandidateWarning& cand,
                                      const CallerContext&, const FilterConfig&) {
  const auto& args = cand.call.args;
  auto ui = static_cast<std::size_t>(cand.pos_i - 1);
  auto uj = static_cast<std::size_t>(cand.pos_j - 1);
  if (ui >= args.size() || uj >= args.size()) return false;
  bool ni = filter_detail::negated(args[ui]);
  bool nj = filter_detail::negated(args[uj]);
  return ni != nj;
}

// If the current arrangement type-checks exactly and the swapped one would
// not, the code is probably right as written.
inline bool filter_type_check(const CandidateWarning& cand, const CallerContext& ctx,
                              const FilterConfig&) {
  if (!cand.decl || !cand.decl->param_types) return false;
  const auto& types = *cand.decl->param_types;
  auto ui = static_cast<std::size_t>(cand.pos_i - 1);
  auto uj = static_cast<std::size_t>(cand.pos_j - 1);
  if (ui >= types.size() || uj >= types.size()) return false;
  const std::string& param_i = types[ui];
  const std::string& param_j = types[uj];
  if (param_i == param_j) return false;
  if (ui >= cand.call.args.size() || uj >= cand.call.args.size()) return false;
  auto arg_i = filter_detail::inferred_type(cand.call.args[ui], ctx);
  auto arg_j = filter_detail::inferred_type(cand.call.args[uj], ctx);
  if (!arg_i || !arg_j) return false;
  return *arg_i == param_i && *arg_j == param_j && *arg_i != param_j &&
         *arg_j != param_i;
}

// A declaration in the same file means the author had the signature in
// sight.
inline bool filter_nearby_declaration(const CandidateWarning& cand,
                                      const CallerContext& ctx, const FilterConfig&) {
  auto it = ctx.callee_decl_file.find(cand.call.callee);
  if (it == ctx.callee_decl_file.end()) return false;
  return it->second == cand.call.location.file_path;
}

// Calling the same function "both ways" nearby suggests both orders are
// deliberate. Unswapped means: no checker flagged that call at this
// position pair.
inline bool filter_nearby_correct_call(const CandidateWarning& cand,
                                       const CallerContext& ctx, const FilterConfig&) {
  std::pair<int, int> pair{cand.pos_i, cand.pos_j};
  for (const CallSiteRecord* other : ctx.calls) {
    if (other->location == cand.call.location) continue;
    if (other->callee != cand.call.callee) continue;
    if (other->args.size() < static_cast<std::size_t>(cand.pos_j)) continue;
    auto flagged = ctx.checker_pairs.find(other->location);
    bool swapped_too =
        flagged != ctx.checker_pairs.end() && flagged->second.count(pair) > 0;
    if (!swapped_too) return true;
  }
  return false;
}

// An "error" repeated at three or more call sites in one function is a
// pattern, not a slip.
inline bool filter_swap_not_rare(const CandidateWarning& cand, const CallerContext& ctx,
                                 const FilterConfig& cfg) {
  std::pair<int, int> pair{cand.pos_i, cand.pos_j};
  int flagged_calls = 0;
  for (const CallSiteRecord* other : ctx.calls) {
    if (other->callee != cand.call.callee) continue;
    auto flagged = ctx.checker_pairs.find(other->location);
    if (flagged != ctx.checker_pairs.end() && flagged->second.count(pair) > 0)
      ++flagged_calls;
  }
  return flagged_calls >= cfg.not_rare_count;
}

// --- driver ------------------------------------------------------------------

struct FilterDecision {
  bool keep = true;
  std::string suppressed_by;
};

inline FilterDecision apply_filters(const CandidateWarning& cand,
                                    const CallerContext& ctx, const FilterConfig& cfg) {
  using Predicate = bool (*)(const CandidateWarning&, const CallerContext&,
                             const FilterConfig&);
  static const std::pair<const char*, Predicate> pipeline[] = {
      {"whitelist-words", &filter_whitelist_words},
      {"swap-distance", &filter_swap_distance},
      {"geometric-negation", &filter_geometric_negation},
      {"type-check", &filter_type_check},
      {"nearby-declaration", &filter_nearby_declaration},
      {"nearby-correct-call", &filter_nearby_correct_call},
      {"swap-not-rare", &filter_swap_not_rare},
  };
  for (const auto& [name, predicate] : pipeline) {
    if (!cfg.enabled(name)) continue;
    if (predicate(cand, ctx, cfg)) return {false, name};
  }
  return {true, {}};
}

}  // namespace argswap
