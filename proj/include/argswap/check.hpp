#pragma once

// Swapped-argument detection: the cover-based checker, statistical vetting,
// and the statistical checker. Filtering lives in filters.hpp and the
// stage sequencing in pipeline.hpp.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "argswap/naming.hpp"
#include "argswap/similarity.hpp"
#include "argswap/stats.hpp"
#include "argswap/types.hpp"

namespace argswap {

struct Thresholds {
  double alpha1 = 0.5;         // cover must be worse than this in place
  double alpha2 = 0.75;        // and better than this when swapped
  double beta = 1.0;           // vetting: "statistically not rare" bar
  double gamma = 5.0;          // statistical checker misplacement bar
  double sim_threshold = 0.75; // "sufficiently similar" elsewhere
  int max_pair_distance = 2;   // |i - j| beyond this is never reported

  bool valid() const {
    return 0.0 <= alpha1 && alpha1 <= alpha2 && alpha2 <= 1.0 && beta >= 0.0 &&
           gamma >= 0.0 && max_pair_distance >= 1;
  }
};

enum class Origin { CoverChecker, StatisticalChecker };

inline const char* origin_name(Origin origin) {
  return origin == Origin::CoverChecker ? "cover" : "statistical";
}

struct CandidateWarning {
  CallSiteRecord call;
  std::optional<DeclarationRecord> decl;
  int pos_i = 0;  // pos_i < pos_j, 1-based
  int pos_j = 0;
  Origin origin = Origin::CoverChecker;

  // Evidence. The morpheme sets are the post-elimination sets the decision
  // was made on.
  MorphemeSet arg_i_morphemes, arg_j_morphemes;
  MorphemeSet param_i_morphemes, param_j_morphemes;
  double cover_ii = 0, cover_jj = 0, cover_ij = 0, cover_ji = 0;

  // Statistical origin only.
  std::string morpheme_i, morpheme_j;
  long weight_i_here = 0, weight_i_there = 0;
  long weight_j_here = 0, weight_j_there = 0;
};

// C(A, P) = min over parameter morphemes of the best-matching argument
// morpheme. Empty inputs are the caller's job to avoid.
inline double cover(const MorphemeSet& arg_morphemes, const MorphemeSet& param_morphemes,
                    const SynonymTable* synonyms = nullptr) {
  double worst = 1.0;
  for (const std::string& p : param_morphemes) {
    double best = 0.0;
    for (const std::string& a : arg_morphemes) best = std::max(best, sim(a, p, synonyms));
    worst = std::min(worst, best);
  }
  return worst;
}

namespace check_detail {

// Splits every argument name of a call once; per-pair work reuses these.
inline std::vector<MorphemeSet> argument_morphemes(const CallSiteRecord& call,
                                                   const SplitContext& ctx) {
  std::vector<MorphemeSet> sets;
  for (const ArgExpr& arg : call.args) {
    MorphemeSet set;
    if (auto name = extract_name(arg)) set = split(*name, ctx);
    sets.push_back(std::move(set));
  }
  return sets;
}

inline std::optional<MorphemeSet> parameter_morphemes(const DeclarationRecord& decl,
                                                      std::size_t index,
                                                      const SplitContext& ctx) {
  if (!decl.param_names || index >= decl.param_names->size()) return std::nullopt;
  const auto& name = (*decl.param_names)[index];
  if (!name) return std::nullopt;
  return split(*name, ctx);
}

}  // namespace check_detail

// Stage 1, the cover-based checker. Skipped entirely when the declaration
// lacks parameter names; pairs where either parameter name is missing fall
// through to the statistical checker.
inline std::vector<CandidateWarning> cover_check(const CallSiteRecord& call,
                                                 const DeclarationRecord& decl,
                                                 const Thresholds& th,
                                                 const SplitContext& ctx,
                                                 const SynonymTable* synonyms = nullptr) {
  std::vector<CandidateWarning> out;
  if (!decl.param_names) return out;
  std::vector<MorphemeSet> args = check_detail::argument_morphemes(call, ctx);
  std::size_t arity = std::min(args.size(), decl.param_names->size());
  for (std::size_t i = 0; i < arity; ++i) {
    for (std::size_t j = i + 1; j < arity; ++j) {
      if (static_cast<int>(j - i) > th.max_pair_distance) continue;
      auto params_i = check_detail::parameter_morphemes(decl, i, ctx);
      auto params_j = check_detail::parameter_morphemes(decl, j, ctx);
      if (!params_i || !params_j) continue;

      auto [ai, aj] = eliminate_common(args[i], args[j]);
      auto [pi, pj] = eliminate_common(*params_i, *params_j);
      ai = drop_single_letters(ai);
      aj = drop_single_letters(aj);
      pi = drop_single_letters(pi);
      pj = drop_single_letters(pj);
      if (ai.empty() || aj.empty() || pi.empty() || pj.empty()) continue;

      double cii = cover(ai, pi, synonyms);
      double cjj = cover(aj, pj, synonyms);
      double cij = cover(ai, pj, synonyms);
      double cji = cover(aj, pi, synonyms);
      if (cii < th.alpha1 && cjj < th.alpha1 && cij > th.alpha2 && cji > th.alpha2) {
        CandidateWarning cand;
        cand.call = call;
        cand.decl = decl;
        cand.pos_i = static_cast<int>(i + 1);
        cand.pos_j = static_cast<int>(j + 1);
        cand.origin = Origin::CoverChecker;
        cand.arg_i_morphemes = std::move(ai);
        cand.arg_j_morphemes = std::move(aj);
        cand.param_i_morphemes = std::move(pi);
        cand.param_j_morphemes = std::move(pj);
        cand.cover_ii = cii;
        cand.cover_jj = cjj;
        cand.cover_ij = cij;
        cand.cover_ji = cji;
        out.push_back(std::move(cand));
      }
    }
  }
  return out;
}

// Stage 2, statistical vetting of a cover candidate. Returns true when the
// candidate should be kept. A swap is discarded as statistically not rare
// when some morpheme sits in its current position more often than in the
// suggested one by a factor over beta.
inline bool vet(const CandidateWarning& cand, const StatsDB& db, const Thresholds& th) {
  if (!db.has_function(cand.call.callee)) return true;
  for (const std::string& m : cand.arg_i_morphemes)
    if (db.psi_exceeds(cand.call.callee, m, cand.pos_i, cand.pos_j, th.beta))
      return false;
  for (const std::string& m : cand.arg_j_morphemes)
    if (db.psi_exceeds(cand.call.callee, m, cand.pos_j, cand.pos_i, th.beta))
      return false;
  return true;
}

// Stage 3, the statistical checker. Works without any declaration. For a
// pair of positions it wants exactly one morpheme swapped between the two
// sets (judged over morphemes the database knows for this function), both
// misplacement scores above gamma, and each misplaced morpheme similar to
// the database's own best candidate for the other position.
inline std::vector<CandidateWarning> statistical_check(
    const CallSiteRecord& call, const StatsDB& db, const Thresholds& th,
    const SplitContext& ctx, const SynonymTable* synonyms = nullptr) {
  std::vector<CandidateWarning> out;
  const std::string& fn = call.callee;
  if (!db.has_function(fn)) return out;
  std::vector<MorphemeSet> args = check_detail::argument_morphemes(call, ctx);
  std::size_t arity = args.size();
  for (std::size_t i = 0; i < arity; ++i) {
    for (std::size_t j = i + 1; j < arity; ++j) {
      if (static_cast<int>(j - i) > th.max_pair_distance) continue;
      int pos_i = static_cast<int>(i + 1);
      int pos_j = static_cast<int>(j + 1);
      auto [ai, aj] = eliminate_common(args[i], args[j]);
      ai = drop_single_letters(ai);
      aj = drop_single_letters(aj);
      if (ai.empty() || aj.empty()) continue;

      // Only morphemes with any weight at either position carry signal.
      auto known = [&](const MorphemeSet& set) {
        MorphemeSet kept;
        for (const std::string& m : set)
          if (db.weight(fn, m, pos_i) > 0 || db.weight(fn, m, pos_j) > 0)
            kept.insert(m);
        return kept;
      };
      MorphemeSet ki = known(ai);
      MorphemeSet kj = known(aj);
      if (ki.empty() || kj.empty()) continue;

      std::optional<std::pair<std::string, std::string>> found;
      for (const std::string& cand_i : ki) {
        if (found) break;
        if (!db.psi_exceeds(fn, cand_i, pos_j, pos_i, th.gamma)) continue;
        for (const std::string& cand_j : kj) {
          if (!db.psi_exceeds(fn, cand_j, pos_i, pos_j, th.gamma)) continue;
          // Exactly one morpheme swapped: the residues must agree.
          MorphemeSet ri = ki, rj = kj;
          ri.erase(cand_i);
          rj.erase(cand_j);
          if (ri != rj) continue;
          found = {cand_i, cand_j};
          break;
        }
      }
      if (!found) continue;
      const auto& [mi, mj] = *found;

      // Moving each morpheme must bring the call closer to the
      // statistically dominant shape.
      auto best_j = db.argmax_position_gap(fn, pos_j, pos_i);
      auto best_i = db.argmax_position_gap(fn, pos_i, pos_j);
      if (!best_j || sim(mi, *best_j, synonyms) < th.sim_threshold) continue;
      if (!best_i || sim(mj, *best_i, synonyms) < th.sim_threshold) continue;

      CandidateWarning cand;
      cand.call = call;
      cand.pos_i = pos_i;
      cand.pos_j = pos_j;
      cand.origin = Origin::StatisticalChecker;
      cand.arg_i_morphemes = ai;
      cand.arg_j_morphemes = aj;
      cand.morpheme_i = mi;
      cand.morpheme_j = mj;
      cand.weight_i_here = db.weight(fn, mi, pos_i);
      cand.weight_i_there = db.weight(fn, mi, pos_j);
      cand.weight_j_here = db.weight(fn, mj, pos_j);
      cand.weight_j_there = db.weight(fn, mj, pos_i);
      out.push_back(std::move(cand));
    }
  }
  return out;
}

}  // namespace argswap
