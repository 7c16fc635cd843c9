#pragma once

// Helpers shared by the unit and acceptance suites.

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "argswap/naming.hpp"
#include "argswap/stats.hpp"
#include "argswap/types.hpp"

namespace test_support {

inline const std::string kFixtureDir = ARGSWAP_FIXTURE_DIR;
inline const std::string kDataDir = ARGSWAP_DATA_DIR;

inline std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Brute-force statistics builder: nested loops and per-key project sets,
// sharing only the splitter with the production path.
inline argswap::StatsDB oracle_build_db(
    const std::vector<argswap::ProjectRecord>& projects,
    const argswap::SplitContext& ctx) {
  using namespace argswap;
  StatsDB db;
  db.meta.project_count = static_cast<long>(projects.size());
  std::map<std::tuple<std::string, int, std::string>, std::set<std::string>>
      projects_per_key;
  for (const ProjectRecord& project : projects) {
    for (const CallSiteRecord& call : project.call_sites) {
      std::vector<MorphemeSet> sets;
      for (const ArgExpr& arg : call.args) {
        MorphemeSet set;
        if (auto name = extract_name(arg)) set = split(*name, ctx);
        sets.push_back(set);
      }
      if (sets.size() > static_cast<std::size_t>(kMaxTrackedPosition))
        sets.resize(kMaxTrackedPosition);
      std::vector<MorphemeSet> named;
      for (const auto& set : sets)
        if (!set.empty()) named.push_back(set);
      MorphemeSet common;
      if (named.size() >= 2) {
        common = named[0];
        for (std::size_t k = 1; k < named.size(); ++k) {
          MorphemeSet next;
          std::set_intersection(common.begin(), common.end(), named[k].begin(),
                                named[k].end(), std::inserter(next, next.begin()));
          common = next;
        }
      }
      for (std::size_t a = 0; a < sets.size(); ++a) {
        MorphemeSet kept;
        for (const auto& m : sets[a])
          if (!common.count(m)) kept.insert(m);
        kept = drop_single_letters(kept);
        for (const auto& m : kept)
          projects_per_key[{call.callee, static_cast<int>(a + 1), m}].insert(
              project.project_id);
      }
    }
  }
  for (const auto& [key, ids] : projects_per_key) {
    auto [fn, pos, m] = key;
    db.weights[fn][pos][m] = static_cast<long>(ids.size());
  }
  return db;
}

}  // namespace test_support
