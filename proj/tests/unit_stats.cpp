#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <tuple>

#include "argswap/stats.hpp"
#include "test_support.hpp"

using namespace argswap;
using test_support::oracle_build_db;

namespace {

CallSiteRecord make_call(const std::string& callee,
                         const std::vector<std::string>& arg_names,
                         int line = 1) {
  CallSiteRecord call;
  call.callee = callee;
  call.location = {"f.c", line, 1};
  for (const std::string& name : arg_names) {
    call.args.push_back(ArgExpr{ExprKind::Identifier, name, "", {}});
    call.arg_source_texts.push_back(name);
  }
  return call;
}

ProjectRecord make_project(const std::string& id,
                           std::vector<CallSiteRecord> calls) {
  ProjectRecord project;
  project.project_id = id;
  project.call_sites = std::move(calls);
  return project;
}

SplitContext empty_ctx() {
  static FrequencyTable freq;
  static WordList words;
  return SplitContext{&freq, &words};
}

}  // namespace

TEST_CASE("build_db counts distinct projects") {
  SplitContext ctx = empty_ctx();
  std::vector<ProjectRecord> projects;
  for (int k = 0; k < 3; ++k)
    projects.push_back(make_project("p" + std::to_string(k),
                                    {make_call("kill", {"pid", "sig"})}));
  StatsDB db = build_db(projects, ctx);
  CHECK(db.weight("kill", "pid", 1) == 3);
  CHECK(db.weight("kill", "sig", 2) == 3);
  CHECK(db.meta.project_count == 3);
}

TEST_CASE("build_db eliminates morphemes common to all positions") {
  SplitContext ctx = empty_ctx();
  std::vector<ProjectRecord> projects{
      make_project("p", {make_call("f", {"ab_x", "ab_y"})})};
  StatsDB db = build_db(projects, ctx);
  CHECK(db.weight("f", "ab", 1) == 0);
  CHECK(db.weight("f", "ab", 2) == 0);
  CHECK(db.weight("f", "x", 1) == 1);
  CHECK(db.weight("f", "y", 2) == 1);
}

TEST_CASE("build_db: repeated call in one project counts once") {
  SplitContext ctx = empty_ctx();
  std::vector<ProjectRecord> once{
      make_project("p", {make_call("kill", {"pid", "sig"})})};
  std::vector<ProjectRecord> twice{
      make_project("p", {make_call("kill", {"pid", "sig"}, 1),
                         make_call("kill", {"pid", "sig"}, 9)})};
  CHECK(build_db(once, ctx).weights == build_db(twice, ctx).weights);
}

TEST_CASE("build_db: single-argument calls keep their morphemes") {
  SplitContext ctx = empty_ctx();
  std::vector<ProjectRecord> projects{
      make_project("p", {make_call("free_buffer", {"buffer"})})};
  StatsDB db = build_db(projects, ctx);
  CHECK(db.weight("free_buffer", "buffer", 1) == 1);
}

TEST_CASE("weight: absent keys give zero") {
  StatsDB db;
  CHECK(db.weight("kill", "pid", 1) == 0);
  db.weights["kill"][1]["pid"] = 3;
  CHECK(db.weight("kill", "pid", 1) == 3);
  CHECK(db.weight("kill", "pid", 2) == 0);
  CHECK(db.weight("other", "pid", 1) == 0);
}

TEST_CASE("has_function") {
  StatsDB db;
  CHECK(!db.has_function("kill"));
  db.weights["kill"][1]["pid"] = 1;
  CHECK(db.has_function("kill"));
  CHECK(!db.has_function("raise"));
}

TEST_CASE("psi_exceeds uses the zero-denominator convention") {
  StatsDB db;
  db.weights["f"][1]["m"] = 6;
  db.weights["f"][2]["m"] = 1;
  CHECK(db.psi_exceeds("f", "m", 1, 2, 5.0));   // 6 > 5*1
  db.weights["f"][1]["m"] = 5;
  CHECK(!db.psi_exceeds("f", "m", 1, 2, 5.0));  // 5 > 5 is false
  db.weights["f"][1]["m"] = 3;
  db.weights["f"][2].erase("m");
  CHECK(db.psi_exceeds("f", "m", 1, 2, 1.0));   // 3 > 1*max(0,1)
}

TEST_CASE("psi_exceeds monotonicity") {
  for (long wi = 0; wi <= 6; ++wi) {
    for (long wj = 0; wj <= 6; ++wj) {
      for (double t : {0.5, 1.0, 2.0, 5.0}) {
        StatsDB db;
        if (wi) db.weights["f"][1]["m"] = wi;
        if (wj) db.weights["f"][2]["m"] = wj;
        bool base = db.psi_exceeds("f", "m", 1, 2, t);
        StatsDB more = db;
        more.weights["f"][1]["m"] = wi + 1;
        CHECK((!base || more.psi_exceeds("f", "m", 1, 2, t)));
        if (base) {
          StatsDB fewer = db;
          if (wj) {
            fewer.weights["f"][2]["m"] = wj - 1;
            if (wj == 1) fewer.weights["f"][2].erase("m");
            CHECK(fewer.psi_exceeds("f", "m", 1, 2, t));
          }
        }
      }
    }
  }
}

TEST_CASE("argmax_position_gap") {
  StatsDB db;
  db.weights["f"][2]["sig"] = 9;
  db.weights["f"][1]["sig"] = 1;
  db.weights["f"][2]["pid"] = 2;
  db.weights["f"][1]["pid"] = 8;
  CHECK(db.argmax_position_gap("f", 2, 1) == std::string("sig"));
  CHECK(db.argmax_position_gap("f", 1, 2) == std::string("pid"));
  CHECK(!db.argmax_position_gap("unknown", 2, 1).has_value());

  StatsDB flat;
  flat.weights["f"][1]["m"] = 2;
  flat.weights["f"][2]["m"] = 2;
  CHECK(!flat.argmax_position_gap("f", 2, 1).has_value());

  StatsDB tie;
  tie.weights["f"][2]["b"] = 3;
  tie.weights["f"][2]["a"] = 3;
  CHECK(tie.argmax_position_gap("f", 2, 1) == std::string("a"));
}

TEST_CASE("stats db save/load round trip") {
  SplitContext ctx = empty_ctx();
  std::vector<ProjectRecord> projects{
      make_project("p1", {make_call("kill", {"pid", "sig"})}),
      make_project("p2", {make_call("seek_stream", {"offset", "whence"})})};
  StatsDB db = build_db(projects, ctx);
  db.meta.build_timestamp = "2026-01-15T00:00:00Z";

  std::ostringstream out;
  db.save(out);
  std::istringstream in(out.str());
  StatsDB reread = StatsDB::load(in, "mem");
  CHECK(reread == db);

  std::ostringstream out2;
  reread.save(out2);
  CHECK(out2.str() == out.str());

  StatsDB empty;
  std::ostringstream eo;
  empty.save(eo);
  std::istringstream ei(eo.str());
  CHECK(StatsDB::load(ei, "mem") == empty);
}

TEST_CASE("stats db load errors") {
  std::istringstream bad_version("argswap-statsdb v9 projects=1 built=- tool=x\n");
  try {
    StatsDB::load(bad_version, "db");
    FAIL("expected version error");
  } catch (const std::runtime_error& e) {
    std::string what = e.what();
    CHECK(what.find("v9") != std::string::npos);
    CHECK(what.find("v1") != std::string::npos);
  }

  std::istringstream corrupt(
      "argswap-statsdb v1 projects=1 built=- tool=x\n"
      "kill\t1\tpid\n");
  try {
    StatsDB::load(corrupt, "db");
    FAIL("expected corruption error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("byte 45") != std::string::npos);
  }
}

TEST_CASE("morphology report") {
  FrequencyTable freq;
  for (const char* t : {"sig", "kill", "pid"}) freq.counts[t] = 10;
  WordList words;
  SplitContext ctx{&freq, &words};

  CallSiteRecord call;
  call.callee = "kill";
  call.location = {"a.c", 1, 1};
  call.args.push_back(ArgExpr{ExprKind::MacroIdentifier, "SIGKILL", "", {}});
  call.args.push_back(ArgExpr{ExprKind::Identifier, "cpid", "", {}});
  call.arg_source_texts = {"SIGKILL", "cpid"};
  std::vector<ProjectRecord> projects{make_project("p", {call})};

  MorphologyReport report = morphology_report(projects, ctx);
  CHECK(report.argument_names == std::array<long, 3>{0, 2, 0});
  CHECK(report.parameter_names == std::array<long, 3>{0, 0, 0});

  CHECK(morphology_report({}, ctx) == MorphologyReport{});
}

TEST_CASE("build_db equals the brute-force oracle on random corpora") {
  FrequencyTable freq;
  for (const char* t : {"pid", "sig", "len", "buf"}) freq.counts[t] = 10;
  WordList words;
  for (const char* w : {"size", "count", "error", "event", "base", "file"})
    words.words.insert(w);
  SplitContext ctx{&freq, &words};

  const char* name_pool[] = {"pid",   "sig",     "cpid",     "size",  "count",
                             "error", "event",   "base",     "file",  "ab_x",
                             "ab_y",  "pid_file", "SIGKILL", "x",     "remoteAck"};
  const char* fn_pool[] = {"kill", "copy_file", "resize", "emit"};
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> project_count(1, 6);
  std::uniform_int_distribution<int> call_count(0, 12);
  std::uniform_int_distribution<int> arg_count(1, 5);
  std::uniform_int_distribution<int> name_pick(0, 14);
  std::uniform_int_distribution<int> fn_pick(0, 3);

  for (int corpus = 0; corpus < 100; ++corpus) {
    std::vector<ProjectRecord> projects;
    int n = project_count(rng);
    for (int p = 0; p < n; ++p) {
      std::vector<CallSiteRecord> calls;
      int m = call_count(rng);
      for (int c = 0; c < m; ++c) {
        std::vector<std::string> args;
        int a = arg_count(rng);
        for (int k = 0; k < a; ++k) args.push_back(name_pool[name_pick(rng)]);
        calls.push_back(make_call(fn_pool[fn_pick(rng)], args, c + 1));
      }
      projects.push_back(make_project("p" + std::to_string(p), calls));
    }
    StatsDB direct = build_db(projects, ctx);
    StatsDB reference = oracle_build_db(projects, ctx);
    CHECK(direct.weights == reference.weights);

    // Permutation invariance: shuffle projects and calls.
    std::vector<ProjectRecord> shuffled = projects;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (ProjectRecord& project : shuffled)
      std::shuffle(project.call_sites.begin(), project.call_sites.end(), rng);
    CHECK(build_db(shuffled, ctx).weights == direct.weights);
  }
}
