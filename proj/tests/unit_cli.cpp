#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "argswap/cli.hpp"

using namespace argswap;
using nlohmann::json;

namespace {

const std::string kFixtures = ARGSWAP_FIXTURE_DIR;

struct CliRun {
  int exit_code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("argswap_test_" + name))
      .string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("cli: check over the fixture corpus with statistics") {
  std::string out_path = temp_path("corpus.sarif");
  CliRun r = run({"check", kFixtures + "/corpus", "--db", kFixtures + "/golden.db",
                  "--freq-table", kFixtures + "/golden.freq", "--uri-base",
                  kFixtures, "--out", out_path});
  CHECK(r.exit_code == 1);

  json doc = json::parse(slurp(out_path));
  const json& results = doc["runs"][0]["results"];
  REQUIRE(results.size() == 5);
  auto uri = [&](int k) {
    return results[k]["locations"][0]["physicalLocation"]["artifactLocation"]["uri"]
        .get<std::string>();
  };
  CHECK(uri(0) == "corpus/bonesi/tcp.c");
  CHECK(results[0]["ruleId"] == "swap.cover");
  CHECK(uri(1) == "corpus/gpaste/input.c");
  CHECK(results[1]["ruleId"] == "swap.statistical");
  CHECK(uri(2) == "corpus/velvet/correct.c");
  CHECK(results[2]["ruleId"] == "swap.cover");
  CHECK(uri(3) == "corpus/xscreensaver/cube.c");
  CHECK(results[3]["ruleId"] == "swap.cover");
  CHECK(uri(4) == "corpus/xvile/watch.c");
  CHECK(results[4]["ruleId"] == "swap.cover");
  std::remove(out_path.c_str());
}

TEST_CASE("cli: without a database only the cover checker runs") {
  CliRun r = run({"check", kFixtures + "/corpus", "--freq-table",
                  kFixtures + "/golden.freq", "--uri-base", kFixtures});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("no statistical database") != std::string::npos);
  json doc = json::parse(r.out);
  // The statistical finding disappears, and the candidate that vetting
  // would have discarded now survives: yield up, precision down.
  REQUIRE(doc["runs"][0]["results"].size() == 5);
  std::set<std::string> uris, rules;
  for (const auto& result : doc["runs"][0]["results"]) {
    uris.insert(result["locations"][0]["physicalLocation"]["artifactLocation"]
                      ["uri"].get<std::string>());
    rules.insert(result["ruleId"].get<std::string>());
  }
  CHECK(uris.count("corpus/gst-plugins/sync.c") == 1);
  CHECK(uris.count("corpus/gpaste/input.c") == 0);
  CHECK(rules == std::set<std::string>{"swap.cover"});
}

TEST_CASE("cli: clean file exits zero") {
  CliRun r = run({"check", kFixtures + "/corpus/xvile/daemon.c", "--db",
                  kFixtures + "/golden.db", "--freq-table",
                  kFixtures + "/golden.freq"});
  CHECK(r.exit_code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["runs"][0]["results"].empty());
}

TEST_CASE("cli: operational errors exit with 2") {
  CliRun missing = run({"check", kFixtures + "/no-such-dir"});
  CHECK(missing.exit_code == 2);
  CHECK(!missing.err.empty());

  CliRun bad_flag = run({"check", "--no-such-flag"});
  CHECK(bad_flag.exit_code == 2);

  CliRun bad_db = run({"check", kFixtures + "/corpus", "--db",
                       kFixtures + "/golden.freq"});
  CHECK(bad_db.exit_code == 2);

  CliRun no_cmd = run({});
  CHECK(no_cmd.exit_code == 2);

  CliRun bad_thresholds = run({"check", kFixtures + "/corpus/xvile", "--alpha1",
                               "0.9", "--alpha2", "0.6"});
  CHECK(bad_thresholds.exit_code == 2);
  CHECK(bad_thresholds.err.find("thresholds") != std::string::npos);

  CliRun bad_stage = run({"check", kFixtures + "/corpus/xvile",
                          "--disable-stage", "nonsense"});
  CHECK(bad_stage.exit_code == 2);
}

TEST_CASE("cli: report bytes are independent of --jobs") {
  std::string a = temp_path("jobs1.sarif");
  std::string b = temp_path("jobs4.sarif");
  CliRun r1 = run({"check", kFixtures + "/corpus", "--db", kFixtures + "/golden.db",
                   "--freq-table", kFixtures + "/golden.freq", "--uri-base",
                   kFixtures, "--jobs", "1", "--out", a});
  CliRun r4 = run({"check", kFixtures + "/corpus", "--db", kFixtures + "/golden.db",
                   "--freq-table", kFixtures + "/golden.freq", "--uri-base",
                   kFixtures, "--jobs", "4", "--out", b});
  CHECK(r1.exit_code == 1);
  CHECK(r4.exit_code == 1);
  CHECK(slurp(a) == slurp(b));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("cli: build-db writes the database and frequency table") {
  std::string db_path = temp_path("built.db");
  std::string freq_path = temp_path("built.freq");
  CliRun r = run({"build-db", kFixtures + "/corpus", "--out", db_path,
                  "--freq-table", freq_path, "--timestamp",
                  "2026-01-15T00:00:00Z"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("projects: 8") != std::string::npos);

  StatsDB db = StatsDB::load_file(db_path);
  CHECK(db.meta.project_count == 8);
  CHECK(db.meta.build_timestamp == "2026-01-15T00:00:00Z");
  // The correctly-ordered kill call in xvile/daemon.c contributes these.
  CHECK(db.weight("kill", "pid", 1) == 1);
  CHECK(db.weight("kill", "sig", 2) == 1);

  FrequencyTable freq = FrequencyTable::load_file(freq_path);
  CHECK(freq.counts.at("pid") >= 2);

  // Deterministic bytes across repeated builds, including parallel ones.
  std::string db2 = temp_path("built2.db");
  std::string freq2 = temp_path("built2.freq");
  run({"build-db", kFixtures + "/corpus", "--out", db2, "--freq-table", freq2,
       "--timestamp", "2026-01-15T00:00:00Z", "--jobs", "3"});
  CHECK(slurp(db_path) == slurp(db2));
  CHECK(slurp(freq_path) == slurp(freq2));
  for (const std::string& p : {db_path, freq_path, db2, freq2})
    std::remove(p.c_str());
}

TEST_CASE("cli: duplicate file contents count for the first project only") {
  namespace fs = std::filesystem;
  fs::path root = fs::temp_directory_path() / "argswap_dedup_corpus";
  fs::remove_all(root);
  fs::create_directories(root / "p1");
  fs::create_directories(root / "p2");
  const char* same =
      "void log_pair(int first, int second);\n"
      "void f(void) { log_pair(second_val, first_val); }\n";
  {
    std::ofstream(root / "p1" / "a.c") << same;
    std::ofstream(root / "p2" / "b.c") << same;
  }
  CorpusStats stats;
  std::vector<ProjectRecord> projects =
      load_corpus_dir(root.string(), 1, &stats);
  REQUIRE(projects.size() == 2);
  CHECK(stats.files_deduplicated == 1);
  CHECK(projects[0].call_sites.size() == 1);
  CHECK(projects[1].call_sites.empty());
  fs::remove_all(root);
}

TEST_CASE("cli: build-db on a bad root fails") {
  CliRun r = run({"build-db", kFixtures + "/nope", "--out", temp_path("x.db")});
  CHECK(r.exit_code == 2);
}

TEST_CASE("cli: corpus-stats prints both histograms") {
  CliRun r = run({"corpus-stats", kFixtures + "/corpus", "--freq-table",
                  kFixtures + "/golden.freq"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("morpheme-set sizes (argument names)") != std::string::npos);
  CHECK(r.out.find("morpheme-set sizes (parameter names)") != std::string::npos);

  // Histogram totals must equal the hand count of fixture names: 35
  // arguments carry morphemes (13 literal arguments do not) and 57
  // parameters are named across all declarations and definitions.
  long arg_total = 0, param_total = 0;
  std::istringstream lines(r.out);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("corpus-stats\t", 0) != 0) continue;
    std::istringstream fields(line);
    std::string tag, kind, bucket;
    long count = 0;
    std::getline(fields, tag, '\t');
    std::getline(fields, kind, '\t');
    std::getline(fields, bucket, '\t');
    fields >> count;
    (kind == "arg" ? arg_total : param_total) += count;
  }
  CHECK(arg_total == 35);
  CHECK(param_total == 57);
}

TEST_CASE("cli: build-db over an empty corpus root") {
  std::string empty_dir = temp_path("empty_corpus");
  std::filesystem::create_directories(empty_dir);
  std::string db_path = temp_path("empty.db");
  CliRun r = run({"build-db", empty_dir, "--out", db_path, "--timestamp",
                  "2026-01-15T00:00:00Z"});
  CHECK(r.exit_code == 0);
  StatsDB db = StatsDB::load_file(db_path);
  CHECK(db.weights.empty());
  CHECK(db.meta.project_count == 0);
  std::remove(db_path.c_str());
  std::remove((db_path + ".freq").c_str());
  std::filesystem::remove(empty_dir);
}

TEST_CASE("cli: record-file ingestion") {
  CliRun r = run({"check", "--records", kFixtures + "/golden-records.jsonl",
                  "--db", kFixtures + "/golden.db", "--freq-table",
                  kFixtures + "/golden.freq"});
  CHECK(r.exit_code == 1);
  json doc = json::parse(r.out);
  CHECK(doc["runs"][0]["results"].size() == 4);  // no xscreensaver project in the record file

  std::vector<ProjectRecord> projects =
      read_records_file(kFixtures + "/golden-records.jsonl");
  CHECK(projects.size() == 7);

  // Reading and re-writing the bundled record file reproduces it byte for
  // byte (keys are already in canonical order).
  std::ostringstream rewritten;
  write_records(projects, rewritten);
  CHECK(rewritten.str() == slurp(kFixtures + "/golden-records.jsonl"));
}

TEST_CASE("cli: synonym file changes the verdict") {
  CliRun without = run({"check", kFixtures + "/synonym-corpus", "--freq-table",
                        kFixtures + "/golden.freq"});
  CHECK(without.exit_code == 0);
  CliRun with = run({"check", kFixtures + "/synonym-corpus", "--freq-table",
                     kFixtures + "/golden.freq", "--synonyms",
                     kFixtures + "/synonyms.txt"});
  CHECK(with.exit_code == 1);
  json doc = json::parse(with.out);
  REQUIRE(doc["runs"][0]["results"].size() == 1);
  CHECK(doc["runs"][0]["results"][0]["properties"]["posI"] == 3);
  CHECK(doc["runs"][0]["results"][0]["properties"]["posJ"] == 5);
}

TEST_CASE("cli: threshold flags and config precedence") {
  // gamma high enough to kill the statistical warning for gpaste
  CliRun strict = run({"check", kFixtures + "/corpus/gpaste", "--db",
                       kFixtures + "/golden.db", "--freq-table",
                       kFixtures + "/golden.freq", "--gamma", "20"});
  CHECK(strict.exit_code == 0);

  std::string cfg_path = temp_path("cfg.json");
  {
    std::ofstream out(cfg_path);
    out << "{\"gamma\": 20}\n";
  }
  CliRun via_config = run({"check", kFixtures + "/corpus/gpaste", "--db",
                           kFixtures + "/golden.db", "--freq-table",
                           kFixtures + "/golden.freq", "--config", cfg_path});
  CHECK(via_config.exit_code == 0);

  // The command line overrides the config file.
  CliRun overridden = run({"check", kFixtures + "/corpus/gpaste", "--db",
                           kFixtures + "/golden.db", "--freq-table",
                           kFixtures + "/golden.freq", "--config", cfg_path,
                           "--gamma", "5"});
  CHECK(overridden.exit_code == 1);
  std::remove(cfg_path.c_str());
}

TEST_CASE("cli: disable-filter and disable-stage") {
  // With the whitelist filter off, the pixbuf fixture warns.
  CliRun unfiltered = run({"check", kFixtures + "/corpus/mate-panel",
                           "--freq-table", kFixtures + "/golden.freq",
                           "--disable-filter", "whitelist-words"});
  CHECK(unfiltered.exit_code == 1);

  CliRun filtered = run({"check", kFixtures + "/corpus/mate-panel",
                         "--freq-table", kFixtures + "/golden.freq"});
  CHECK(filtered.exit_code == 0);

  CliRun unknown = run({"check", kFixtures + "/corpus/mate-panel",
                        "--disable-filter", "bogus"});
  CHECK(unknown.exit_code == 2);

  CliRun no_cover = run({"check", kFixtures + "/corpus/xvile", "--db",
                         kFixtures + "/golden.db", "--freq-table",
                         kFixtures + "/golden.freq", "--disable-stage", "cover"});
  CHECK(no_cover.exit_code == 1);
  json doc = json::parse(no_cover.out);
  REQUIRE(doc["runs"][0]["results"].size() == 1);
  CHECK(doc["runs"][0]["results"][0]["ruleId"] == "swap.statistical");
}

TEST_CASE("cli: replacement whitelist words") {
  // With a whitelist that no longer contains "rotate", the pixbuf call
  // stops being excused.
  CliRun replaced = run({"check", kFixtures + "/corpus/mate-panel",
                         "--freq-table", kFixtures + "/golden.freq",
                         "--whitelist-words", "frobnicate,transpose"});
  CHECK(replaced.exit_code == 1);

  CliRun standard = run({"check", kFixtures + "/corpus/mate-panel",
                         "--freq-table", kFixtures + "/golden.freq"});
  CHECK(standard.exit_code == 0);
}

TEST_CASE("cli: corpus-stats on a bad root fails") {
  CliRun r = run({"corpus-stats", kFixtures + "/missing-root"});
  CHECK(r.exit_code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("cli: version and help") {
  CliRun version = run({"--version"});
  CHECK(version.exit_code == 0);
  CHECK(version.out.find("0.1.0") != std::string::npos);

  CliRun help = run({"--help"});
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("build-db") != std::string::npos);
}
