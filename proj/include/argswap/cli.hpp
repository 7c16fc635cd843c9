#pragma once

// Command-line entry points: build-db, check, corpus-stats.

#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "argswap/corpus.hpp"
#include "argswap/naming.hpp"
#include "argswap/pipeline.hpp"
#include "argswap/records_io.hpp"
#include "argswap/sarif.hpp"
#include "argswap/stats.hpp"
#include "argswap/version.hpp"

namespace argswap {

namespace cli_detail {

inline std::string default_data_dir() {
#ifdef ARGSWAP_DEFAULT_DATA_DIR
  return ARGSWAP_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

inline std::string utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

struct CheckSettings {
  Thresholds thresholds;
  std::set<std::string> whitelist_words = {"swap", "exchange", "rotate", "flip"};
  int not_rare_count = 3;
  std::vector<std::string> disabled_filters;
  std::vector<std::string> disabled_stages;
};

// Config file: a JSON object; command-line flags override its values.
inline void load_config_file(const std::string& path, CheckSettings& settings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": bad config file: " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error(path + ": config must be a JSON object");
  if (j.contains("alpha1")) settings.thresholds.alpha1 = j["alpha1"].get<double>();
  if (j.contains("alpha2")) settings.thresholds.alpha2 = j["alpha2"].get<double>();
  if (j.contains("beta")) settings.thresholds.beta = j["beta"].get<double>();
  if (j.contains("gamma")) settings.thresholds.gamma = j["gamma"].get<double>();
  if (j.contains("sim_threshold"))
    settings.thresholds.sim_threshold = j["sim_threshold"].get<double>();
  if (j.contains("max_swap_distance"))
    settings.thresholds.max_pair_distance = j["max_swap_distance"].get<int>();
  if (j.contains("not_rare_count")) settings.not_rare_count = j["not_rare_count"].get<int>();
  if (j.contains("whitelist_words")) {
    settings.whitelist_words.clear();
    for (const auto& w : j["whitelist_words"])
      settings.whitelist_words.insert(w.get<std::string>());
  }
  if (j.contains("disable_filters"))
    for (const auto& f : j["disable_filters"])
      settings.disabled_filters.push_back(f.get<std::string>());
  if (j.contains("disable_stages"))
    for (const auto& s : j["disable_stages"])
      settings.disabled_stages.push_back(s.get<std::string>());
}

struct SharedInputs {
  std::string records_path;
  std::string wordlist_path;
  std::string stoplist_path;
  int jobs = 1;
};

inline void add_shared_options(CLI::App* cmd, SharedInputs& inputs) {
  cmd->add_option("--records", inputs.records_path,
                  "Read pre-extracted records instead of scanning source");
  cmd->add_option("--wordlist", inputs.wordlist_path,
                  "English wordlist used by the splitter (one word per line)");
  cmd->add_option("--stoplist", inputs.stoplist_path,
                  "Replacement stop-morpheme list (one token per line)");
  cmd->add_option("--jobs", inputs.jobs, "Worker threads for scanning")
      ->check(CLI::Range(1, 256));
}

inline WordList load_wordlist(const SharedInputs& inputs) {
  std::string path = inputs.wordlist_path.empty()
                         ? default_data_dir() + "/wordlist.txt"
                         : inputs.wordlist_path;
  return WordList::load(path);
}

inline StopList load_stoplist(const SharedInputs& inputs) {
  if (inputs.stoplist_path.empty()) return StopList::defaults();
  return StopList::load(inputs.stoplist_path);
}

}  // namespace cli_detail

// Runs the tool. `args` excludes the program name. Returns the process exit
// code: for `check`, 0 means no warnings, 1 means warnings, >= 2 means an
// operational error.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  using cli_detail::CheckSettings;
  using cli_detail::SharedInputs;

  CLI::App app{"argswap: finds likely swapped arguments at call sites"};
  app.set_version_flag("--version", ARGSWAP_VERSION);
  app.require_subcommand(1);

  // --- build-db ------------------------------------------------------------
  auto* build = app.add_subcommand("build-db",
                                   "Build the statistical database from a corpus");
  std::string build_root;
  std::string build_out;
  std::string build_freq_out;
  std::string build_timestamp;
  SharedInputs build_inputs;
  build->add_option("corpus", build_root,
                    "Corpus root (first-level subdirectories are projects)");
  build->add_option("--out", build_out, "Output path for the statistics database")
      ->required();
  build->add_option("--freq-table", build_freq_out,
                    "Output path for the token frequency table (default: <out>.freq)");
  build->add_option("--timestamp", build_timestamp,
                    "Fix the build timestamp (for reproducible output)");
  cli_detail::add_shared_options(build, build_inputs);

  // --- check ---------------------------------------------------------------
  auto* check = app.add_subcommand("check", "Check source for swapped arguments");
  std::vector<std::string> check_targets;
  std::string check_db_path;
  std::string check_freq_path;
  std::string check_synonyms_path;
  std::string check_out_path;
  std::string check_uri_base;
  std::string check_config_path;
  std::string check_whitelist_csv;
  std::vector<std::string> check_disable_filters;
  std::vector<std::string> check_disable_stages;
  CheckSettings settings;
  SharedInputs check_inputs;
  check->add_option("targets", check_targets, "Source files or directories");
  check->add_option("--db", check_db_path, "Statistical database file");
  check->add_option("--freq-table", check_freq_path, "Token frequency table file");
  check->add_option("--synonyms", check_synonyms_path,
                    "Synonym file (token,token per line)");
  check->add_option("--out", check_out_path, "Write the SARIF report here "
                                             "(default: standard output)");
  check->add_option("--uri-base", check_uri_base,
                    "Emit result URIs relative to this directory");
  check->add_option("--config", check_config_path, "JSON config file");
  auto* opt_a1 = check->add_option("--alpha1", settings.thresholds.alpha1,
                                   "Cover threshold: in-place cover must be below");
  auto* opt_a2 = check->add_option("--alpha2", settings.thresholds.alpha2,
                                   "Cover threshold: swapped cover must be above");
  auto* opt_beta = check->add_option("--beta", settings.thresholds.beta,
                                     "Statistical vetting threshold");
  auto* opt_gamma = check->add_option("--gamma", settings.thresholds.gamma,
                                      "Statistical checker misplacement threshold");
  auto* opt_sim = check->add_option("--sim-threshold", settings.thresholds.sim_threshold,
                                    "Similarity bar for 'sufficiently similar'");
  auto* opt_wl = check->add_option("--whitelist-words", check_whitelist_csv,
                                   "Comma-separated replacement whitelist words");
  check->add_option("--disable-filter", check_disable_filters,
                    "Disable one false-positive filter (repeatable)");
  check->add_option("--disable-stage", check_disable_stages,
                    "Disable a pipeline stage: cover, vetting, statistical, "
                    "filtering (repeatable)");
  cli_detail::add_shared_options(check, check_inputs);

  // --- corpus-stats ----------------------------------------------------------
  auto* stats_cmd = app.add_subcommand("corpus-stats",
                                       "Morpheme-set size histograms for a corpus");
  std::string stats_root;
  std::string stats_freq_path;
  SharedInputs stats_inputs;
  stats_cmd->add_option("corpus", stats_root, "Corpus root");
  stats_cmd->add_option("--freq-table", stats_freq_path,
                        "Use this frequency table instead of building one");
  cli_detail::add_shared_options(stats_cmd, stats_inputs);

  std::vector<const char*> argv;
  argv.push_back("argswap");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << ARGSWAP_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    // ----------------------------------------------------------------- build-db
    if (build->parsed()) {
      if (build_root.empty() && build_inputs.records_path.empty())
        throw std::runtime_error("build-db needs a corpus root or --records");
      std::vector<ProjectRecord> projects;
      CorpusStats corpus_stats;
      if (!build_inputs.records_path.empty()) {
        projects = read_records_file(build_inputs.records_path, &err);
        corpus_stats.projects = static_cast<long>(projects.size());
        for (const ProjectRecord& p : projects) {
          corpus_stats.calls += static_cast<long>(p.call_sites.size());
          corpus_stats.decls += static_cast<long>(p.declarations.size());
        }
      } else {
        projects = load_corpus_dir(build_root, build_inputs.jobs, &corpus_stats);
      }
      WordList words = cli_detail::load_wordlist(build_inputs);
      StopList stops = cli_detail::load_stoplist(build_inputs);
      FrequencyTable freq = build_frequency_table(projects);
      SplitContext ctx{&freq, &words, stops};
      StatsDB db = build_db(projects, ctx);
      db.meta.build_timestamp =
          build_timestamp.empty() ? cli_detail::utc_now() : build_timestamp;
      db.save_file(build_out);
      std::string freq_out =
          build_freq_out.empty() ? build_out + ".freq" : build_freq_out;
      freq.save_file(freq_out);
      long keys = 0;
      for (const auto& [fn, positions] : db.weights)
        for (const auto& [pos, morphemes] : positions)
          keys += static_cast<long>(morphemes.size());
      out << "projects: " << corpus_stats.projects << "\n"
          << "calls: " << corpus_stats.calls << "\n"
          << "declarations: " << corpus_stats.decls << "\n"
          << "deduplicated files: " << corpus_stats.files_deduplicated << "\n"
          << "db keys: " << keys << "\n"
          << "db: " << build_out << "\n"
          << "frequency table: " << freq_out << "\n";
      return 0;
    }

    // -------------------------------------------------------------------- check
    if (check->parsed()) {
      if (check_targets.empty() && check_inputs.records_path.empty())
        throw std::runtime_error("check needs target paths or --records");
      if (!check_config_path.empty()) {
        // Precedence: command line > config file > defaults. CLI11 already
        // wrote flag values into `settings`, so stash them, let the config
        // overwrite, then restore whatever was given explicitly.
        Thresholds given = settings.thresholds;
        cli_detail::load_config_file(check_config_path, settings);
        if (opt_a1->count()) settings.thresholds.alpha1 = given.alpha1;
        if (opt_a2->count()) settings.thresholds.alpha2 = given.alpha2;
        if (opt_beta->count()) settings.thresholds.beta = given.beta;
        if (opt_gamma->count()) settings.thresholds.gamma = given.gamma;
        if (opt_sim->count()) settings.thresholds.sim_threshold = given.sim_threshold;
      }
      if (opt_wl->count()) {
        settings.whitelist_words.clear();
        for (const std::string& w : cli_detail::split_csv(check_whitelist_csv))
          settings.whitelist_words.insert(w);
      }
      for (const std::string& f : check_disable_filters)
        settings.disabled_filters.push_back(f);
      for (const std::string& s : check_disable_stages)
        settings.disabled_stages.push_back(s);

      if (!settings.thresholds.valid())
        throw std::runtime_error("invalid thresholds: need 0 <= alpha1 <= alpha2 <= 1, "
                                 "beta >= 0, gamma >= 0");
      for (const std::string& name : settings.disabled_filters) {
        if (std::find(filter_names().begin(), filter_names().end(), name) ==
            filter_names().end())
          throw std::runtime_error("unknown filter: " + name);
      }
      static const std::set<std::string> stage_names = {"cover", "vetting",
                                                        "statistical", "filtering"};
      for (const std::string& name : settings.disabled_stages)
        if (!stage_names.count(name))
          throw std::runtime_error("unknown stage: " + name);

      AnalysisUniverse universe;
      if (!check_inputs.records_path.empty()) {
        universe = universe_from_records(read_records_file(check_inputs.records_path, &err));
      } else {
        universe = scan_targets(check_targets, check_inputs.jobs);
      }

      WordList words = cli_detail::load_wordlist(check_inputs);
      StopList stops = cli_detail::load_stoplist(check_inputs);
      FrequencyTable freq;
      if (!check_freq_path.empty()) freq = FrequencyTable::load_file(check_freq_path);
      SplitContext ctx{&freq, &words, stops};

      std::optional<StatsDB> db;
      if (!check_db_path.empty()) db = StatsDB::load_file(check_db_path);
      if (!db)
        err << "note: no statistical database provided; statistical vetting and "
               "the statistical checker are disabled\n";

      SynonymTable synonyms;
      if (!check_synonyms_path.empty())
        synonyms = SynonymTable::load(check_synonyms_path);

      PipelineConfig cfg;
      cfg.thresholds = settings.thresholds;
      cfg.filters.whitelist_words = settings.whitelist_words;
      cfg.filters.max_swap_distance = settings.thresholds.max_pair_distance;
      cfg.filters.not_rare_count = settings.not_rare_count;
      cfg.filters.disabled.insert(settings.disabled_filters.begin(),
                                  settings.disabled_filters.end());
      for (const std::string& s : settings.disabled_stages) {
        if (s == "cover") cfg.cover_enabled = false;
        if (s == "vetting") cfg.vetting_enabled = false;
        if (s == "statistical") cfg.statistical_enabled = false;
        if (s == "filtering") cfg.filtering_enabled = false;
      }

      AnalysisResult result = analyze(universe, db ? &*db : nullptr, ctx,
                                      synonyms.empty() ? nullptr : &synonyms, cfg);

      ToolMeta meta;
      meta.uri_base = check_uri_base;
      char buf[32];
      auto dbl = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%g", v);
        return std::string(buf);
      };
      meta.properties["alpha1"] = dbl(settings.thresholds.alpha1);
      meta.properties["alpha2"] = dbl(settings.thresholds.alpha2);
      meta.properties["beta"] = dbl(settings.thresholds.beta);
      meta.properties["gamma"] = dbl(settings.thresholds.gamma);
      meta.properties["simThreshold"] = dbl(settings.thresholds.sim_threshold);
      meta.properties["maxSwapDistance"] =
          std::to_string(settings.thresholds.max_pair_distance);
      meta.properties["notRareCount"] = std::to_string(settings.not_rare_count);
      meta.properties["statisticalDb"] = db ? "yes" : "no";
      {
        std::string words_csv;
        for (const std::string& w : settings.whitelist_words) {
          if (!words_csv.empty()) words_csv += ",";
          words_csv += w;
        }
        meta.properties["whitelistWords"] = words_csv;
      }

      std::string sarif = emit_sarif(result.warnings, meta);
      if (check_out_path.empty()) {
        out << sarif;
      } else {
        std::ofstream sarif_out(check_out_path, std::ios::binary);
        if (!sarif_out)
          throw std::runtime_error("cannot write report: " + check_out_path);
        sarif_out << sarif;
      }
      err << result.warnings.size() << " warning(s), " << result.filtered_away
          << " filtered, " << result.vetted_away << " vetted away\n";
      return result.warnings.empty() ? 0 : 1;
    }

    // ------------------------------------------------------------- corpus-stats
    if (stats_cmd->parsed()) {
      if (stats_root.empty() && stats_inputs.records_path.empty())
        throw std::runtime_error("corpus-stats needs a corpus root or --records");
      std::vector<ProjectRecord> projects;
      if (!stats_inputs.records_path.empty())
        projects = read_records_file(stats_inputs.records_path, &err);
      else
        projects = load_corpus_dir(stats_root, stats_inputs.jobs);
      WordList words = cli_detail::load_wordlist(stats_inputs);
      StopList stops = cli_detail::load_stoplist(stats_inputs);
      FrequencyTable freq;
      if (!stats_freq_path.empty())
        freq = FrequencyTable::load_file(stats_freq_path);
      else
        freq = build_frequency_table(projects);
      SplitContext ctx{&freq, &words, stops};
      MorphologyReport report = morphology_report(projects, ctx);

      auto print_histogram = [&](const char* title, const char* tag,
                                 const std::array<long, 3>& hist) {
        out << "morpheme-set sizes (" << title << ")\n";
        const char* labels[3] = {"1", "2", ">=3"};
        for (int k = 0; k < 3; ++k) {
          out << "  " << labels[k] << ": " << hist[k] << "\n";
        }
        for (int k = 0; k < 3; ++k)
          out << "corpus-stats\t" << tag << '\t' << labels[k] << '\t' << hist[k]
              << "\n";
      };
      print_histogram("argument names", "arg", report.argument_names);
      print_histogram("parameter names", "param", report.parameter_names);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace argswap
