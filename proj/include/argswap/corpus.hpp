#pragma once

// Corpus and target walking. A corpus root is a directory whose first-level
// subdirectories are projects. Identical file contents seen in more than
// one project count only for the first (sorted) project.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "argswap/pipeline.hpp"
#include "argswap/scan.hpp"
#include "argswap/types.hpp"

namespace argswap {

namespace fs = std::filesystem;

inline bool is_source_file(const fs::path& path) {
  static const std::set<std::string> exts = {".c",  ".h",  ".cc", ".cpp",
                                             ".hpp", ".cxx", ".hh", ".hxx"};
  return exts.count(path.extension().string()) > 0;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::vector<std::string> collect_source_files(const std::string& root) {
  std::vector<std::string> files;
  std::error_code ec;
  fs::file_status st = fs::status(root, ec);
  if (ec || st.type() == fs::file_type::not_found)
    throw std::runtime_error("cannot read path: " + root);
  if (fs::is_regular_file(st)) {
    files.push_back(root);
    return files;
  }
  for (auto it = fs::recursive_directory_iterator(
           root, fs::directory_options::skip_permission_denied, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (it->is_regular_file() && is_source_file(it->path()))
      files.push_back(it->path().generic_string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Scans files in parallel; results come back in input order.
inline std::vector<ScanResult> scan_files(const std::vector<std::string>& files,
                                          int jobs) {
  std::vector<ScanResult> results(files.size());
  if (jobs < 1) jobs = 1;
  if (jobs == 1 || files.size() <= 1) {
    for (std::size_t k = 0; k < files.size(); ++k)
      results[k] = scan_file_detailed(read_file(files[k]), files[k]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= files.size() || failed.load()) return;
      try {
        results[k] = scan_file_detailed(read_file(files[k]), files[k]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed = true;
        error_message = e.what();
        return;
      }
    }
  };
  int n = std::min<int>(jobs, static_cast<int>(files.size()));
  workers.reserve(n);
  for (int k = 0; k < n; ++k) workers.emplace_back(work);
  for (auto& worker : workers) worker.join();
  if (failed) throw std::runtime_error(error_message);
  return results;
}

struct CorpusStats {
  long projects = 0;
  long files_scanned = 0;
  long files_deduplicated = 0;
  long calls = 0;
  long decls = 0;
};

// Loads a corpus directory into project records. Scanning is per-file pure;
// output order is (project, file, line, column) regardless of job count.
inline std::vector<ProjectRecord> load_corpus_dir(const std::string& root, int jobs,
                                                  CorpusStats* stats = nullptr) {
  std::error_code ec;
  if (!fs::is_directory(root, ec))
    throw std::runtime_error("corpus root is not a directory: " + root);

  std::vector<std::pair<std::string, std::string>> project_dirs;  // (id, path)
  for (auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory())
      project_dirs.emplace_back(entry.path().filename().string(),
                                entry.path().generic_string());
  }
  std::sort(project_dirs.begin(), project_dirs.end());

  // Gather files, deduplicating identical contents across projects.
  std::vector<std::string> files;           // all kept files
  std::vector<std::size_t> project_of_file; // index into project_dirs
  std::set<std::uint64_t> seen_hashes;
  long deduplicated = 0;
  std::vector<std::string> sources;
  for (std::size_t p = 0; p < project_dirs.size(); ++p) {
    for (const std::string& file : collect_source_files(project_dirs[p].second)) {
      std::string content = read_file(file);
      std::uint64_t hash = pipeline_detail::fnv1a(content);
      if (!seen_hashes.insert(hash).second) {
        ++deduplicated;
        continue;
      }
      files.push_back(file);
      project_of_file.push_back(p);
      sources.push_back(std::move(content));
    }
  }

  // Scan (contents already in memory; reuse them rather than re-reading).
  std::vector<ScanResult> scans(files.size());
  {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (;;) {
        std::size_t k = next.fetch_add(1);
        if (k >= files.size()) return;
        scans[k] = scan_file_detailed(sources[k], files[k]);
      }
    };
    int n = std::max(1, std::min<int>(jobs, static_cast<int>(files.size())));
    if (n == 1) {
      work();
    } else {
      std::vector<std::thread> workers;
      for (int k = 0; k < n; ++k) workers.emplace_back(work);
      for (auto& worker : workers) worker.join();
    }
  }

  std::vector<ProjectRecord> projects(project_dirs.size());
  for (std::size_t p = 0; p < project_dirs.size(); ++p)
    projects[p].project_id = project_dirs[p].first;
  std::set<std::string> declared;
  for (const ScanResult& scan : scans)
    for (const DeclarationRecord& decl : scan.decls)
      declared.insert(decl.function_name);
  long call_count = 0, decl_count = 0;
  for (std::size_t k = 0; k < files.size(); ++k) {
    ProjectRecord& project = projects[project_of_file[k]];
    std::vector<CallSiteRecord> calls = scans[k].calls;
    resolve_macro_identifiers(calls, declared);
    call_count += static_cast<long>(calls.size());
    decl_count += static_cast<long>(scans[k].decls.size());
    project.call_sites.insert(project.call_sites.end(), calls.begin(), calls.end());
    project.declarations.insert(project.declarations.end(), scans[k].decls.begin(),
                                scans[k].decls.end());
  }
  // Files were visited in sorted order, so records are already sorted by
  // (file, line, column) within each project.
  if (stats) {
    stats->projects = static_cast<long>(projects.size());
    stats->files_scanned = static_cast<long>(files.size());
    stats->files_deduplicated = deduplicated;
    stats->calls = call_count;
    stats->decls = decl_count;
  }
  return projects;
}

// Builds the analysis universe for `check`: scan the given files/directories.
inline AnalysisUniverse scan_targets(const std::vector<std::string>& targets,
                                     int jobs) {
  std::vector<std::string> files;
  for (const std::string& target : targets) {
    std::vector<std::string> found = collect_source_files(target);
    files.insert(files.end(), found.begin(), found.end());
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());

  std::vector<ScanResult> scans = scan_files(files, jobs);
  AnalysisUniverse universe;
  std::set<std::string> declared;
  for (const ScanResult& scan : scans)
    for (const DeclarationRecord& decl : scan.decls)
      declared.insert(decl.function_name);
  for (std::size_t k = 0; k < files.size(); ++k) {
    std::vector<CallSiteRecord> calls = scans[k].calls;
    resolve_macro_identifiers(calls, declared);
    universe.calls.insert(universe.calls.end(), calls.begin(), calls.end());
    universe.decls.insert(universe.decls.end(), scans[k].decls.begin(),
                          scans[k].decls.end());
    if (!scans[k].var_types.empty())
      universe.var_types_by_file[files[k]] = scans[k].var_types;
  }
  return universe;
}

// The record-file ingestion path used by --records.
inline AnalysisUniverse universe_from_records(const std::vector<ProjectRecord>& projects) {
  AnalysisUniverse universe;
  for (const ProjectRecord& project : projects) {
    universe.calls.insert(universe.calls.end(), project.call_sites.begin(),
                          project.call_sites.end());
    universe.decls.insert(universe.decls.end(), project.declarations.begin(),
                          project.declarations.end());
  }
  return universe;
}

}  // namespace argswap
