#pragma once

// SARIF 2.1.0 output (the subset documented in docs/sarif-subset.md).

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "argswap/pipeline.hpp"
#include "argswap/version.hpp"

namespace argswap {

struct ToolMeta {
  std::string name = ARGSWAP_TOOL_NAME;
  std::string version = ARGSWAP_VERSION;
  std::string information_uri = ARGSWAP_INFO_URI;
  // Effective configuration, echoed into the run properties so a report
  // can be reproduced.
  std::map<std::string, std::string> properties;
  // When set, result URIs are emitted relative to this prefix.
  std::string uri_base;
};

namespace sarif_detail {

inline std::string relative_uri(const std::string& path, const std::string& base) {
  std::string uri = path;
  if (!base.empty()) {
    std::string prefix = base;
    if (!prefix.empty() && prefix.back() != '/') prefix += '/';
    if (uri.rfind(prefix, 0) == 0) uri = uri.substr(prefix.size());
  }
  for (char& c : uri)
    if (c == '\\') c = '/';
  return uri;
}

}  // namespace sarif_detail

inline std::string emit_sarif(const std::vector<Warning>& warnings,
                              const ToolMeta& meta) {
  using nlohmann::json;

  json rules = json::array();
  rules.push_back(
      {{"id", "swap.cover"},
       {"name", "SwappedArgumentsCover"},
       {"shortDescription",
        {{"text", "Argument names match the parameter names better when the "
                  "two arguments trade places."}}},
       {"defaultConfiguration", {{"level", "warning"}}}});
  rules.push_back(
      {{"id", "swap.statistical"},
       {"name", "SwappedArgumentsStatistical"},
       {"shortDescription",
        {{"text", "Corpus statistics say these argument morphemes are far "
                  "more common in each other's position."}}},
       {"defaultConfiguration", {{"level", "warning"}}}});

  json results = json::array();
  for (const Warning& w : warnings) {
    json result;
    result["ruleId"] = w.rule_id;
    result["ruleIndex"] = w.rule_id == "swap.cover" ? 0 : 1;
    result["level"] = "warning";
    result["message"] = {{"text", w.message}};
    result["locations"] = json::array({json{
        {"physicalLocation",
         {{"artifactLocation",
           {{"uri", sarif_detail::relative_uri(w.location.file_path, meta.uri_base)}}},
          {"region",
           {{"startLine", w.location.line}, {"startColumn", w.location.column}}}}}}});
    result["partialFingerprints"] = {{"swappedArgs/v1", w.fingerprint}};
    result["properties"] = {{"posI", w.pos_i},
                            {"posJ", w.pos_j},
                            {"callee", w.callee},
                            {"origin", origin_name(w.origin)}};
    results.push_back(std::move(result));
  }

  json driver = {{"name", meta.name},
                 {"version", meta.version},
                 {"informationUri", meta.information_uri},
                 {"rules", std::move(rules)}};
  json run = {{"tool", {{"driver", std::move(driver)}}},
              {"columnKind", "utf16CodeUnits"},
              {"results", std::move(results)}};
  if (!meta.properties.empty()) {
    json props = json::object();
    for (const auto& [key, value] : meta.properties) props[key] = value;
    run["properties"] = std::move(props);
  }

  json doc = {{"$schema", "https://json.schemastore.org/sarif-2.1.0.json"},
              {"version", "2.1.0"},
              {"runs", json::array({std::move(run)})}};
  return doc.dump(2) + "\n";
}

}  // namespace argswap
