#pragma once

// Line-delimited record files: one JSON object per line, kind "project",
// "call" or "decl". A project line opens a project; call/decl lines attach
// to the most recent one. See docs/record-format.md.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "argswap/types.hpp"

namespace argswap {

namespace records_detail {

using nlohmann::json;

inline json expr_to_json(const ArgExpr& expr) {
  json j;
  j["kind"] = expr_kind_name(expr.kind);
  if (!expr.text.empty()) j["text"] = expr.text;
  if (!expr.op.empty()) j["op"] = expr.op;
  if (!expr.children.empty()) {
    json kids = json::array();
    for (const ArgExpr& child : expr.children) kids.push_back(expr_to_json(child));
    j["children"] = std::move(kids);
  }
  return j;
}

inline ArgExpr expr_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::runtime_error(where + ": argument expression needs a kind");
  ArgExpr expr;
  auto kind = expr_kind_from_name(j.at("kind").get<std::string>());
  if (!kind) throw std::runtime_error(where + ": unknown expression kind");
  expr.kind = *kind;
  if (j.contains("text")) expr.text = j.at("text").get<std::string>();
  if (j.contains("op")) expr.op = j.at("op").get<std::string>();
  if (j.contains("children"))
    for (const json& child : j.at("children"))
      expr.children.push_back(expr_from_json(child, where));
  return expr;
}

inline json location_to_json(const SourceLocation& loc) {
  return json{{"file", loc.file_path}, {"line", loc.line}, {"column", loc.column}};
}

inline SourceLocation location_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw std::runtime_error(where + ": bad location");
  SourceLocation loc;
  loc.file_path = j.value("file", std::string());
  loc.line = j.value("line", 1);
  loc.column = j.value("column", 1);
  if (loc.line < 1 || loc.column < 1)
    throw std::runtime_error(where + ": location line/column must be >= 1");
  return loc;
}

inline json call_to_json(const CallSiteRecord& call) {
  json j;
  j["kind"] = "call";
  j["callee"] = call.callee;
  j["location"] = location_to_json(call.location);
  if (call.caller_name) j["caller_name"] = *call.caller_name;
  json args = json::array();
  for (const ArgExpr& arg : call.args) args.push_back(expr_to_json(arg));
  j["args"] = std::move(args);
  j["arg_source_texts"] = call.arg_source_texts;
  if (!call.enclosing_conditions.empty())
    j["enclosing_conditions"] = call.enclosing_conditions;
  if (!call.preceding_lines.empty()) j["preceding_lines"] = call.preceding_lines;
  if (call.from_macro_expansion) j["from_macro_expansion"] = true;
  return j;
}

inline json decl_to_json(const DeclarationRecord& decl) {
  json j;
  j["kind"] = "decl";
  j["function_name"] = decl.function_name;
  j["location"] = location_to_json(decl.location);
  if (decl.param_names) {
    json names = json::array();
    for (const auto& name : *decl.param_names) {
      if (name)
        names.push_back(*name);
      else
        names.push_back(nullptr);
    }
    j["param_names"] = std::move(names);
  }
  if (decl.param_types) j["param_types"] = *decl.param_types;
  return j;
}

inline const std::set<std::string>& known_fields(const std::string& kind) {
  static const std::set<std::string> project = {"kind", "project_id"};
  static const std::set<std::string> call = {
      "kind", "callee", "location", "caller_name", "args", "arg_source_texts",
      "enclosing_conditions", "preceding_lines", "from_macro_expansion"};
  static const std::set<std::string> decl = {"kind", "function_name", "location",
                                             "param_names", "param_types"};
  if (kind == "project") return project;
  if (kind == "call") return call;
  return decl;
}

}  // namespace records_detail

// Serializes projects deterministically (object keys sorted, one record per
// line).
inline void write_records(const std::vector<ProjectRecord>& projects,
                          std::ostream& out) {
  using records_detail::json;
  for (const ProjectRecord& project : projects) {
    out << json{{"kind", "project"}, {"project_id", project.project_id}}.dump()
        << '\n';
    for (const DeclarationRecord& decl : project.declarations)
      out << records_detail::decl_to_json(decl).dump() << '\n';
    for (const CallSiteRecord& call : project.call_sites)
      out << records_detail::call_to_json(call).dump() << '\n';
  }
}

inline void write_records_file(const std::vector<ProjectRecord>& projects,
                               const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write record file: " + path);
  write_records(projects, out);
}

// Parses a record stream. Malformed lines raise with their line number;
// unknown fields are reported to `diag` and ignored.
inline std::vector<ProjectRecord> read_records(std::istream& in,
                                               const std::string& origin,
                                               std::ostream* diag = nullptr) {
  using records_detail::json;
  std::vector<ProjectRecord> projects;
  std::set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string where = origin + ":" + std::to_string(line_no);
    if (line.empty() || line[0] == '#') continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error(where + ": malformed record line: " + e.what());
    }
    if (!j.is_object() || !j.contains("kind"))
      throw std::runtime_error(where + ": record line must be an object with a kind");
    std::string kind = j.at("kind").get<std::string>();
    if (kind != "project" && kind != "call" && kind != "decl")
      throw std::runtime_error(where + ": unknown record kind '" + kind + "'");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!records_detail::known_fields(kind).count(it.key()) && diag)
        *diag << where << ": ignoring unknown field '" << it.key() << "'\n";
    }
    if (kind == "project") {
      std::string id = j.value("project_id", std::string());
      if (id.empty()) throw std::runtime_error(where + ": project needs a project_id");
      if (!seen_ids.insert(id).second)
        throw std::runtime_error(where + ": duplicate project id '" + id + "'");
      projects.push_back(ProjectRecord{id, {}, {}});
      continue;
    }
    if (projects.empty())
      throw std::runtime_error(where + ": " + kind + " record before any project");
    if (kind == "call") {
      CallSiteRecord call;
      call.callee = j.value("callee", std::string());
      if (call.callee.empty()) throw std::runtime_error(where + ": call needs a callee");
      call.location = records_detail::location_from_json(
          j.value("location", json::object()), where);
      if (j.contains("caller_name"))
        call.caller_name = j.at("caller_name").get<std::string>();
      if (j.contains("args"))
        for (const json& arg : j.at("args"))
          call.args.push_back(records_detail::expr_from_json(arg, where));
      if (j.contains("arg_source_texts"))
        call.arg_source_texts =
            j.at("arg_source_texts").get<std::vector<std::string>>();
      if (call.arg_source_texts.size() != call.args.size())
        throw std::runtime_error(where +
                                 ": args and arg_source_texts must have equal length");
      if (j.contains("enclosing_conditions")) {
        call.enclosing_conditions =
            j.at("enclosing_conditions").get<std::vector<std::string>>();
        if (call.enclosing_conditions.size() > 5)
          throw std::runtime_error(where + ": more than 5 enclosing conditions");
      }
      if (j.contains("preceding_lines")) {
        call.preceding_lines = j.at("preceding_lines").get<std::vector<std::string>>();
        if (call.preceding_lines.size() > 6)
          throw std::runtime_error(where + ": more than 6 preceding lines");
      }
      call.from_macro_expansion = j.value("from_macro_expansion", false);
      projects.back().call_sites.push_back(std::move(call));
      continue;
    }
    DeclarationRecord decl;
    decl.function_name = j.value("function_name", std::string());
    if (decl.function_name.empty())
      throw std::runtime_error(where + ": decl needs a function_name");
    decl.location =
        records_detail::location_from_json(j.value("location", json::object()), where);
    if (j.contains("param_names")) {
      std::vector<std::optional<std::string>> names;
      for (const json& name : j.at("param_names")) {
        if (name.is_null())
          names.push_back(std::nullopt);
        else
          names.push_back(name.get<std::string>());
      }
      decl.param_names = std::move(names);
    }
    if (j.contains("param_types"))
      decl.param_types = j.at("param_types").get<std::vector<std::string>>();
    if (decl.param_names && decl.param_types &&
        decl.param_names->size() != decl.param_types->size())
      throw std::runtime_error(where +
                               ": param_names and param_types must have equal length");
    projects.back().declarations.push_back(std::move(decl));
  }
  return projects;
}

inline std::vector<ProjectRecord> read_records_file(const std::string& path,
                                                    std::ostream* diag = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open record file: " + path);
  return read_records(in, path, diag);
}

}  // namespace argswap
