#pragma once

// Record types shared by the scanner, the checkers, and the report emitters.

#include <optional>
#include <string>
#include <vector>

namespace argswap {

struct SourceLocation {
  std::string file_path;
  int line = 1;    // 1-based
  int column = 1;  // 1-based

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
  friend auto operator<=>(const SourceLocation&, const SourceLocation&) = default;
};

enum class ExprKind {
  Identifier,
  NonStringLiteral,
  StringLiteral,
  This,
  Paren,
  PrefixIncDec,
  PostfixIncDec,
  UnaryOp,
  Sizeof,
  Cast,
  Member,
  Index,
  Call,
  MacroIdentifier,
  Other,
};

const char* expr_kind_name(ExprKind kind);

// One argument expression. Leaf kinds carry their payload in `text`
// (identifier spelling, literal text, macro name). `op` holds the operator
// for UnaryOp ("&", "+", "-", "*"), the accessor for Member (".", "->",
// "::"), and the type text for Cast.
struct ArgExpr {
  ExprKind kind = ExprKind::Other;
  std::string text;
  std::string op;
  std::vector<ArgExpr> children;

  friend bool operator==(const ArgExpr&, const ArgExpr&) = default;
};

struct CallSiteRecord {
  std::string callee;
  std::vector<ArgExpr> args;
  SourceLocation location;
  std::optional<std::string> caller_name;
  // Innermost-last condition texts of enclosing if/while/for/switch/ternary
  // constructs; at most 5 retained.
  std::vector<std::string> enclosing_conditions;
  // Up to 6 raw source lines strictly above the call, in file order.
  std::vector<std::string> preceding_lines;
  std::vector<std::string> arg_source_texts;
  bool from_macro_expansion = false;

  friend bool operator==(const CallSiteRecord&, const CallSiteRecord&) = default;
};

struct DeclarationRecord {
  std::string function_name;
  // Outer optional: the parameter list could not be parsed at all.
  // Inner optionals: individual parameters without a name (type-only).
  std::optional<std::vector<std::optional<std::string>>> param_names;
  std::optional<std::vector<std::string>> param_types;
  SourceLocation location;

  friend bool operator==(const DeclarationRecord&, const DeclarationRecord&) = default;
};

struct ProjectRecord {
  std::string project_id;
  std::vector<CallSiteRecord> call_sites;
  std::vector<DeclarationRecord> declarations;

  friend bool operator==(const ProjectRecord&, const ProjectRecord&) = default;
};

inline const char* expr_kind_name(ExprKind kind) {
  switch (kind) {
    case ExprKind::Identifier: return "Identifier";
    case ExprKind::NonStringLiteral: return "NonStringLiteral";
    case ExprKind::StringLiteral: return "StringLiteral";
    case ExprKind::This: return "This";
    case ExprKind::Paren: return "Paren";
    case ExprKind::PrefixIncDec: return "PrefixIncDec";
    case ExprKind::PostfixIncDec: return "PostfixIncDec";
    case ExprKind::UnaryOp: return "UnaryOp";
    case ExprKind::Sizeof: return "Sizeof";
    case ExprKind::Cast: return "Cast";
    case ExprKind::Member: return "Member";
    case ExprKind::Index: return "Index";
    case ExprKind::Call: return "Call";
    case ExprKind::MacroIdentifier: return "MacroIdentifier";
    case ExprKind::Other: return "Other";
  }
  return "Other";
}

inline std::optional<ExprKind> expr_kind_from_name(const std::string& name) {
  static const struct { const char* n; ExprKind k; } table[] = {
      {"Identifier", ExprKind::Identifier},
      {"NonStringLiteral", ExprKind::NonStringLiteral},
      {"StringLiteral", ExprKind::StringLiteral},
      {"This", ExprKind::This},
      {"Paren", ExprKind::Paren},
      {"PrefixIncDec", ExprKind::PrefixIncDec},
      {"PostfixIncDec", ExprKind::PostfixIncDec},
      {"UnaryOp", ExprKind::UnaryOp},
      {"Sizeof", ExprKind::Sizeof},
      {"Cast", ExprKind::Cast},
      {"Member", ExprKind::Member},
      {"Index", ExprKind::Index},
      {"Call", ExprKind::Call},
      {"MacroIdentifier", ExprKind::MacroIdentifier},
      {"Other", ExprKind::Other},
  };
  for (const auto& row : table)
    if (name == row.n) return row.k;
  return std::nullopt;
}

}  // namespace argswap
