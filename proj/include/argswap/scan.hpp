#pragma once

// Tolerant scanner for C-like source.
//
// This is not a real C/C++ front end. It tokenizes, tracks brace/paren
// nesting, recognizes `name(...)` as a call when the context does not look
// like a declaration, and parses argument expressions with a small
// expression grammar. Anything it cannot make sense of yields no records;
// scanning never fails.
//
// Preprocessor directives (including continuation lines) are ignored
// structurally, so a call written inside a macro body is never recorded.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "argswap/types.hpp"

namespace argswap {

// ---------------------------------------------------------------------------
// Tokens.

namespace scan_detail {

struct Token {
  enum Kind { Ident, Number, String, CharLit, Punct } kind = Punct;
  std::string text;
  int line = 1;
  int col = 1;
  std::size_t begin = 0;
  std::size_t end = 0;
};

inline bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
inline bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

// Tokenizes the non-directive part of the source. Directive lines
// (starting with '#', plus their backslash continuations) produce no
// tokens at all.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  int line = 1, col = 1;
  bool at_line_start = true;
  bool in_directive = false;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
        at_line_start = true;
      } else {
        ++col;
        if (!std::isspace(static_cast<unsigned char>(src[i]))) at_line_start = false;
      }
    }
  };

  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (c == '\n') {
      if (in_directive && !(i > 0 && src[i - 1] == '\\')) in_directive = false;
      advance(1);
      continue;
    }
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    // Comments.
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
      advance(2);
      continue;
    }
    if (c == '#' && at_line_start) {
      in_directive = true;
      advance(1);
      continue;
    }
    if (in_directive) {
      // Swallow directive content token-wise without emitting.
      if (c == '"' || c == '\'') {
        char quote = static_cast<char>(c);
        advance(1);
        while (i < src.size() && src[i] != quote && src[i] != '\n') {
          if (src[i] == '\\' && i + 1 < src.size()) advance(1);
          advance(1);
        }
        if (i < src.size() && src[i] == quote) advance(1);
        continue;
      }
      advance(1);
      continue;
    }

    Token tok;
    tok.line = line;
    tok.col = col;
    tok.begin = i;
    if (is_ident_start(c)) {
      tok.kind = Token::Ident;
      std::size_t j = i;
      while (j < src.size() && is_ident_char(static_cast<unsigned char>(src[j]))) ++j;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(c) ||
               (c == '.' && i + 1 < src.size() &&
                std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      tok.kind = Token::Number;
      std::size_t j = i;
      while (j < src.size()) {
        unsigned char d = static_cast<unsigned char>(src[j]);
        if (std::isalnum(d) || d == '.' || d == '_') {
          ++j;
        } else if ((d == '+' || d == '-') && j > i &&
                   (src[j - 1] == 'e' || src[j - 1] == 'E')) {
          ++j;  // exponent sign
        } else {
          break;
        }
      }
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '"' || c == '\'') {
      tok.kind = c == '"' ? Token::String : Token::CharLit;
      char quote = static_cast<char>(c);
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != quote && src[j] != '\n') {
        if (src[j] == '\\' && j + 1 < src.size()) ++j;
        ++j;
      }
      if (j < src.size() && src[j] == quote) ++j;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      tok.kind = Token::Punct;
      static const char* two_char[] = {"->", "::", "++", "--", "<<", ">>", "<=",
                                       ">=", "==", "!=", "&&", "||", "+=", "-=",
                                       "*=", "/=", "%=", "&=", "|=", "^="};
      std::string_view rest = src.substr(i);
      tok.text = std::string(rest.substr(0, 1));
      for (const char* op : two_char) {
        if (rest.rfind(op, 0) == 0) {
          tok.text = op;
          break;
        }
      }
      if (rest.rfind("...", 0) == 0) tok.text = "...";
      advance(tok.text.size());
    }
    tok.end = i;
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

inline const std::set<std::string>& type_keywords() {
  static const std::set<std::string> kw = {
      "void",   "int",      "char",   "short",  "long",    "float",
      "double", "signed",   "unsigned", "bool", "struct",  "union",
      "enum",   "const",    "volatile", "static", "extern", "register",
      "inline", "restrict", "_Bool",  "typedef"};
  return kw;
}

inline const std::set<std::string>& control_keywords() {
  static const std::set<std::string> kw = {"if", "while", "for", "switch"};
  return kw;
}

// Identifiers that may directly precede a call expression.
inline const std::set<std::string>& statement_keywords() {
  static const std::set<std::string> kw = {"return", "else",  "do",   "case",
                                           "goto",   "throw", "break"};
  return kw;
}

inline const std::set<std::string>& never_callee() {
  static const std::set<std::string> kw = {
      "if",     "while", "for",   "switch", "sizeof", "return", "else",
      "do",     "case",  "goto",  "throw",  "new",    "delete", "defined",
      "catch",  "alignof", "typeof", "_Alignof", "assert_static"};
  return kw;
}

inline std::string collapse_ws(std::string_view text) {
  std::string out;
  bool in_space = false;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(ch);
  }
  return out;
}

}  // namespace scan_detail

// All-caps identifiers (letters/digits/underscores, at least one letter,
// length >= 2) are treated as macro names unless a function declaration
// with that name is known.
inline bool is_macro_like_name(const std::string& name) {
  if (name.size() < 2) return false;
  bool has_letter = false;
  for (unsigned char c : name) {
    if (std::isupper(c)) {
      has_letter = true;
    } else if (!std::isdigit(c) && c != '_') {
      return false;
    }
  }
  return has_letter;
}

// ---------------------------------------------------------------------------
// Argument expression parsing.

namespace scan_detail {

class ExprParser {
 public:
  ExprParser(const Token* begin, const Token* end) : cur_(begin), end_(end) {}

  ArgExpr parse() {
    if (cur_ == end_) return ArgExpr{ExprKind::Other};
    ArgExpr lhs = parse_unary();
    if (cur_ == end_) return lhs;
    // Anything left is a binary operator chain or junk: name-less.
    ArgExpr other;
    other.kind = ExprKind::Other;
    other.children.push_back(std::move(lhs));
    while (cur_ != end_) {
      if (cur_->kind == Token::Punct) {
        ++cur_;
        if (cur_ == end_) break;
        other.children.push_back(parse_unary());
      } else {
        other.children.push_back(parse_unary());
      }
    }
    return other;
  }

 private:
  bool at_punct(const char* p) const {
    return cur_ != end_ && cur_->kind == Token::Punct && cur_->text == p;
  }

  const Token* find_matching_paren(const Token* open) const {
    int depth = 0;
    for (const Token* t = open; t != end_; ++t) {
      if (t->kind != Token::Punct) continue;
      if (t->text == "(" || t->text == "[") ++depth;
      if (t->text == ")" || t->text == "]") {
        if (--depth == 0) return t;
      }
    }
    return end_;
  }

  static bool type_like(const Token* begin, const Token* end) {
    if (begin == end) return false;
    int idents = 0;
    for (const Token* t = begin; t != end; ++t) {
      if (t->kind == Token::Ident) {
        ++idents;
        continue;
      }
      if (t->kind == Token::Punct && (t->text == "*" || t->text == "&")) continue;
      return false;
    }
    return idents >= 1;
  }

  ArgExpr parse_unary() {
    if (cur_ == end_) return ArgExpr{ExprKind::Other};
    const Token& t = *cur_;
    if (t.kind == Token::Punct) {
      if (t.text == "(") {
        const Token* close = find_matching_paren(cur_);
        if (close == end_) {
          ++cur_;
          return ArgExpr{ExprKind::Other};
        }
        const Token* inner_begin = cur_ + 1;
        bool followed = close + 1 != end_;
        if (followed && type_like(inner_begin, close)) {
          // (Type)operand
          std::string type_text;
          for (const Token* p = inner_begin; p != close; ++p) {
            if (!type_text.empty()) type_text.push_back(' ');
            type_text += p->text;
          }
          cur_ = close + 1;
          ArgExpr cast;
          cast.kind = ExprKind::Cast;
          cast.op = type_text;
          cast.children.push_back(parse_unary());
          return cast;
        }
        ExprParser inner(inner_begin, close);
        ArgExpr paren;
        paren.kind = ExprKind::Paren;
        paren.children.push_back(inner.parse());
        cur_ = close + 1;
        return parse_postfix(std::move(paren));
      }
      if (t.text == "&" || t.text == "+" || t.text == "-" || t.text == "*") {
        ++cur_;
        ArgExpr node;
        node.kind = ExprKind::UnaryOp;
        node.op = t.text;
        node.children.push_back(parse_unary());
        return node;
      }
      if (t.text == "++" || t.text == "--") {
        ++cur_;
        ArgExpr node;
        node.kind = ExprKind::PrefixIncDec;
        node.children.push_back(parse_unary());
        return node;
      }
      ++cur_;
      return ArgExpr{ExprKind::Other};
    }
    if (t.kind == Token::String) {
      ++cur_;
      ArgExpr node;
      node.kind = ExprKind::StringLiteral;
      node.text = t.text;
      return node;
    }
    if (t.kind == Token::Number || t.kind == Token::CharLit) {
      ++cur_;
      ArgExpr node;
      node.kind = ExprKind::NonStringLiteral;
      node.text = t.text;
      return node;
    }
    // Identifier-ish.
    if (t.text == "sizeof") {
      ++cur_;
      ArgExpr node;
      node.kind = ExprKind::Sizeof;
      if (cur_ != end_) node.children.push_back(parse_unary());
      return node;
    }
    if (t.text == "this") {
      ++cur_;
      ArgExpr node;
      node.kind = ExprKind::This;
      return parse_postfix(std::move(node));
    }
    ArgExpr leaf;
    leaf.kind = is_macro_like_name(t.text) ? ExprKind::MacroIdentifier
                                           : ExprKind::Identifier;
    leaf.text = t.text;
    ++cur_;
    return parse_postfix(std::move(leaf));
  }

  ArgExpr parse_postfix(ArgExpr node) {
    while (cur_ != end_ && cur_->kind == Token::Punct) {
      const std::string& p = cur_->text;
      if (p == "." || p == "->" || p == "::") {
        ++cur_;
        if (cur_ == end_ || cur_->kind != Token::Ident) break;
        ArgExpr member;
        member.kind = ExprKind::Member;
        member.op = p;
        ArgExpr leaf;
        leaf.kind = is_macro_like_name(cur_->text) ? ExprKind::MacroIdentifier
                                                   : ExprKind::Identifier;
        leaf.text = cur_->text;
        ++cur_;
        member.children.push_back(std::move(node));
        member.children.push_back(std::move(leaf));
        node = std::move(member);
      } else if (p == "[") {
        const Token* close = find_matching_paren(cur_);
        if (close == end_) {
          cur_ = end_;
          break;
        }
        cur_ = close + 1;
        ArgExpr index;
        index.kind = ExprKind::Index;
        index.children.push_back(std::move(node));
        node = std::move(index);
      } else if (p == "(") {
        const Token* close = find_matching_paren(cur_);
        if (close == end_) {
          cur_ = end_;
          break;
        }
        cur_ = close + 1;
        ArgExpr call;
        call.kind = ExprKind::Call;
        call.children.push_back(std::move(node));
        node = std::move(call);
      } else if (p == "++" || p == "--") {
        ++cur_;
        ArgExpr post;
        post.kind = ExprKind::PostfixIncDec;
        post.children.push_back(std::move(node));
        node = std::move(post);
      } else {
        break;
      }
    }
    return node;
  }

  const Token* cur_;
  const Token* end_;
};

inline ArgExpr parse_argument(const std::vector<Token>& tokens, std::size_t begin,
                              std::size_t end) {
  if (begin >= end) return ArgExpr{ExprKind::Other};
  ExprParser parser(tokens.data() + begin, tokens.data() + end);
  return parser.parse();
}

}  // namespace scan_detail

// ---------------------------------------------------------------------------
// Scan result.

struct ScanResult {
  std::vector<CallSiteRecord> calls;
  std::vector<DeclarationRecord> decls;
  // Identifier -> declared type text, file scope and function locals mixed.
  std::map<std::string, std::string> var_types;

  // Byte ranges of each call's arguments, parallel to `calls`; used by the
  // swap-rewrite tooling and the acceptance tests.
  struct CallSpan {
    std::vector<std::pair<std::size_t, std::size_t>> arg_ranges;
  };
  std::vector<CallSpan> call_spans;
};

namespace scan_detail {

struct ParamInfo {
  std::optional<std::string> name;
  std::string type;
};

// Parses one parameter: the last identifier is the name when at least one
// type token precedes it; a lone identifier is a type-only parameter.
inline std::optional<ParamInfo> parse_param(const std::vector<Token>& tokens,
                                            std::size_t begin, std::size_t end) {
  if (begin >= end) return std::nullopt;
  ParamInfo info;
  if (end - begin == 1 && tokens[begin].kind == Token::Punct &&
      tokens[begin].text == "...") {
    info.type = "...";
    return info;
  }
  // Trim a trailing array suffix.
  std::size_t effective_end = end;
  for (std::size_t k = begin; k < end; ++k) {
    if (tokens[k].kind == Token::Punct && tokens[k].text == "[") {
      effective_end = k;
      break;
    }
  }
  if (effective_end == begin) return std::nullopt;
  const Token& last = tokens[effective_end - 1];
  std::size_t type_end = effective_end;
  if (last.kind == Token::Ident && !type_keywords().count(last.text) &&
      effective_end - begin >= 2) {
    info.name = last.text;
    type_end = effective_end - 1;
  }
  std::string type;
  for (std::size_t k = begin; k < type_end; ++k) {
    if (!type.empty()) type.push_back(' ');
    type += tokens[k].text;
  }
  for (std::size_t k = effective_end; k < end; ++k) type += tokens[k].text;
  if (type.empty()) return std::nullopt;
  info.type = type;
  return info;
}

}  // namespace scan_detail

// ---------------------------------------------------------------------------
// The scanner.

inline ScanResult scan_file_detailed(std::string_view source,
                                     const std::string& file_path) {
  using namespace scan_detail;
  ScanResult result;
  std::vector<Token> tokens = tokenize(source);

  // Raw lines for preceding-line context.
  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    for (std::size_t k = 0; k <= source.size(); ++k) {
      if (k == source.size() || source[k] == '\n') {
        std::string line(source.substr(start, k - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = k + 1;
      }
    }
  }

  struct ConditionFrame {
    std::string text;
    enum Kind { Block, Stmt } kind = Stmt;
    int body_depth = 0;  // Block: depth inside the block
    int push_depth = 0;  // Stmt: brace depth of the statement
  };
  struct CallFrame {
    std::string callee;
    int line = 1;
    int col = 1;
    int open_depth = 0;
    std::size_t arg_start = 0;
    std::size_t first_token = 0;
    std::vector<std::pair<std::size_t, std::size_t>> arg_ranges;
    std::vector<std::pair<std::size_t, std::size_t>> arg_token_ranges;
    std::size_t current_arg_token_begin = 0;
    bool macro_callee = false;
  };
  struct ControlFrame {
    std::string keyword;
    int open_depth = 0;
    std::size_t cond_begin = 0;
  };

  std::vector<ConditionFrame> conditions;
  std::vector<CallFrame> call_stack;
  std::vector<ControlFrame> control_stack;

  int paren_depth = 0;
  int brace_depth = 0;
  std::optional<std::string> caller;
  int caller_body_depth = 0;
  bool pending_definition = false;
  std::string pending_definition_name;
  std::vector<scan_detail::ParamInfo> pending_definition_params;
  std::optional<std::string> pending_condition;
  std::size_t statement_start_offset = 0;
  std::vector<std::size_t> statement_tokens;  // indices into `tokens`
  // Position (in statement_tokens) of the first call in this statement;
  // a call at or before the declarator rules out a variable declaration.
  std::size_t statement_call_marker = static_cast<std::size_t>(-1);

  auto active_condition_texts = [&]() {
    std::vector<std::string> out;
    std::size_t first = conditions.size() > 5 ? conditions.size() - 5 : 0;
    for (std::size_t k = first; k < conditions.size(); ++k)
      out.push_back(conditions[k].text);
    return out;
  };

  auto preceding_lines_for = [&](int line) {
    std::vector<std::string> out;
    int first = std::max(1, line - 6);
    for (int l = first; l < line; ++l)
      if (l - 1 < static_cast<int>(lines.size())) out.push_back(lines[l - 1]);
    return out;
  };

  auto record_call = [&](CallFrame& frame) {
    CallSiteRecord call;
    call.callee = frame.callee;
    call.location = {file_path, frame.line, frame.col};
    call.caller_name = caller;
    call.enclosing_conditions = active_condition_texts();
    call.preceding_lines = preceding_lines_for(frame.line);
    call.from_macro_expansion = frame.macro_callee;
    ScanResult::CallSpan span;
    for (std::size_t a = 0; a < frame.arg_ranges.size(); ++a) {
      auto [b, e] = frame.arg_ranges[a];
      std::string_view raw = source.substr(b, e - b);
      call.arg_source_texts.push_back(collapse_ws(raw));
      auto [tb, te] = frame.arg_token_ranges[a];
      call.args.push_back(parse_argument(tokens, tb, te));
      // Tight range: trim to the first/last token of the argument.
      std::size_t rb = b, re = e;
      if (tb < te) {
        rb = tokens[tb].begin;
        re = tokens[te - 1].end;
      }
      span.arg_ranges.emplace_back(rb, re);
    }
    result.calls.push_back(std::move(call));
    result.call_spans.push_back(std::move(span));
  };

  auto try_record_var_decl = [&]() {
    // Recognizes `type... name [= init];` and comma declarator lists.
    const std::vector<std::size_t>& stmt = statement_tokens;
    if (stmt.size() < 2) return;
    std::size_t limit = stmt.size();
    for (std::size_t k = 0; k < stmt.size(); ++k) {
      const Token& t = tokens[stmt[k]];
      if (t.kind == Token::Punct && t.text == "=") {
        limit = k;
        break;
      }
      if (t.kind == Token::Punct &&
          (t.text == "(" || t.text == ")" || t.text == "{" || t.text == "}"))
        return;
    }
    if (limit < 2) return;
    if (statement_call_marker <= limit) return;  // e.g. `foo(a, b);`
    const Token& first = tokens[stmt[0]];
    if (first.kind != Token::Ident) return;
    if (control_keywords().count(first.text) || statement_keywords().count(first.text) ||
        first.text == "typedef")
      return;
    // Split declarators on commas.
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    std::size_t seg_start = 0;
    for (std::size_t k = 0; k < limit; ++k) {
      const Token& t = tokens[stmt[k]];
      if (t.kind == Token::Punct && t.text == ",") {
        segments.emplace_back(seg_start, k);
        seg_start = k + 1;
      }
    }
    segments.emplace_back(seg_start, limit);

    // First segment: base type + first name.
    auto& [s0, e0] = segments[0];
    if (e0 - s0 < 2) return;
    std::size_t name_idx = e0 - 1;
    // Allow an array suffix after the name.
    for (std::size_t k = s0; k < e0; ++k) {
      const Token& t = tokens[stmt[k]];
      if (t.kind == Token::Punct && t.text == "[") {
        if (k == s0) return;
        name_idx = k - 1;
        break;
      }
    }
    const Token& name_tok = tokens[stmt[name_idx]];
    if (name_tok.kind != Token::Ident || type_keywords().count(name_tok.text)) return;
    std::string base_type;
    bool saw_type_token = false;
    for (std::size_t k = s0; k < name_idx; ++k) {
      const Token& t = tokens[stmt[k]];
      if (t.kind == Token::Ident) {
        if (t.text == "static" || t.text == "extern" || t.text == "register" ||
            t.text == "volatile" || t.text == "inline")
          continue;
        saw_type_token = true;
      } else if (t.kind == Token::Punct && (t.text == "*" || t.text == "&")) {
        saw_type_token = saw_type_token || !base_type.empty();
      } else {
        return;
      }
      if (!base_type.empty()) base_type.push_back(' ');
      base_type += t.text;
    }
    if (!saw_type_token || base_type.empty()) return;
    auto remember = [&](const std::string& name, const std::string& type) {
      result.var_types.emplace(name, type);
    };
    remember(name_tok.text, base_type);
    // Later declarators share the base type (pointer stars preserved).
    std::string stripped = base_type;
    while (!stripped.empty() && (stripped.back() == '*' || stripped.back() == ' '))
      stripped.pop_back();
    for (std::size_t si = 1; si < segments.size(); ++si) {
      auto [sb, se] = segments[si];
      if (sb >= se) continue;
      std::string stars;
      std::size_t k = sb;
      while (k < se && tokens[stmt[k]].kind == Token::Punct &&
             tokens[stmt[k]].text == "*") {
        stars += "*";
        ++k;
      }
      if (k >= se || tokens[stmt[k]].kind != Token::Ident) continue;
      remember(tokens[stmt[k]].text, stars.empty() ? stripped : stripped + " " + stars);
    }
  };

  auto pop_stmt_conditions = [&](int depth) {
    while (!conditions.empty() && conditions.back().kind == ConditionFrame::Stmt &&
           conditions.back().push_depth == depth)
      conditions.pop_back();
  };

  auto next_token_is = [&](std::size_t idx, const char* text) {
    return idx + 1 < tokens.size() && tokens[idx + 1].kind == Token::Punct &&
           tokens[idx + 1].text == text;
  };

  for (std::size_t idx = 0; idx < tokens.size(); ++idx) {
    const Token& tok = tokens[idx];

    // A captured condition followed by anything but '{' controls a single
    // statement.
    if (pending_condition &&
        !(tok.kind == Token::Punct && tok.text == "{")) {
      conditions.push_back(
          {*pending_condition, ConditionFrame::Stmt, 0, brace_depth});
      pending_condition.reset();
    }

    if (tok.kind == Token::Ident) {
      statement_tokens.push_back(idx);
      if (!next_token_is(idx, "(")) continue;

      if (control_keywords().count(tok.text)) {
        control_stack.push_back({tok.text, paren_depth + 1, 0});
        continue;
      }
      if (never_callee().count(tok.text)) continue;

      // Declaration / definition header when no function body is open.
      if (!caller) {
        const Token* prev = idx > 0 ? &tokens[idx - 1] : nullptr;
        bool type_prefixed =
            prev && ((prev->kind == Token::Ident && !statement_keywords().count(prev->text)) ||
                     (prev->kind == Token::Punct && (prev->text == "*" || prev->text == "&")));
        if (!type_prefixed) continue;
        // Scan ahead to the matching ')'.
        std::size_t open = idx + 1;
        int depth = 0;
        std::size_t close = open;
        for (; close < tokens.size(); ++close) {
          if (tokens[close].kind != Token::Punct) continue;
          if (tokens[close].text == "(") ++depth;
          if (tokens[close].text == ")" && --depth == 0) break;
        }
        if (close >= tokens.size()) continue;
        bool proto = close + 1 < tokens.size() &&
                     tokens[close + 1].kind == Token::Punct &&
                     tokens[close + 1].text == ";";
        bool definition = close + 1 < tokens.size() &&
                          tokens[close + 1].kind == Token::Punct &&
                          tokens[close + 1].text == "{";
        if (!proto && !definition) continue;

        // Parse parameters.
        std::vector<scan_detail::ParamInfo> params;
        bool params_ok = true;
        std::size_t pbegin = open + 1;
        int pdepth = 0;
        std::size_t seg = pbegin;
        for (std::size_t k = pbegin; k <= close; ++k) {
          const Token& t = tokens[k];
          bool at_end = k == close;
          bool comma = !at_end && t.kind == Token::Punct && t.text == "," && pdepth == 0;
          if (!at_end && t.kind == Token::Punct) {
            if (t.text == "(" || t.text == "[") ++pdepth;
            if (t.text == ")" || t.text == "]") --pdepth;
          }
          if (comma || at_end) {
            if (seg < k) {
              auto info = scan_detail::parse_param(tokens, seg, k);
              if (!info) {
                params_ok = false;
                break;
              }
              params.push_back(std::move(*info));
            }
            seg = k + 1;
          }
        }
        // `(void)` means an empty parameter list.
        if (params.size() == 1 && !params[0].name && params[0].type == "void")
          params.clear();

        DeclarationRecord decl;
        decl.function_name = tok.text;
        decl.location = {file_path, tok.line, tok.col};
        if (params_ok) {
          std::vector<std::optional<std::string>> names;
          std::vector<std::string> types;
          for (auto& p : params) {
            names.push_back(p.name);
            types.push_back(p.type);
          }
          decl.param_names = std::move(names);
          decl.param_types = std::move(types);
        }
        result.decls.push_back(decl);

        if (definition) {
          pending_definition = true;
          pending_definition_name = tok.text;
          pending_definition_params = params_ok ? params
                                                : std::vector<scan_detail::ParamInfo>{};
        }
        idx = close;  // continue after ')'
        statement_tokens.clear();
        statement_call_marker = static_cast<std::size_t>(-1);
        continue;
      }

      // Inside a function body: a call unless this looks like a local
      // declaration (`type name(...)`).
      const Token* prev = idx > 0 ? &tokens[idx - 1] : nullptr;
      bool decl_like = prev && prev->kind == Token::Ident &&
                       !statement_keywords().count(prev->text) &&
                       !control_keywords().count(prev->text);
      if (decl_like) continue;
      CallFrame frame;
      frame.callee = tok.text;
      frame.line = tok.line;
      frame.col = tok.col;
      frame.open_depth = paren_depth + 1;
      frame.first_token = idx;
      frame.macro_callee = is_macro_like_name(tok.text);
      statement_call_marker =
          std::min(statement_call_marker, statement_tokens.size());
      call_stack.push_back(std::move(frame));
      continue;
    }

    if (tok.kind != Token::Punct) {
      statement_tokens.push_back(idx);
      continue;
    }

    const std::string& p = tok.text;
    if (p == "[") {
      ++paren_depth;
      statement_tokens.push_back(idx);
      continue;
    }
    if (p == "]") {
      if (paren_depth > 0) --paren_depth;
      statement_tokens.push_back(idx);
      continue;
    }
    if (p == "(") {
      ++paren_depth;
      if (!call_stack.empty() && call_stack.back().open_depth == paren_depth &&
          call_stack.back().arg_start == 0 && idx > 0 &&
          call_stack.back().first_token == idx - 1) {
        call_stack.back().arg_start = tok.end;
        call_stack.back().current_arg_token_begin = idx + 1;
      }
      if (!control_stack.empty() && control_stack.back().open_depth == paren_depth &&
          control_stack.back().cond_begin == 0)
        control_stack.back().cond_begin = tok.end;
      continue;
    }
    if (p == ")") {
      if (!call_stack.empty() && call_stack.back().open_depth == paren_depth) {
        CallFrame frame = std::move(call_stack.back());
        call_stack.pop_back();
        if (frame.arg_start != 0) {
          if (tok.begin > frame.arg_start ||
              frame.current_arg_token_begin < idx) {
            // Close the final argument unless the list was empty.
            bool empty_list = frame.arg_ranges.empty() &&
                              frame.current_arg_token_begin == idx;
            if (!empty_list) {
              frame.arg_ranges.emplace_back(frame.arg_start, tok.begin);
              frame.arg_token_ranges.emplace_back(frame.current_arg_token_begin, idx);
            }
          }
          if (caller) record_call(frame);
        }
      } else if (!control_stack.empty() &&
                 control_stack.back().open_depth == paren_depth) {
        ControlFrame ctrl = std::move(control_stack.back());
        control_stack.pop_back();
        std::string cond = collapse_ws(
            source.substr(ctrl.cond_begin, tok.begin - ctrl.cond_begin));
        pending_condition = cond;
        statement_start_offset = tok.end;
        statement_tokens.clear();
      statement_call_marker = static_cast<std::size_t>(-1);
      }
      if (paren_depth > 0) --paren_depth;
      continue;
    }
    if (p == ",") {
      if (!call_stack.empty() && call_stack.back().open_depth == paren_depth) {
        CallFrame& frame = call_stack.back();
        frame.arg_ranges.emplace_back(frame.arg_start, tok.begin);
        frame.arg_token_ranges.emplace_back(frame.current_arg_token_begin, idx);
        frame.arg_start = tok.end;
        frame.current_arg_token_begin = idx + 1;
      } else {
        statement_tokens.push_back(idx);
      }
      continue;
    }
    if (p == "{") {
      ++brace_depth;
      if (pending_condition) {
        conditions.push_back(
            {*pending_condition, ConditionFrame::Block, brace_depth, 0});
        pending_condition.reset();
      } else if (pending_definition) {
        caller = pending_definition_name;
        caller_body_depth = brace_depth;
        pending_definition = false;
        for (const auto& param : pending_definition_params)
          if (param.name) result.var_types.emplace(*param.name, param.type);
      }
      statement_start_offset = tok.end;
      statement_tokens.clear();
      statement_call_marker = static_cast<std::size_t>(-1);
      continue;
    }
    if (p == "}") {
      bool converted = false;
      if (!conditions.empty() && conditions.back().kind == ConditionFrame::Block &&
          conditions.back().body_depth == brace_depth) {
        bool else_next = idx + 1 < tokens.size() &&
                         tokens[idx + 1].kind == Token::Ident &&
                         tokens[idx + 1].text == "else";
        if (else_next) {
          // Keep the condition active through the else branch.
          conditions.back().kind = ConditionFrame::Stmt;
          conditions.back().push_depth = brace_depth - 1;
          converted = true;
        } else {
          conditions.pop_back();
        }
      }
      if (brace_depth > 0) --brace_depth;
      if (!converted) pop_stmt_conditions(brace_depth);
      if (caller && brace_depth < caller_body_depth) {
        caller.reset();
        conditions.clear();
      }
      statement_start_offset = tok.end;
      statement_tokens.clear();
      statement_call_marker = static_cast<std::size_t>(-1);
      continue;
    }
    if (p == ";" && paren_depth == 0) {
      try_record_var_decl();
      pop_stmt_conditions(brace_depth);
      statement_start_offset = tok.end;
      statement_tokens.clear();
      statement_call_marker = static_cast<std::size_t>(-1);
      continue;
    }
    if (p == ";") continue;  // inside a for-header
    if (p == "?" && paren_depth == 0 && caller && call_stack.empty()) {
      std::string cond = collapse_ws(
          source.substr(statement_start_offset, tok.begin - statement_start_offset));
      if (!cond.empty())
        conditions.push_back({cond, ConditionFrame::Stmt, 0, brace_depth});
      continue;
    }
    statement_tokens.push_back(idx);
  }

  // Calls are finalized at their closing parenthesis, which puts a nested
  // call before the call that contains it; restore source order.
  std::vector<std::size_t> order(result.calls.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const SourceLocation& la = result.calls[a].location;
    const SourceLocation& lb = result.calls[b].location;
    return std::tie(la.line, la.column) < std::tie(lb.line, lb.column);
  });
  ScanResult sorted;
  sorted.decls = std::move(result.decls);
  sorted.var_types = std::move(result.var_types);
  sorted.calls.reserve(result.calls.size());
  sorted.call_spans.reserve(result.call_spans.size());
  for (std::size_t k : order) {
    sorted.calls.push_back(std::move(result.calls[k]));
    sorted.call_spans.push_back(std::move(result.call_spans[k]));
  }
  return sorted;
}

// Language-facing wrapper: just the records.
inline std::pair<std::vector<CallSiteRecord>, std::vector<DeclarationRecord>>
scan_file(std::string_view source, const std::string& file_path) {
  ScanResult r = scan_file_detailed(source, file_path);
  return {std::move(r.calls), std::move(r.decls)};
}

// Demotes MacroIdentifier leaves whose name is actually a declared function.
inline void resolve_macro_identifiers(ArgExpr& expr,
                                      const std::set<std::string>& functions) {
  if (expr.kind == ExprKind::MacroIdentifier && functions.count(expr.text))
    expr.kind = ExprKind::Identifier;
  for (ArgExpr& child : expr.children) resolve_macro_identifiers(child, functions);
}

inline void resolve_macro_identifiers(std::vector<CallSiteRecord>& calls,
                                      const std::set<std::string>& functions) {
  for (CallSiteRecord& call : calls) {
    if (call.from_macro_expansion && functions.count(call.callee))
      call.from_macro_expansion = false;
    for (ArgExpr& arg : call.args) resolve_macro_identifiers(arg, functions);
  }
}

// Rewrites `source` so the two arguments of `calls[call_index]` trade
// places. Used by tests and by the fix-suggestion tooling.
inline std::string swap_arguments(std::string_view source, const ScanResult& scan,
                                  std::size_t call_index, int pos_i, int pos_j) {
  std::string out(source);
  if (call_index >= scan.call_spans.size()) return out;
  const auto& ranges = scan.call_spans[call_index].arg_ranges;
  if (pos_i < 1 || pos_j < 1 || pos_i == pos_j) return out;
  auto ui = static_cast<std::size_t>(pos_i - 1);
  auto uj = static_cast<std::size_t>(pos_j - 1);
  if (ui >= ranges.size() || uj >= ranges.size()) return out;
  if (ui > uj) std::swap(ui, uj);
  auto [bi, ei] = ranges[ui];
  auto [bj, ej] = ranges[uj];
  std::string text_i(source.substr(bi, ei - bi));
  std::string text_j(source.substr(bj, ej - bj));
  out.replace(bj, ej - bj, text_i);
  out.replace(bi, ei - bi, text_j);
  return out;
}

}  // namespace argswap
