#pragma once

// Intra-procedural def-use slicing around sensitive library/API calls and
// code gadget assembly. Def/use sets are syntactic: assignment targets,
// declarators and ++/-- operands are definitions, every other variable
// identifier is a use. No alias analysis.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "corpus.hpp"
#include "error.hpp"
#include "lexer.hpp"
#include "normalize.hpp"
#include "text_io.hpp"

namespace vulgcn {

enum class SinkDirection { forward, backward };

inline std::string_view to_string(SinkDirection d) {
  return d == SinkDirection::forward ? "forward" : "backward";
}

using SinkConfig = std::map<std::string, SinkDirection, std::less<>>;

/// Forward sinks take input from outside the program; backward sinks do not.
inline SinkConfig default_sinks() {
  return {
      {"strcpy", SinkDirection::backward}, {"strcat", SinkDirection::backward},
      {"memcpy", SinkDirection::backward}, {"sprintf", SinkDirection::backward},
      {"gets", SinkDirection::forward},    {"recv", SinkDirection::forward},
      {"read", SinkDirection::forward},    {"fread", SinkDirection::forward},
      {"scanf", SinkDirection::forward},
  };
}

/// `<callee> <forward|backward>` per line; `#` starts a comment.
inline SinkConfig parse_sink_config(std::string_view text,
                                    const std::string &source = "<sinks>") {
  SinkConfig cfg;
  auto lines = io::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = lines[ln];
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    auto f = io::fields(line);
    if (f.empty())
      continue;
    if (f.size() != 2)
      throw parse_error(source, ln + 1, "expected '<callee> <forward|backward>'");
    SinkDirection dir;
    if (f[1] == "forward")
      dir = SinkDirection::forward;
    else if (f[1] == "backward")
      dir = SinkDirection::backward;
    else
      throw parse_error(source, ln + 1,
                        "direction must be 'forward' or 'backward'");
    cfg[std::string(f[0])] = dir;
  }
  return cfg;
}

inline SinkConfig load_sink_config(const std::string &path) {
  return parse_sink_config(io::read_file(path), path);
}

struct Statement {
  std::size_t line = 0;     // first token's line
  std::size_t end_line = 0; // last token's line
  std::size_t offset = 0;   // first token's byte offset
  std::vector<CToken> tokens;
  std::string text;
  std::set<std::string> defs;
  std::set<std::string> uses;

  bool covers(std::size_t l) const { return line <= l && l <= end_line; }
};

struct FunctionSpan {
  std::string name;
  std::vector<std::string> params;
  std::vector<Statement> body_statements;
  std::size_t first_line = 0; // line of the name token
  std::size_t last_line = 0;  // line of the closing brace
  std::size_t body_begin = 0; // token offsets of the braces
  std::size_t body_end = 0;
};

struct SinkCall {
  std::string callee;
  SinkDirection direction = SinkDirection::backward;
  std::vector<std::string> args;
  std::size_t line = 0;
  std::size_t offset = 0;

  friend bool operator==(const SinkCall &, const SinkCall &) = default;
};

namespace detail {

inline bool is_assign_op(const CToken &t) {
  static const std::unordered_set<std::string_view> ops = {
      "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="};
  return t.kind == TokenKind::op && ops.count(t.text) > 0;
}

inline bool is_type_keyword(const CToken &t) {
  static const std::unordered_set<std::string_view> kw = {
      "int",      "char",     "short",  "long",     "float",   "double",
      "void",     "signed",   "unsigned", "const",  "volatile", "static",
      "extern",   "register", "auto",   "struct",   "union",   "enum",
      "_Bool",    "bool",     "wchar_t", "restrict", "inline", "_Atomic",
      "_Complex", "typename"};
  return t.kind == TokenKind::keyword && kw.count(t.text) > 0;
}

inline bool is_library_name(const std::string &s) {
  return default_library_names().count(s) > 0;
}

/// Index of the bracket matching toks[i], scanning in direction `step`.
inline std::size_t match_bracket(const std::vector<CToken> &toks, std::size_t i,
                                 int step) {
  const std::string &open = toks[i].text;
  std::string close = open == "(" ? ")" : open == ")" ? "(" : open == "[" ? "]"
                    : open == "]" ? "[" : open == "{" ? "}" : "{";
  int depth = 0;
  for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i);
       k >= 0 && k < static_cast<std::ptrdiff_t>(toks.size()); k += step) {
    if (toks[static_cast<std::size_t>(k)].text == open)
      ++depth;
    else if (toks[static_cast<std::size_t>(k)].text == close && --depth == 0)
      return static_cast<std::size_t>(k);
  }
  return std::string::npos;
}

inline bool is_variable_token(const std::vector<CToken> &toks, std::size_t k) {
  const CToken &t = toks[k];
  if (t.kind != TokenKind::identifier || is_library_name(t.text))
    return false;
  if (k + 1 < toks.size() && toks[k + 1].is("("))
    return false; // callee
  if (k > 0 && (toks[k - 1].is(".") || toks[k - 1].is("->")))
    return false; // field name; the base carries the dependency
  if (k + 1 < toks.size() && toks[k + 1].is("::"))
    return false; // namespace/class qualifier
  return true;
}

/// Leftmost variable of the lvalue expression ending just before `op`.
inline std::size_t assignment_target(const std::vector<CToken> &toks,
                                     std::size_t op) {
  std::size_t j = op;
  while (j > 0) {
    --j;
    const CToken &t = toks[j];
    if (t.is("]")) {
      std::size_t m = match_bracket(toks, j, -1);
      if (m == std::string::npos)
        return std::string::npos;
      j = m;
      continue;
    }
    if (t.is(")")) {
      std::size_t m = match_bracket(toks, j, -1);
      if (m == std::string::npos)
        return std::string::npos;
      for (std::size_t k = m + 1; k < j; ++k)
        if (is_variable_token(toks, k))
          return k;
      return std::string::npos;
    }
    if (t.kind == TokenKind::identifier) {
      if (j >= 1 && (toks[j - 1].is(".") || toks[j - 1].is("->"))) {
        --j; // step onto the accessor; loop continues to the base
        continue;
      }
      return is_variable_token(toks, j) ? j : std::string::npos;
    }
    return std::string::npos;
  }
  return std::string::npos;
}

/// Length of the declaration-specifier prefix, or 0 when the statement is
/// not a declaration.
inline std::size_t declaration_prefix(const std::vector<CToken> &toks) {
  std::size_t k = 0;
  bool saw_type = false;
  while (k < toks.size()) {
    const CToken &t = toks[k];
    if (is_type_keyword(t)) {
      saw_type = true;
      if ((t.is("struct") || t.is("union") || t.is("enum")) &&
          k + 1 < toks.size() && toks[k + 1].kind == TokenKind::identifier)
        ++k;
      ++k;
    } else if (t.kind == TokenKind::identifier && is_library_name(t.text) &&
               !(k + 1 < toks.size() && toks[k + 1].is("::"))) {
      saw_type = true;
      ++k;
    } else if (t.kind == TokenKind::identifier && k + 1 < toks.size() &&
               toks[k + 1].is("::")) {
      k += 2; // qualified type name, e.g. std::string
    } else {
      break;
    }
  }
  if (saw_type)
    return k < toks.size() ? k : 0;
  // `T x ...` or `T *x ...` with a user typedef T.
  if (toks.size() >= 3 && toks[0].kind == TokenKind::identifier) {
    std::size_t j = 1;
    while (j < toks.size() && toks[j].is("*"))
      ++j;
    if (j < toks.size() && toks[j].kind == TokenKind::identifier &&
        j + 1 < toks.size() &&
        (toks[j + 1].is("=") || toks[j + 1].is(";") || toks[j + 1].is("[") ||
         toks[j + 1].is(",")))
      return 1;
  }
  return 0;
}

inline void compute_def_use(Statement &s) {
  const auto &toks = s.tokens;
  std::vector<char> is_def(toks.size(), 0), is_also_use(toks.size(), 0);
  const std::size_t prefix = declaration_prefix(toks);

  if (const std::size_t p = prefix; p > 0) {
    // Declarators split at top-level commas; the name is the first variable
    // before any '=' or '['.
    int depth = 0;
    bool want_name = true;
    for (std::size_t k = p; k < toks.size(); ++k) {
      const CToken &t = toks[k];
      if (t.is("(") || t.is("[") || t.is("{")) {
        if (t.is("[") || t.is("{"))
          want_name = false;
        ++depth;
      } else if (t.is(")") || t.is("]") || t.is("}")) {
        --depth;
      } else if (depth == 0 && t.is(",")) {
        want_name = true;
      } else if (depth == 0 && t.is("=")) {
        want_name = false;
      } else if (want_name && is_variable_token(toks, k)) {
        is_def[k] = 1;
        want_name = false;
      }
    }
  }

  for (std::size_t k = 0; k < toks.size(); ++k) {
    if (is_assign_op(toks[k])) {
      std::size_t target = assignment_target(toks, k);
      if (target != std::string::npos) {
        is_def[target] = 1;
        if (!toks[k].is("="))
          is_also_use[target] = 1;
      }
    } else if (toks[k].is("++") || toks[k].is("--")) {
      std::size_t target = std::string::npos;
      if (k + 1 < toks.size() && is_variable_token(toks, k + 1))
        target = k + 1;
      else if (k > 0)
        target = assignment_target(toks, k);
      if (target != std::string::npos) {
        is_def[target] = 1;
        is_also_use[target] = 1;
      }
    }
  }

  for (std::size_t k = prefix; k < toks.size(); ++k) {
    if (!is_variable_token(toks, k))
      continue;
    if (is_def[k])
      s.defs.insert(toks[k].text);
    if (!is_def[k] || is_also_use[k])
      s.uses.insert(toks[k].text);
  }
}

inline std::string render_statement(const std::vector<CToken> &toks,
                                    std::string_view source) {
  if (toks.empty())
    return {};
  if (source.empty()) {
    std::vector<std::string> parts;
    for (const auto &t : toks)
      parts.push_back(t.text);
    return io::join(parts, " ");
  }
  const std::size_t begin = toks.front().offset;
  const std::size_t end = toks.back().offset + toks.back().text.size();
  std::string_view raw = source.substr(begin, end - begin);
  // Multi-line statements are folded onto one line.
  std::string out;
  std::size_t i = 0;
  auto is_ws = [&](std::size_t j) {
    char c = raw[j];
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' ||
           (c == '\\' && j + 1 < raw.size() && (raw[j + 1] == '\n' || raw[j + 1] == '\r'));
  };
  while (i < raw.size()) {
    if (!is_ws(i)) {
      out += raw[i++];
      continue;
    }
    std::size_t j = i;
    bool newline = false;
    while (j < raw.size() && is_ws(j)) {
      newline = newline || raw[j] == '\n';
      ++j;
    }
    if (newline)
      out += ' ';
    else
      out.append(raw.substr(i, j - i));
    i = j;
  }
  return out;
}

inline Statement make_statement(std::vector<CToken> toks, std::string_view source) {
  Statement s;
  s.line = toks.front().line;
  s.end_line = toks.back().line;
  s.offset = toks.front().offset;
  s.text = render_statement(toks, source);
  s.tokens = std::move(toks);
  compute_def_use(s);
  return s;
}

inline bool is_control_header(const std::vector<CToken> &run) {
  if (run.empty())
    return false;
  const CToken &t = run.front();
  if (t.is("else"))
    return run.size() > 1 && run[1].is("if");
  return t.is("if") || t.is("for") || t.is("while") || t.is("switch");
}

/// Statements of a function body. `;`, `{` and `}` outside parentheses end a
/// statement; a brace that opens an initializer stays inside its statement.
/// Control headers (`if (...)`, `for (...)`, `while (...)`, `switch (...)`,
/// `else`, `do`) are statements of their own.
inline std::vector<Statement> split_statements(const std::vector<CToken> &toks,
                                               std::size_t begin, std::size_t end,
                                               std::string_view source) {
  std::vector<Statement> out;
  std::vector<CToken> run;
  int paren = 0, init_brace = 0;
  auto flush = [&] {
    if (!run.empty())
      out.push_back(make_statement(std::move(run), source));
    run.clear();
  };
  for (std::size_t k = begin; k < end; ++k) {
    const CToken &t = toks[k];
    const bool next_is = k + 1 < end;
    if (t.is("(") || t.is("[")) {
      ++paren;
    } else if (t.is(")") || t.is("]")) {
      paren = std::max(0, paren - 1);
      if (paren == 0 && init_brace == 0 && t.is(")") && is_control_header(run)) {
        run.push_back(t);
        // `while (c);` closing a do-loop keeps its semicolon.
        if (next_is && toks[k + 1].is(";"))
          run.push_back(toks[++k]);
        flush();
        continue;
      }
    } else if (paren == 0 && init_brace == 0 && run.empty() &&
               (t.is("else") || t.is("do")) &&
               !(next_is && (toks[k + 1].is("if") || toks[k + 1].is("{")))) {
      run.push_back(t);
      flush();
      continue;
    } else if (paren == 0 && t.is("{")) {
      if (init_brace > 0 || (!run.empty() && (run.back().is("=") || run.back().is(",") ||
                                              run.back().is("return")))) {
        ++init_brace;
        run.push_back(t);
        continue;
      }
      flush();
      continue;
    } else if (paren == 0 && t.is("}")) {
      if (init_brace > 0) {
        --init_brace;
        run.push_back(t);
        continue;
      }
      flush();
      continue;
    } else if (paren == 0 && init_brace == 0 && t.is(";")) {
      run.push_back(t);
      flush();
      continue;
    }
    run.push_back(t);
  }
  flush();
  return out;
}

inline std::vector<std::string> param_names(const std::vector<CToken> &toks,
                                            std::size_t open, std::size_t close) {
  std::vector<std::string> names;
  std::string last;
  int depth = 0;
  for (std::size_t k = open + 1; k < close; ++k) {
    const CToken &t = toks[k];
    if (t.is("(") || t.is("["))
      ++depth;
    else if (t.is(")") || t.is("]"))
      --depth;
    if (depth == 0 && t.is(",")) {
      if (!last.empty())
        names.push_back(last);
      last.clear();
    } else if (t.kind == TokenKind::identifier && !is_library_name(t.text) &&
               !(k > 0 && toks[k - 1].is("["))) {
      last = t.text;
    }
  }
  if (!last.empty())
    names.push_back(last);
  return names;
}

} // namespace detail

/// Finds function definitions at file scope (namespace and extern "C"
/// blocks are transparent). Bodies of other brace blocks are skipped.
inline std::vector<FunctionSpan> split_functions(const std::vector<CToken> &toks,
                                                 std::string_view source = {}) {
  std::vector<FunctionSpan> funcs;
  std::size_t k = 0;
  while (k < toks.size()) {
    if (!toks[k].is("{")) {
      ++k;
      continue;
    }
    std::size_t close = detail::match_bracket(toks, k, +1);
    if (close == std::string::npos)
      throw data_error("line " + std::to_string(toks[k].line) + ": unbalanced '{'");

    // Transparent scopes: `namespace X {`, `extern "C" {`.
    if ((k >= 1 && toks[k - 1].is("namespace")) ||
        (k >= 2 && toks[k - 2].is("namespace")) ||
        (k >= 2 && toks[k - 2].is("extern") &&
         toks[k - 1].kind == TokenKind::string_lit)) {
      ++k;
      continue;
    }

    // Header: name ( params ) [qualifiers] {
    std::size_t j = k;
    while (j > 0 && toks[j - 1].kind == TokenKind::keyword &&
           !toks[j - 1].is("else") && !toks[j - 1].is("do"))
      --j;
    if (j > 0 && toks[j - 1].is(")")) {
      std::size_t open = detail::match_bracket(toks, j - 1, -1);
      if (open != std::string::npos && open > 0 &&
          toks[open - 1].kind == TokenKind::identifier) {
        FunctionSpan f;
        f.name = toks[open - 1].text;
        f.params = detail::param_names(toks, open, j - 1);
        f.first_line = toks[open - 1].line;
        f.last_line = toks[close].line;
        f.body_begin = k;
        f.body_end = close;
        f.body_statements = detail::split_statements(toks, k + 1, close, source);
        funcs.push_back(std::move(f));
      }
    }
    k = close + 1;
  }
  return funcs;
}

/// Every `name (` with `name` in `sinks`, in token order. Arguments are the
/// variable identifiers of each top-level comma-separated argument,
/// flattened and de-duplicated in order of appearance.
inline std::vector<SinkCall> find_sink_calls(const std::vector<CToken> &toks,
                                             const SinkConfig &sinks) {
  std::vector<SinkCall> calls;
  for (std::size_t k = 0; k + 1 < toks.size(); ++k) {
    if (toks[k].kind != TokenKind::identifier || !toks[k + 1].is("("))
      continue;
    if (k > 0 && (toks[k - 1].is(".") || toks[k - 1].is("->")))
      continue;
    auto it = sinks.find(toks[k].text);
    if (it == sinks.end())
      continue;
    std::size_t close = detail::match_bracket(toks, k + 1, +1);
    if (close == std::string::npos)
      close = toks.size();
    SinkCall call{it->first, it->second, {}, toks[k].line, toks[k].offset};
    std::set<std::string> seen;
    for (std::size_t a = k + 2; a < close; ++a)
      if (detail::is_variable_token(toks, a) && seen.insert(toks[a].text).second)
        call.args.push_back(toks[a].text);
    calls.push_back(std::move(call));
  }
  return calls;
}

namespace detail {

inline bool intersects(const std::set<std::string> &a, const std::set<std::string> &b) {
  for (const auto &x : a)
    if (b.count(x))
      return true;
  return false;
}

inline std::size_t seed_index(const FunctionSpan &f, std::size_t seed_line) {
  if (seed_line < f.first_line || seed_line > f.last_line)
    throw data_error("seed line " + std::to_string(seed_line) +
                     " is outside function '" + f.name + "' (lines " +
                     std::to_string(f.first_line) + "-" +
                     std::to_string(f.last_line) + ")");
  for (std::size_t i = 0; i < f.body_statements.size(); ++i)
    if (f.body_statements[i].covers(seed_line))
      return i;
  throw data_error("no statement of '" + f.name + "' covers line " +
                   std::to_string(seed_line));
}

} // namespace detail

/// Statements before the seed that (transitively) define a tracked
/// variable, plus the seed itself, in function order.
inline std::vector<Statement> backward_slice_at(const FunctionSpan &f,
                                                std::set<std::string> tracked,
                                                std::size_t seed) {
  const auto &body = f.body_statements;
  std::vector<char> in(body.size(), 0);
  in[seed] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = seed; i-- > 0;) {
      if (in[i] || !detail::intersects(body[i].defs, tracked))
        continue;
      in[i] = 1;
      changed = true;
      tracked.insert(body[i].uses.begin(), body[i].uses.end());
    }
  }
  std::vector<Statement> out;
  for (std::size_t i = 0; i < body.size(); ++i)
    if (in[i])
      out.push_back(body[i]);
  return out;
}

/// Statements after the seed that mention a tracked variable, plus the seed.
/// Variables they define join the tracked set; reassignment does not stop
/// tracking.
inline std::vector<Statement> forward_slice_at(const FunctionSpan &f,
                                               std::set<std::string> tracked,
                                               std::size_t seed) {
  const auto &body = f.body_statements;
  std::vector<char> in(body.size(), 0);
  in[seed] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = seed + 1; i < body.size(); ++i) {
      if (in[i] || !(detail::intersects(body[i].uses, tracked) ||
                     detail::intersects(body[i].defs, tracked)))
        continue;
      in[i] = 1;
      changed = true;
      tracked.insert(body[i].defs.begin(), body[i].defs.end());
    }
  }
  std::vector<Statement> out;
  for (std::size_t i = 0; i < body.size(); ++i)
    if (in[i])
      out.push_back(body[i]);
  return out;
}

inline std::vector<Statement> backward_slice(const FunctionSpan &f,
                                             const std::set<std::string> &seed_vars,
                                             std::size_t seed_line) {
  return backward_slice_at(f, seed_vars, detail::seed_index(f, seed_line));
}

inline std::vector<Statement> forward_slice(const FunctionSpan &f,
                                            const std::set<std::string> &seed_vars,
                                            std::size_t seed_line) {
  return forward_slice_at(f, seed_vars, detail::seed_index(f, seed_line));
}

/// Union of statements, duplicates by (line, text) removed, ordered by
/// source position.
inline std::vector<Statement>
assemble_statements(const std::vector<std::vector<Statement>> &slices) {
  std::vector<Statement> all;
  for (const auto &s : slices)
    all.insert(all.end(), s.begin(), s.end());
  std::stable_sort(all.begin(), all.end(), [](const Statement &a, const Statement &b) {
    return a.line != b.line ? a.line < b.line : a.offset < b.offset;
  });
  std::vector<Statement> out;
  std::set<std::pair<std::size_t, std::string>> seen;
  for (auto &s : all)
    if (seen.emplace(s.line, s.text).second)
      out.push_back(std::move(s));
  return out;
}

/// Unlabeled (label 0) gadget built from the assembled statements.
inline SliceRecord assemble_gadget(const std::vector<std::vector<Statement>> &slices) {
  auto stmts = assemble_statements(slices);
  if (stmts.empty())
    throw data_error("cannot assemble a gadget from empty slices");
  SliceRecord rec;
  for (const auto &s : stmts)
    rec.code_lines.push_back(s.text);
  return rec;
}

/// Blanks preprocessor directive lines (and their continuations) so line
/// numbers stay aligned with the original file.
inline std::string blank_directives(std::string_view text) {
  std::string out(text);
  bool in_directive = false;
  std::size_t i = 0;
  while (i < out.size()) {
    std::size_t nl = out.find('\n', i);
    std::size_t end = nl == std::string::npos ? out.size() : nl;
    std::string_view line(out.data() + i, end - i);
    std::size_t first = line.find_first_not_of(" \t");
    bool starts = first != std::string_view::npos && line[first] == '#';
    if (in_directive || starts) {
      bool continues = !line.empty() &&
                       (line.back() == '\\' ||
                        (line.size() >= 2 && line.back() == '\r' && line[line.size() - 2] == '\\'));
      std::fill(out.begin() + static_cast<std::ptrdiff_t>(i),
                out.begin() + static_cast<std::ptrdiff_t>(end), ' ');
      in_directive = continues;
    }
    if (nl == std::string::npos)
      break;
    i = nl + 1;
  }
  return out;
}

struct ExtractedUnit {
  std::vector<SliceRecord> gadgets; // ids unassigned (0), label 0
  std::vector<std::string> user_functions;
};

/// Gadgets for every sink call inside a function body of one translation
/// unit. Forward sinks are sliced forward, backward sinks backward; seeds
/// are the call's argument variables (plus, for forward sinks, whatever the
/// call statement assigns).
inline ExtractedUnit extract_gadgets(std::string_view source,
                                     const std::string &origin_path,
                                     const SinkConfig &sinks,
                                     SliceKind kind = SliceKind::GADGET) {
  std::string cleaned = blank_directives(strip_comments_nonascii(source));
  auto toks = lex_c_source(cleaned);
  auto funcs = split_functions(toks, cleaned);

  ExtractedUnit unit;
  for (const auto &f : funcs)
    unit.user_functions.push_back(f.name);

  auto calls = find_sink_calls(toks, sinks);
  for (const auto &f : funcs) {
    const std::size_t lo = toks[f.body_begin].offset, hi = toks[f.body_end].offset;
    for (const auto &call : calls) {
      if (call.offset <= lo || call.offset >= hi)
        continue;
      std::size_t seed = std::string::npos;
      for (std::size_t i = 0; i < f.body_statements.size(); ++i) {
        const auto &st = f.body_statements[i];
        if (st.offset <= call.offset &&
            call.offset <= st.tokens.back().offset) {
          seed = i;
          break;
        }
      }
      if (seed == std::string::npos)
        continue;
      std::set<std::string> vars(call.args.begin(), call.args.end());
      std::vector<Statement> slice;
      if (call.direction == SinkDirection::forward) {
        const auto &defs = f.body_statements[seed].defs;
        vars.insert(defs.begin(), defs.end());
        slice = forward_slice_at(f, vars, seed);
      } else {
        slice = backward_slice_at(f, vars, seed);
      }
      SliceRecord rec = assemble_gadget({slice});
      rec.origin = origin_path + " " + f.name + " " + std::to_string(call.line);
      rec.kind = kind;
      unit.gadgets.push_back(std::move(rec));
    }
  }
  return unit;
}

} // namespace vulgcn
