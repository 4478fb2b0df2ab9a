#pragma once

// Symbolic representation of slices: comment and non-ASCII removal,
// one-to-one renaming of user identifiers to V<n>/F<n>, and tokenization.

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "corpus.hpp"
#include "error.hpp"
#include "lexer.hpp"
#include "text_io.hpp"

namespace vulgcn {

/// Removes `//` and `/* */` comments and every byte >= 0x80. Newlines inside
/// block comments are kept so line numbers survive. String and character
/// literals are left intact apart from the byte filter.
inline std::string strip_comments_nonascii(std::string_view text) {
  enum class State { code, string, chr, line_comment, block_comment };
  State st = State::code;
  std::string out;
  out.reserve(text.size());
  std::size_t line = 1, block_start = 0;
  const std::size_t n = text.size();

  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if (c == '\n')
      ++line;
    if (static_cast<unsigned char>(c) >= 0x80)
      continue;
    const char next = i + 1 < n ? text[i + 1] : '\0';
    switch (st) {
    case State::code:
      if (c == '/' && next == '/') {
        st = State::line_comment;
        ++i;
      } else if (c == '/' && next == '*') {
        st = State::block_comment;
        block_start = line;
        ++i;
      } else {
        if (c == '"')
          st = State::string;
        else if (c == '\'')
          st = State::chr;
        out += c;
      }
      break;
    case State::string:
    case State::chr:
      out += c;
      if (c == '\\' && i + 1 < n && static_cast<unsigned char>(next) < 0x80) {
        out += next;
        if (next == '\n')
          ++line;
        ++i;
      } else if ((st == State::string && c == '"') ||
                 (st == State::chr && c == '\'') || c == '\n') {
        st = State::code;
      }
      break;
    case State::line_comment:
      if (c == '\\' && next == '\n') {
        out += '\n';
        ++line;
        ++i;
      } else if (c == '\n') {
        out += '\n';
        st = State::code;
      }
      break;
    case State::block_comment:
      if (c == '*' && next == '/') {
        st = State::code;
        ++i;
      } else if (c == '\n') {
        out += '\n';
      }
      break;
    }
  }
  if (st == State::block_comment)
    throw data_error("line " + std::to_string(block_start) +
                     ": unterminated block comment");
  return out;
}

struct SymbolMap {
  std::map<std::string, std::string> var_map;
  std::map<std::string, std::string> func_map;
};

struct SymbolizeOptions {
  /// Field names after `.`/`->` are renamed like variables when set.
  bool symbolize_fields = true;
  /// Extra identifiers kept verbatim, on top of keywords and
  /// default_library_names().
  std::unordered_set<std::string> extra_stoplist;
};

struct SymbolizedSlice {
  std::vector<std::string> lines;
  SymbolMap symbols;
};

/// Renames user-defined variables to V1, V2, ... and user-defined functions
/// (those in `user_funcs`) to F1, F2, ... in first-occurrence order.
/// Identifiers followed by `(` that are not user functions are library calls
/// and stay verbatim. Output lines are space-joined tokens.
inline SymbolizedSlice symbolize(const SliceRecord &slice,
                                 const std::unordered_set<std::string> &user_funcs,
                                 const SymbolizeOptions &opts = {}) {
  SymbolizedSlice result;
  std::size_t next_var = 1, next_func = 1;
  const auto &lib = default_library_names();

  auto rename = [](std::map<std::string, std::string> &map, const std::string &name,
                   char prefix, std::size_t &counter) -> const std::string & {
    auto it = map.find(name);
    if (it == map.end())
      it = map.emplace(name, prefix + std::to_string(counter++)).first;
    return it->second;
  };

  for (const auto &raw : slice.code_lines) {
    std::vector<CToken> toks;
    try {
      toks = lex_c_source(raw);
    } catch (const Error &e) {
      throw data_error("slice " + std::to_string(slice.id) + ": " + e.what());
    }
    std::vector<std::string> out;
    out.reserve(toks.size());
    for (std::size_t k = 0; k < toks.size(); ++k) {
      const CToken &t = toks[k];
      if (t.kind != TokenKind::identifier || lib.count(t.text) ||
          opts.extra_stoplist.count(t.text)) {
        out.push_back(t.text);
        continue;
      }
      const bool is_call = k + 1 < toks.size() && toks[k + 1].is("(");
      const bool is_field =
          k > 0 && (toks[k - 1].is(".") || toks[k - 1].is("->"));
      if (user_funcs.count(t.text) && !is_field) {
        out.push_back(rename(result.symbols.func_map, t.text, 'F', next_func));
      } else if (is_call) {
        out.push_back(t.text);
      } else if (is_field && !opts.symbolize_fields) {
        out.push_back(t.text);
      } else {
        out.push_back(rename(result.symbols.var_map, t.text, 'V', next_var));
      }
    }
    result.lines.push_back(io::join(out, " "));
  }
  return result;
}

struct TokenizedSlice {
  SliceId slice_id = 0;
  int label = 0;
  std::vector<std::string> tokens;

  friend bool operator==(const TokenizedSlice &, const TokenizedSlice &) = default;
};

namespace detail {

// Whitespace inside literals becomes an octal escape so a token never
// contains a space; octal escapes stop after three digits, so the literal
// keeps its meaning.
inline std::string escape_literal_whitespace(const std::string &tok) {
  std::string out;
  for (char c : tok) {
    switch (c) {
    case ' ': out += "\\040"; break;
    case '\t': out += "\\011"; break;
    case '\v': out += "\\013"; break;
    case '\f': out += "\\014"; break;
    case '\r': out += "\\015"; break;
    default: out += c;
    }
  }
  return out;
}

} // namespace detail

/// Lexes each symbolic line and concatenates the token texts.
inline TokenizedSlice tokenize_symbolic(const std::vector<std::string> &symbolic_lines,
                                        SliceId slice_id = 0, int label = 0) {
  TokenizedSlice ts{slice_id, label, {}};
  for (const auto &line : symbolic_lines) {
    for (const auto &t : lex_c_source(line)) {
      if (t.kind == TokenKind::string_lit || t.kind == TokenKind::char_lit)
        ts.tokens.push_back(detail::escape_literal_whitespace(t.text));
      else
        ts.tokens.push_back(t.text);
    }
  }
  return ts;
}

inline TokenizedSlice normalize_slice(const SliceRecord &slice,
                                      const std::unordered_set<std::string> &user_funcs,
                                      const SymbolizeOptions &opts = {}) {
  SliceRecord cleaned = slice;
  for (auto &line : cleaned.code_lines)
    line = strip_comments_nonascii(line);
  auto sym = symbolize(cleaned, user_funcs, opts);
  return tokenize_symbolic(sym.lines, slice.id, slice.label);
}

inline std::vector<TokenizedSlice>
normalize_corpus(const Corpus &corpus,
                 const std::unordered_set<std::string> &user_funcs,
                 const SymbolizeOptions &opts = {}) {
  std::vector<TokenizedSlice> out;
  out.reserve(corpus.records.size());
  for (const auto &rec : corpus.records)
    out.push_back(normalize_slice(rec, user_funcs, opts));
  return out;
}

struct DedupResult {
  std::vector<TokenizedSlice> kept;
  std::size_t dropped = 0;
  /// Dropped slices whose label disagreed with the kept copy.
  std::size_t label_conflicts = 0;
};

/// Keeps the first slice of each distinct token sequence.
inline DedupResult dedup_tokenized(const std::vector<TokenizedSlice> &slices) {
  DedupResult r;
  std::map<std::vector<std::string>, int> seen;
  for (const auto &s : slices) {
    auto [it, inserted] = seen.emplace(s.tokens, s.label);
    if (inserted) {
      r.kept.push_back(s);
    } else {
      ++r.dropped;
      if (it->second != s.label)
        ++r.label_conflicts;
    }
  }
  return r;
}

inline std::string format_tokenized(const std::vector<TokenizedSlice> &slices) {
  std::string out;
  for (const auto &s : slices) {
    out += std::to_string(s.slice_id);
    out += '\t';
    out += std::to_string(s.label);
    out += '\t';
    out += io::join(s.tokens, " ");
    out += '\n';
  }
  return out;
}

inline std::vector<TokenizedSlice> parse_tokenized(std::string_view text,
                                                   const std::string &source = "<tokens>") {
  std::vector<TokenizedSlice> out;
  std::unordered_set<SliceId> ids;
  auto lines = io::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string &line = lines[ln];
    if (line.empty())
      continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw parse_error(source, ln + 1, "expected '<id>\\t<label>\\t<tokens>'");
    TokenizedSlice ts;
    if (!io::parse_int(std::string_view(line).substr(0, t1), ts.slice_id))
      throw parse_error(source, ln + 1, "bad slice id");
    std::string_view label = std::string_view(line).substr(t1 + 1, t2 - t1 - 1);
    if (label != "0" && label != "1")
      throw parse_error(source, ln + 1, "label not in {0,1}");
    ts.label = label == "1";
    if (!ids.insert(ts.slice_id).second)
      throw parse_error(source, ln + 1,
                        "duplicate slice id " + std::to_string(ts.slice_id));
    for (auto f : io::fields(std::string_view(line).substr(t2 + 1)))
      ts.tokens.emplace_back(f);
    out.push_back(std::move(ts));
  }
  return out;
}

inline std::vector<TokenizedSlice> load_tokenized(const std::string &path) {
  return parse_tokenized(io::read_file(path), path);
}

} // namespace vulgcn
