#pragma once

// C/C++ lexical analysis (maximal munch over C11 tokens, plus `::`).
// Input is expected to be comment-stripped.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "error.hpp"

namespace vulgcn {

enum class TokenKind {
  identifier,
  keyword,
  number,
  string_lit,
  char_lit,
  op,
  punctuation,
};

inline std::string_view to_string(TokenKind k) {
  switch (k) {
  case TokenKind::identifier: return "identifier";
  case TokenKind::keyword: return "keyword";
  case TokenKind::number: return "number";
  case TokenKind::string_lit: return "string_lit";
  case TokenKind::char_lit: return "char_lit";
  case TokenKind::op: return "operator";
  case TokenKind::punctuation: return "punctuation";
  }
  return "?";
}

struct CToken {
  TokenKind kind = TokenKind::identifier;
  std::string text;
  std::size_t line = 1; // 1-based
  std::size_t col = 1;  // 1-based, in bytes
  std::size_t offset = 0;

  bool is(std::string_view s) const { return text == s; }
  bool is_name() const {
    return kind == TokenKind::identifier || kind == TokenKind::keyword;
  }
};

/// C11 keywords plus the C++ keywords that commonly appear in C/C++ corpora.
inline const std::unordered_set<std::string_view> &c_keywords() {
  static const std::unordered_set<std::string_view> kw = {
      // C11
      "auto", "break", "case", "char", "const", "continue", "default", "do",
      "double", "else", "enum", "extern", "float", "for", "goto", "if",
      "inline", "int", "long", "register", "restrict", "return", "short",
      "signed", "sizeof", "static", "struct", "switch", "typedef", "union",
      "unsigned", "void", "volatile", "while", "_Alignas", "_Alignof",
      "_Atomic", "_Bool", "_Complex", "_Generic", "_Imaginary", "_Noreturn",
      "_Static_assert", "_Thread_local",
      // C++
      "bool", "catch", "class", "const_cast", "delete", "dynamic_cast",
      "explicit", "false", "friend", "mutable", "namespace", "new",
      "nullptr", "operator", "private", "protected", "public",
      "reinterpret_cast", "static_cast", "template", "this", "throw", "true",
      "try", "typename", "using", "virtual", "wchar_t"};
  return kw;
}

inline bool is_keyword(std::string_view s) { return c_keywords().count(s) > 0; }

namespace detail {

// Longest first within the table so the first match is the maximal munch.
inline constexpr std::string_view punctuators[] = {
    "%:%:", "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=",
    "==",   "!=",  "&&",  "||",  "*=", "/=", "%=", "+=", "-=", "&=", "^=",
    "|=",   "##",  "<:",  ":>",  "<%", "%>", "%:", "::", "[",  "]",  "(",
    ")",    "{",   "}",   ".",   "&",  "*",  "+",  "-",  "~",  "!",  "/",
    "%",    "<",   ">",   "^",   "|",  "?",  ":",  ";",  "=",  ",",  "#"};

inline bool is_punctuation(std::string_view p) {
  static const std::unordered_set<std::string_view> set = {
      "[", "]", "(", ")", "{", "}", ";", ",", "...", ":", "#", "##",
      "<:", ":>", "<%", "%>", "%:", "%:%:"};
  return set.count(p) > 0;
}

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

} // namespace detail

/// Tokenizes `text`. Whitespace and backslash-newline are dropped; any byte
/// outside the C source character set is an error.
inline std::vector<CToken> lex_c_source(std::string_view text) {
  std::vector<CToken> out;
  std::size_t i = 0, line = 1, line_start = 0;
  const std::size_t n = text.size();

  auto fail = [&](const std::string &msg) -> Error {
    return data_error("line " + std::to_string(line) + ": " + msg);
  };
  auto push = [&](TokenKind k, std::size_t begin, std::size_t end) {
    out.push_back(CToken{k, std::string(text.substr(begin, end - begin)), line,
                         begin - line_start + 1, begin});
  };
  auto scan_quoted = [&](std::size_t begin, std::size_t quote_pos, char quote,
                         TokenKind k) {
    std::size_t j = quote_pos + 1;
    while (true) {
      if (j >= n || text[j] == '\n')
        throw fail(quote == '"' ? "unterminated string literal"
                                : "unterminated character literal");
      if (text[j] == '\\' && j + 1 < n && text[j + 1] != '\n') {
        j += 2;
        continue;
      }
      if (text[j] == quote)
        break;
      ++j;
    }
    push(k, begin, j + 1);
    i = j + 1;
  };

  while (i < n) {
    const char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f') {
      ++i;
      continue;
    }
    if (c == '\\' && i + 1 < n && (text[i + 1] == '\n' || text[i + 1] == '\r')) {
      ++i;
      continue;
    }

    if (detail::ident_start(c)) {
      std::size_t j = i + 1;
      while (j < n && detail::ident_char(text[j]))
        ++j;
      std::string_view word = text.substr(i, j - i);
      // Encoding prefixes glue onto a following literal.
      if (j < n && (text[j] == '"' || text[j] == '\'') &&
          (word == "L" || word == "u" || word == "U" || word == "u8")) {
        scan_quoted(i, j, text[j],
                    text[j] == '"' ? TokenKind::string_lit : TokenKind::char_lit);
        continue;
      }
      push(is_keyword(word) ? TokenKind::keyword : TokenKind::identifier, i, j);
      i = j;
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      // pp-number
      std::size_t j = i + 1;
      while (j < n) {
        char d = text[j];
        if ((d == '+' || d == '-') &&
            (text[j - 1] == 'e' || text[j - 1] == 'E' || text[j - 1] == 'p' ||
             text[j - 1] == 'P')) {
          ++j;
        } else if (detail::ident_char(d) || d == '.') {
          ++j;
        } else {
          break;
        }
      }
      push(TokenKind::number, i, j);
      i = j;
      continue;
    }

    if (c == '"') {
      scan_quoted(i, i, '"', TokenKind::string_lit);
      continue;
    }
    if (c == '\'') {
      scan_quoted(i, i, '\'', TokenKind::char_lit);
      continue;
    }

    bool matched = false;
    for (std::string_view p : detail::punctuators) {
      if (text.substr(i, p.size()) == p) {
        push(detail::is_punctuation(p) ? TokenKind::punctuation : TokenKind::op,
             i, i + p.size());
        i += p.size();
        matched = true;
        break;
      }
    }
    if (matched)
      continue;
    char hex[8];
    std::snprintf(hex, sizeof(hex), "0x%02X", static_cast<unsigned char>(c));
    throw fail("unexpected byte " + std::string(hex));
  }
  return out;
}

} // namespace vulgcn

namespace vulgcn {

/// Library typedef and macro names that are never treated as user
/// variables. Extendable through the normalize/slicer options.
inline const std::unordered_set<std::string> &default_library_names() {
  static const std::unordered_set<std::string> names = {
      "size_t",   "ssize_t",  "ptrdiff_t", "FILE",    "wchar_t",  "int8_t",
      "int16_t",  "int32_t",  "int64_t",   "uint8_t", "uint16_t", "uint32_t",
      "uint64_t", "intptr_t", "uintptr_t", "off_t",   "time_t",   "va_list",
      "NULL",     "EOF",      "stdin",     "stdout",  "stderr",   "errno",
      "std",      "BOOL",      "DWORD",   "WORD",     "BYTE",
      "TRUE",     "FALSE"};
  return names;
}

} // namespace vulgcn
