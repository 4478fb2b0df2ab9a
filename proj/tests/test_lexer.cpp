#include <gtest/gtest.h>

#include <vulgcn/lexer.hpp>

using namespace vulgcn;

namespace {

std::vector<std::string> texts(std::string_view src) {
  std::vector<std::string> out;
  for (const auto &t : lex_c_source(src))
    out.push_back(t.text);
  return out;
}

using S = std::vector<std::string>;

} // namespace

TEST(Lexer, SymbolicStatement) {
  EXPECT_EQ(texts("V1=V2-8;"), (S{"V1", "=", "V2", "-", "8", ";"}));
}

TEST(Lexer, MaximalMunch) {
  EXPECT_EQ(texts("a+++b"), (S{"a", "++", "+", "b"}));
  EXPECT_EQ(texts("x<<=2"), (S{"x", "<<=", "2"}));
  EXPECT_EQ(texts("p->q"), (S{"p", "->", "q"}));
  EXPECT_EQ(texts("a-->b"), (S{"a", "--", ">", "b"}));
  EXPECT_EQ(texts("f(...)"), (S{"f", "(", "...", ")"}));
  EXPECT_EQ(texts("std::size_t"), (S{"std", "::", "size_t"}));
  EXPECT_EQ(texts("a&&b||c"), (S{"a", "&&", "b", "||", "c"}));
}

TEST(Lexer, Numbers) {
  EXPECT_EQ(texts("0x1Fu 1.5e-3 .5 10UL 1e+9f"),
            (S{"0x1Fu", "1.5e-3", ".5", "10UL", "1e+9f"}));
  EXPECT_EQ(texts("a-1"), (S{"a", "-", "1"}));
}

TEST(Lexer, Literals) {
  EXPECT_EQ(texts(R"(printf("a \"b\" %d\n", 'x');)"),
            (S{"printf", "(", R"("a \"b\" %d\n")", ",", "'x'", ")", ";"}));
  EXPECT_EQ(texts(R"(L"w" u8"s" '\'')"), (S{R"(L"w")", R"(u8"s")", R"('\'')"}));
  auto toks = lex_c_source(R"(L"w")");
  EXPECT_EQ(toks[0].kind, TokenKind::string_lit);
}

TEST(Lexer, Kinds) {
  auto toks = lex_c_source("int x = f(3); return x;");
  EXPECT_EQ(toks[0].kind, TokenKind::keyword);
  EXPECT_EQ(toks[1].kind, TokenKind::identifier);
  EXPECT_EQ(toks[2].kind, TokenKind::op);
  EXPECT_EQ(toks[4].kind, TokenKind::punctuation);
  EXPECT_EQ(toks[5].kind, TokenKind::number);
}

TEST(Lexer, Positions) {
  auto toks = lex_c_source("a\n  bb = 1;");
  ASSERT_EQ(toks.size(), 5u);
  EXPECT_EQ(toks[1].line, 2u);
  EXPECT_EQ(toks[1].col, 3u);
  EXPECT_EQ(toks[1].offset, 4u);
}

TEST(Lexer, LineContinuation) {
  EXPECT_EQ(texts("a \\\n+ b"), (S{"a", "+", "b"}));
}

TEST(Lexer, Errors) {
  try {
    lex_c_source("x;\n\"abc");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(std::string(e.what()), "line 2: unterminated string literal");
    EXPECT_EQ(e.kind(), ErrorKind::data);
  }
  EXPECT_THROW(lex_c_source("'a"), Error);
  try {
    lex_c_source("a @ b");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(std::string(e.what()), "line 1: unexpected byte 0x40");
  }
}

TEST(Lexer, ConcatenationRoundTrip) {
  // Re-lexing the space-joined tokens gives the same tokens.
  const char *src = "for(i=0;i<n;i++){buf[i]=src[i]>>2;} s->f+=g(a,b)?1:0;";
  auto once = texts(src);
  std::string joined;
  for (const auto &t : once)
    joined += t + " ";
  EXPECT_EQ(texts(joined), once);
}
