#include <gtest/gtest.h>

#include <random>
#include <set>

#include <vulgcn/normalize.hpp>

using namespace vulgcn;

namespace {

SliceRecord slice(std::vector<std::string> lines, SliceId id = 0, int label = 0) {
  return SliceRecord{id, "o", std::move(lines), label, SliceKind::GADGET};
}

} // namespace

TEST(StripComments, LineAndBlock) {
  EXPECT_EQ(strip_comments_nonascii("a; // c\nb;"), "a; \nb;");
  EXPECT_EQ(strip_comments_nonascii("a /* x\ny */ b"), "a \n b");
  EXPECT_EQ(strip_comments_nonascii("s = \"// no\"; /* c */"), "s = \"// no\"; ");
  EXPECT_EQ(strip_comments_nonascii("c = '/'; d = '*';"), "c = '/'; d = '*';");
}

TEST(StripComments, NonAscii) {
  EXPECT_EQ(strip_comments_nonascii("x = 1; \xC3\xA9\n"), "x = 1; \n");
}

TEST(StripComments, UnterminatedBlock) {
  try {
    strip_comments_nonascii("a;\n/* open\n");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(std::string(e.what()), "line 2: unterminated block comment");
  }
}

TEST(Symbolize, VariablesAndFunctions) {
  auto s = symbolize(slice({"char buf[10];", "n = helper(buf, len);", "strcpy(buf, src);"}),
                     {"helper"});
  EXPECT_EQ(s.lines, (std::vector<std::string>{"char V1 [ 10 ] ;",
                                               "V2 = F1 ( V1 , V3 ) ;",
                                               "strcpy ( V1 , V4 ) ;"}));
  EXPECT_EQ(s.symbols.var_map.at("buf"), "V1");
  EXPECT_EQ(s.symbols.func_map.at("helper"), "F1");
}

TEST(Symbolize, OneToOneWithinSlice) {
  auto s = symbolize(slice({"a = b;", "b = a + c;"}), {});
  EXPECT_EQ(s.lines[1], "V2 = V1 + V3 ;");
  std::set<std::string> targets;
  for (const auto &[k, v] : s.symbols.var_map)
    EXPECT_TRUE(targets.insert(v).second);
}

TEST(Symbolize, LibraryNamesAndKeywordsKept) {
  auto s = symbolize(slice({"size_t n = sizeof(FILE);", "if (p == NULL) return -1;"}), {});
  EXPECT_EQ(s.lines[0], "size_t V1 = sizeof ( FILE ) ;");
  EXPECT_EQ(s.lines[1], "if ( V2 == NULL ) return - 1 ;");
}

TEST(Symbolize, Fields) {
  auto renamed = symbolize(slice({"p->len = q.len;"}), {});
  EXPECT_EQ(renamed.lines[0], "V1 -> V2 = V3 . V2 ;");
  SymbolizeOptions keep;
  keep.symbolize_fields = false;
  auto kept = symbolize(slice({"p->len = q.len;"}), {}, keep);
  EXPECT_EQ(kept.lines[0], "V1 -> len = V2 . len ;");
}

TEST(Symbolize, ExtraStoplist) {
  SymbolizeOptions o;
  o.extra_stoplist = {"MAXLEN"};
  EXPECT_EQ(symbolize(slice({"char b[MAXLEN];"}), {}, o).lines[0], "char V1 [ MAXLEN ] ;");
}

TEST(Symbolize, LexErrorNamesSlice) {
  try {
    symbolize(slice({"x = \"open;"}, 42), {});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(std::string(e.what()), "slice 42: line 1: unterminated string literal");
  }
}

TEST(Symbolize, AlphaRenamingInvariance) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> tmpl = {"int @0 = @1 + 4;", "@2 [ @0 ] = @1 ;",
                                         "if (@0 > @3) @4(@2, @1);", "@3++;",
                                         "memcpy(@2, @1, @0);"};
  for (int trial = 0; trial < 20; ++trial) {
    auto instantiate = [&](const std::vector<std::string> &names) {
      std::vector<std::string> lines;
      for (std::string l : tmpl) {
        for (std::size_t k = 0; k < names.size(); ++k) {
          const std::string key = "@" + std::to_string(k);
          for (std::size_t p; (p = l.find(key)) != std::string::npos;)
            l.replace(p, key.size(), names[k]);
        }
        lines.push_back(l);
      }
      return lines;
    };
    std::vector<std::string> a, b;
    for (int k = 0; k < 5; ++k) {
      a.push_back("a" + std::to_string(trial) + "_" + std::to_string(k));
      b.push_back("zz" + std::to_string(rng() % 100000) + "x" + std::to_string(k));
    }
    auto sa = normalize_slice(slice(instantiate(a)), {a[4]});
    auto sb = normalize_slice(slice(instantiate(b)), {b[4]});
    EXPECT_EQ(sa.tokens, sb.tokens);
  }
}

TEST(Tokenize, SymbolicLine) {
  auto t = tokenize_symbolic({"V1=V2-8;"}, 3, 1);
  EXPECT_EQ(t.tokens, (std::vector<std::string>{"V1", "=", "V2", "-", "8", ";"}));
  EXPECT_EQ(t.slice_id, 3u);
  EXPECT_EQ(t.label, 1);
}

TEST(Tokenize, LiteralWhitespaceEscaped) {
  auto t = tokenize_symbolic({"printf(\"a b\\tc\");"});
  ASSERT_EQ(t.tokens.size(), 5u);
  EXPECT_EQ(t.tokens[2], "\"a\\040b\\tc\"");
}

TEST(Tokenize, NormalizeEndToEnd) {
  auto t = normalize_slice(slice({"len = strlen(src); // measure", "strcpy(dst, src);"}, 5, 1),
                           {});
  EXPECT_EQ(t.tokens, (std::vector<std::string>{"V1", "=", "strlen", "(", "V2", ")", ";",
                                                "strcpy", "(", "V3", ",", "V2", ")", ";"}));
}

TEST(TokenizedFile, RoundTrip) {
  std::vector<TokenizedSlice> v = {{0, 1, {"V1", "=", "\"a\\040b\"", ";"}}, {7, 0, {"x"}}};
  auto text = format_tokenized(v);
  EXPECT_EQ(text, "0\t1\tV1 = \"a\\040b\" ;\n7\t0\tx\n");
  EXPECT_EQ(parse_tokenized(text), v);
}

TEST(TokenizedFile, Errors) {
  EXPECT_THROW(parse_tokenized("0 1 x\n"), Error);
  EXPECT_THROW(parse_tokenized("0\t2\tx\n"), Error);
  try {
    parse_tokenized("0\t1\tx\n0\t0\ty\n", "t.tsv");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(std::string(e.what()), "t.tsv:2: duplicate slice id 0");
  }
}

TEST(Dedup, KeepsFirstAndCountsConflicts) {
  std::vector<TokenizedSlice> v = {
      {0, 1, {"a"}}, {1, 0, {"a"}}, {2, 0, {"b"}}, {3, 1, {"a"}}};
  DedupResult r = dedup_tokenized(v);
  ASSERT_EQ(r.kept.size(), 2u);
  EXPECT_EQ(r.kept[0].slice_id, 0u);
  EXPECT_EQ(r.dropped, 2u);
  EXPECT_EQ(r.label_conflicts, 1u);
}
