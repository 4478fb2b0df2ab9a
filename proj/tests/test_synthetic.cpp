#include <gtest/gtest.h>

#include <vulgcn/normalize.hpp>
#include <vulgcn/synthetic.hpp>

using namespace vulgcn;

namespace {

bool mentions(const SliceRecord &r, const std::string &call) {
  for (const auto &l : r.code_lines)
    if (l.find(call + "(") != std::string::npos)
      return true;
  return false;
}

} // namespace

TEST(Synthetic, LabelCount) {
  SyntheticSpec s;
  s.n = 200;
  s.vuln_fraction = 0.3;
  auto recs = generate_synthetic(s);
  ASSERT_EQ(recs.size(), 200u);
  std::size_t pos = 0;
  for (const auto &r : recs)
    pos += r.label;
  EXPECT_EQ(pos, 60u);
}

TEST(Synthetic, TokenSignal) {
  SyntheticSpec s;
  s.seed = 4;
  for (const auto &r : generate_synthetic(s))
    EXPECT_EQ(mentions(r, "strcpy"), r.label == 1) << r.id;
}

TEST(Synthetic, CooccurSignalOnlyJointly) {
  SyntheticSpec s;
  s.signal = SignalKind::cooccur;
  s.seed = 2;
  auto recs = generate_synthetic(s);
  const auto &c = cooccur_calls;
  std::size_t with[4][2] = {};
  for (const auto &r : recs) {
    const bool ab = mentions(r, c[0]) && mentions(r, c[1]);
    const bool cd = mentions(r, c[2]) && mentions(r, c[3]);
    EXPECT_EQ(ab || cd, r.label == 1) << r.id;
    for (int k = 0; k < 4; ++k)
      with[k][r.label] += mentions(r, c[k]);
  }
  // Each call alone appears in both classes.
  for (auto &w : with) {
    EXPECT_GT(w[0], 0u);
    EXPECT_GT(w[1], 0u);
  }
}

TEST(Synthetic, DeterministicAndParseable) {
  SyntheticSpec s;
  s.n = 30;
  s.seed = 7;
  auto a = generate_synthetic(s);
  EXPECT_EQ(a, generate_synthetic(s));
  s.seed = 8;
  EXPECT_NE(a, generate_synthetic(s));
  Corpus c = parse_gadget_text(format_gadget_text(a));
  EXPECT_EQ(c.records, a);
  for (const auto &r : a)
    EXPECT_FALSE(normalize_slice(r, {}).tokens.empty());
}

TEST(Synthetic, Errors) {
  SyntheticSpec s;
  s.n = 1;
  EXPECT_THROW(generate_synthetic(s), Error);
  s.n = 10;
  s.vuln_fraction = 1.5;
  EXPECT_THROW(generate_synthetic(s), Error);
  s.vuln_fraction = 0.5;
  s.planted_token = "printf";
  EXPECT_THROW(generate_synthetic(s), Error);
  EXPECT_THROW(parse_signal_kind("other"), Error);
}
