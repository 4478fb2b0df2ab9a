#pragma once

// Planted-signal corpora: C-like slices whose label is carried either by a
// single token or by which pairs of tokens co-occur.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "error.hpp"
#include "random.hpp"

namespace vulgcn {

enum class SignalKind {
  /// The planted call appears in a slice iff the slice is labeled 1.
  token,
  /// Four calls A, B, C, D, each in half of the slices. Positives contain
  /// {A,B} or {C,D}; negatives contain {A,C} or {B,D}. Every call is equally
  /// frequent in both classes, so a per-slice additive feature cannot
  /// separate them; only the pairing does.
  cooccur,
};

inline SignalKind parse_signal_kind(std::string_view s) {
  if (s == "token")
    return SignalKind::token;
  if (s == "cooccur")
    return SignalKind::cooccur;
  throw usage_error("signal must be 'token' or 'cooccur'");
}

struct SyntheticSpec {
  std::size_t n = 200;
  double vuln_fraction = 0.3;
  SignalKind signal = SignalKind::token;
  std::string planted_token = "strcpy";
  std::uint64_t seed = 0;
  std::size_t noise_lines = 6;
};

inline constexpr std::array<const char *, 4> cooccur_calls = {"memset", "strncat",
                                                              "snprintf", "realloc"};

namespace detail {

inline constexpr std::array<const char *, 12> synth_vars = {
    "buf", "data", "len", "i", "n", "p", "src", "dst", "tmp", "count", "size", "idx"};
inline constexpr std::array<const char *, 5> synth_noise_calls = {"printf", "puts", "abs",
                                                                  "atoi", "rand"};
inline constexpr std::array<const char *, 10> synth_templates = {
    "int {a} = {k};",  "{a} = {b} + {k};",  "{a} = {b} * {k};",    "if ({a} > {k})",
    "{a}[{k}] = {b};", "{f}({a});",         "{a} = {f}({b});",     "while ({a} < {b})",
    "char {a}[{k}];",  "return {a};"};

inline std::string fill(std::string tpl, Rng &rng, const std::string &call = {}) {
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  std::string a = synth_vars[pick(synth_vars.size())];
  std::string b = synth_vars[pick(synth_vars.size())];
  std::string k = std::to_string(pick(4));
  std::string f = call.empty() ? synth_noise_calls[pick(synth_noise_calls.size())] : call;
  auto subst = [&](const std::string &key, const std::string &val) {
    for (std::size_t pos; (pos = tpl.find(key)) != std::string::npos;)
      tpl.replace(pos, key.size(), val);
  };
  subst("{a}", a);
  subst("{b}", b);
  subst("{k}", k);
  subst("{f}", f);
  return tpl;
}

} // namespace detail

inline std::vector<SliceRecord> generate_synthetic(const SyntheticSpec &spec) {
  if (spec.n < 2)
    throw usage_error("synthetic corpus needs n >= 2");
  if (!(spec.vuln_fraction >= 0.0 && spec.vuln_fraction <= 1.0))
    throw usage_error("vulnerable fraction must lie in [0,1]");
  if (spec.signal == SignalKind::token && spec.planted_token.empty())
    throw usage_error("planted token must be non-empty");
  for (const char *c : detail::synth_noise_calls)
    if (spec.planted_token == c)
      throw usage_error("planted token '" + spec.planted_token +
                        "' collides with a noise call");

  Rng rng(mix_seed(spec.seed, 0x5A7));
  const std::size_t n_pos = std::min(spec.n, round_half_up(spec.vuln_fraction *
                                                          static_cast<double>(spec.n)));
  std::vector<int> labels(spec.n, 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n_pos), 1);
  std::shuffle(labels.begin(), labels.end(), rng);

  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  auto noise = [&] {
    return detail::fill(detail::synth_templates[pick(detail::synth_templates.size())], rng);
  };
  auto signal_line = [&](const std::string &call) {
    return detail::fill("{f}({a}, {b});", rng, call);
  };

  std::vector<SliceRecord> out;
  for (std::size_t s = 0; s < spec.n; ++s) {
    SliceRecord rec;
    rec.id = s;
    rec.label = labels[s];
    rec.origin = std::string("synthetic ") +
                 (spec.signal == SignalKind::token ? "token " : "cooccur ") +
                 std::to_string(s);
    std::vector<std::string> lines;
    for (std::size_t k = 0; k < spec.noise_lines; ++k)
      lines.push_back(noise());
    std::vector<std::string> planted;
    if (spec.signal == SignalKind::token) {
      planted.push_back(rec.label ? signal_line(spec.planted_token) : noise());
    } else {
      const bool variant = pick(2) == 1;
      const auto &c = cooccur_calls;
      if (rec.label)
        planted = variant ? std::vector<std::string>{signal_line(c[0]), signal_line(c[1])}
                          : std::vector<std::string>{signal_line(c[2]), signal_line(c[3])};
      else
        planted = variant ? std::vector<std::string>{signal_line(c[0]), signal_line(c[2])}
                          : std::vector<std::string>{signal_line(c[1]), signal_line(c[3])};
    }
    for (auto &line : planted) {
      auto pos = lines.begin() + static_cast<std::ptrdiff_t>(pick(lines.size() + 1));
      lines.insert(pos, std::move(line));
    }
    rec.code_lines = std::move(lines);
    out.push_back(std::move(rec));
  }
  return out;
}

} // namespace vulgcn
