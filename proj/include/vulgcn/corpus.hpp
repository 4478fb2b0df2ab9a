#pragma once

// Labeled slice corpora: the plain-text gadget block format, deterministic
// train/test splitting, and per-label/per-kind counting.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "random.hpp"
#include "text_io.hpp"

namespace vulgcn {

using SliceId = std::uint64_t;

/// Vulnerability-syntax category of a slice. GADGET is the call-based
/// code gadget; the other four are the SeVC kinds.
enum class SliceKind { FC, AU, PU, AE, GADGET };

inline constexpr std::array<SliceKind, 5> all_slice_kinds = {
    SliceKind::FC, SliceKind::AU, SliceKind::PU, SliceKind::AE,
    SliceKind::GADGET};

inline std::string_view to_string(SliceKind k) {
  switch (k) {
  case SliceKind::FC: return "FC";
  case SliceKind::AU: return "AU";
  case SliceKind::PU: return "PU";
  case SliceKind::AE: return "AE";
  case SliceKind::GADGET: return "GADGET";
  }
  return "GADGET";
}

inline SliceKind parse_slice_kind(std::string_view s) {
  for (SliceKind k : all_slice_kinds)
    if (to_string(k) == s)
      return k;
  throw usage_error("unknown slice kind '" + std::string(s) +
                    "' (expected FC, AU, PU, AE or GADGET)");
}

struct SliceRecord {
  SliceId id = 0;
  std::string origin;
  std::vector<std::string> code_lines;
  int label = 0;
  SliceKind kind = SliceKind::GADGET;

  friend bool operator==(const SliceRecord &, const SliceRecord &) = default;
};

struct Corpus {
  std::vector<SliceRecord> records;
  // Sorted ascending; empty until split_corpus runs.
  std::vector<SliceId> train_ids;
  std::vector<SliceId> test_ids;
  std::vector<std::string> warnings;
};

inline constexpr std::string_view gadget_separator =
    "---------------------------------";
static_assert(gadget_separator.size() == 33);

/// Parses the gadget block grammar. `source` names the input in error
/// messages; `kind` is applied to every record.
inline Corpus parse_gadget_text(std::string_view text,
                                const std::string &source = "<input>",
                                SliceKind kind = SliceKind::GADGET) {
  const auto lines = io::split_lines(text);
  Corpus corpus;
  std::size_t i = 0;
  std::optional<SliceId> prev_id;

  while (i < lines.size()) {
    // Trailing blank lines at end of file are tolerated.
    if (std::all_of(lines.begin() + static_cast<std::ptrdiff_t>(i), lines.end(),
                    [](const std::string &l) { return l.empty(); }))
      break;

    const std::size_t header_line = i + 1;
    const std::string &header = lines[i];
    std::size_t ws = header.find_first_of(" \t");
    std::string_view id_text = std::string_view(header).substr(0, ws);
    SliceRecord rec;
    if (!io::parse_int(id_text, rec.id))
      throw parse_error(source, header_line,
                        "malformed header (expected '<id> <origin>')");
    if (prev_id && rec.id <= *prev_id)
      throw parse_error(source, header_line,
                        "slice id " + std::to_string(rec.id) +
                            " is not strictly increasing");
    rec.origin = ws == std::string::npos ? std::string() : header.substr(ws + 1);
    rec.kind = kind;

    std::size_t sep = i + 1;
    while (sep < lines.size() && lines[sep] != gadget_separator)
      ++sep;
    if (sep >= lines.size())
      throw parse_error(source, header_line,
                        "missing separator for slice " + std::to_string(rec.id));
    // lines (i, sep): code lines then the label line.
    if (sep - i < 2)
      throw parse_error(source, sep + 1, "missing label line");
    const std::string &label = lines[sep - 1];
    if (label == "0")
      rec.label = 0;
    else if (label == "1")
      rec.label = 1;
    else
      throw parse_error(source, sep, "label not in {0,1}: '" + label + "'");
    if (sep - i < 3)
      throw parse_error(source, header_line + 1, "empty code body");
    rec.code_lines.assign(lines.begin() + static_cast<std::ptrdiff_t>(i + 1),
                          lines.begin() + static_cast<std::ptrdiff_t>(sep - 1));

    prev_id = rec.id;
    corpus.records.push_back(std::move(rec));
    i = sep + 1;
  }
  return corpus;
}

inline Corpus parse_gadget_file(const std::string &path,
                                SliceKind kind = SliceKind::GADGET) {
  return parse_gadget_text(io::read_file(path), path, kind);
}

inline std::string format_gadget_text(const std::vector<SliceRecord> &records) {
  std::string out;
  for (const auto &rec : records) {
    if (rec.code_lines.empty())
      throw data_error("slice " + std::to_string(rec.id) + " has no code lines");
    if (rec.label != 0 && rec.label != 1)
      throw data_error("slice " + std::to_string(rec.id) +
                       ": label not in {0,1}");
    out += std::to_string(rec.id);
    if (!rec.origin.empty()) {
      out += ' ';
      out += rec.origin;
    }
    out += '\n';
    for (const auto &line : rec.code_lines) {
      if (line == gadget_separator || line.find('\n') != std::string::npos)
        throw data_error("slice " + std::to_string(rec.id) +
                         ": code line cannot be represented");
      out += line;
      out += '\n';
    }
    out += rec.label ? "1\n" : "0\n";
    out += gadget_separator;
    out += '\n';
  }
  return out;
}

inline void write_gadget_file(const std::string &path,
                              const std::vector<SliceRecord> &records) {
  io::write_file(path, format_gadget_text(records));
}

/// Train/test assignment over an id list. Shuffles with `seed`, puts
/// round-half-up(fraction * n) ids in train. With `stratify`, rounding is
/// applied per label group. Returned id lists are sorted.
struct Split {
  std::vector<SliceId> train;
  std::vector<SliceId> test;
  std::vector<std::string> warnings;
};

inline std::size_t round_half_up(double x) {
  return static_cast<std::size_t>(std::floor(x + 0.5));
}

inline Split split_ids(const std::vector<SliceId> &ids,
                       const std::vector<int> &labels, double train_fraction,
                       std::uint64_t seed, bool stratify = false) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw usage_error("train fraction must lie in (0,1)");
  if (ids.empty())
    throw data_error("cannot split an empty corpus");

  Rng rng(mix_seed(seed));
  Split split;
  auto take = [&](std::vector<SliceId> group) {
    std::shuffle(group.begin(), group.end(), rng);
    std::size_t n_train = round_half_up(train_fraction * static_cast<double>(group.size()));
    n_train = std::min(n_train, group.size());
    split.train.insert(split.train.end(), group.begin(),
                       group.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(),
                      group.begin() + static_cast<std::ptrdiff_t>(n_train),
                      group.end());
  };

  if (stratify) {
    std::vector<SliceId> neg, pos;
    for (std::size_t k = 0; k < ids.size(); ++k)
      (labels.at(k) == 1 ? pos : neg).push_back(ids[k]);
    take(std::move(neg));
    take(std::move(pos));
  } else {
    take(ids);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  if (split.test.empty())
    split.warnings.push_back("split: test set is empty (" +
                             std::to_string(ids.size()) + " records)");
  if (split.train.empty())
    split.warnings.push_back("split: train set is empty (" +
                             std::to_string(ids.size()) + " records)");
  return split;
}

inline Corpus split_corpus(Corpus c, double train_fraction, std::uint64_t seed,
                           bool stratify = false) {
  if (c.records.empty())
    throw data_error("cannot split an empty corpus");
  std::vector<SliceId> ids;
  std::vector<int> labels;
  for (const auto &r : c.records) {
    ids.push_back(r.id);
    labels.push_back(r.label);
  }
  Split s = split_ids(ids, labels, train_fraction, seed, stratify);
  c.train_ids = std::move(s.train);
  c.test_ids = std::move(s.test);
  c.warnings.insert(c.warnings.end(), s.warnings.begin(), s.warnings.end());
  return c;
}

struct LabelCounts {
  std::size_t total = 0;
  std::size_t vulnerable = 0;
  std::size_t non_vulnerable = 0;

  friend bool operator==(const LabelCounts &, const LabelCounts &) = default;
};

struct CorpusStats {
  LabelCounts all;
  std::map<SliceKind, LabelCounts> per_kind;
};

inline CorpusStats corpus_stats(const Corpus &c) {
  CorpusStats s;
  for (const auto &r : c.records) {
    for (LabelCounts *lc : {&s.all, &s.per_kind[r.kind]}) {
      ++lc->total;
      ++(r.label == 1 ? lc->vulnerable : lc->non_vulnerable);
    }
  }
  return s;
}

/// Renders the counts in the layout of a "slices extracted" table.
inline std::string format_corpus_stats(const CorpusStats &s) {
  auto row = [](std::string_view name, const LabelCounts &c) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-12.*s %10zu %12zu %16zu\n",
                  static_cast<int>(name.size()), name.data(), c.total,
                  c.vulnerable, c.non_vulnerable);
    return std::string(buf);
  };
  std::string out;
  char head[128];
  std::snprintf(head, sizeof(head), "%-12s %10s %12s %16s\n", "Kind", "Total",
                "Vulnerable", "Non-vulnerable");
  out += head;
  for (const auto &[kind, counts] : s.per_kind)
    out += row(to_string(kind), counts);
  out += row("All", s.all);
  return out;
}

} // namespace vulgcn
