#pragma once

// Heterogeneous word/slice graph: vocabulary, slice-level co-occurrence
// statistics, TF-IDF and PPMI edge weights, adjacency assembly and
// symmetric normalization.
//
// Node order is [word 0 .. V-1, slice V .. V+N-1]. Word-word edges carry
// PPMI, slice-word edges carry TF-IDF (mirrored so A is symmetric), every
// node has a unit self-loop and slices are never linked directly.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "error.hpp"
#include "normalize.hpp"
#include "text_io.hpp"

namespace vulgcn {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Vocabulary {
  std::vector<std::string> words;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> df; // slices containing the word
  std::size_t num_slices = 0;  // N

  std::size_t size() const { return words.size(); }

  std::size_t at(const std::string &w) const {
    auto it = index.find(w);
    if (it == index.end())
      throw data_error("word '" + w + "' is not in the vocabulary");
    return it->second;
  }
  bool contains(const std::string &w) const { return index.count(w) > 0; }
};

/// Words with document frequency >= min_df, indexed in first-occurrence order.
inline Vocabulary build_vocab(const std::vector<TokenizedSlice> &slices,
                              std::size_t min_df = 1) {
  if (slices.empty())
    throw data_error("cannot build a vocabulary from an empty corpus");
  if (min_df < 1)
    throw usage_error("min_df must be >= 1");

  std::vector<std::string> order;
  std::unordered_map<std::string, std::size_t> df;
  for (const auto &s : slices) {
    std::unordered_map<std::string, bool> in_slice;
    for (const auto &t : s.tokens) {
      if (in_slice.emplace(t, true).second) {
        auto [it, fresh] = df.emplace(t, 0);
        if (fresh)
          order.push_back(t);
        ++it->second;
      }
    }
  }

  Vocabulary v;
  v.num_slices = slices.size();
  for (const auto &w : order) {
    std::size_t d = df[w];
    if (d < min_df)
      continue;
    v.index.emplace(w, v.words.size());
    v.words.push_back(w);
    v.df.push_back(d);
  }
  if (v.words.empty())
    throw data_error("vocabulary is empty after min_df=" + std::to_string(min_df) +
                     " filtering");
  return v;
}

/// Term frequency times ln(N / n_t).
inline double tf_idf(const TokenizedSlice &slice, const std::string &word,
                     const Vocabulary &vocab) {
  const std::size_t w = vocab.at(word);
  std::size_t tf = 0;
  for (const auto &t : slice.tokens)
    tf += t == word;
  if (tf == 0)
    return 0.0;
  return static_cast<double>(tf) *
         std::log(static_cast<double>(vocab.num_slices) /
                  static_cast<double>(vocab.df[w]));
}

/// Occurrence counts over contexts. A context is a whole slice by default,
/// or a sliding token window when window > 0 (slices shorter than the
/// window form one context).
struct CooccurrenceStats {
  std::size_t contexts = 0;
  std::vector<std::size_t> count;                           // per word
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> joint; // i < j

  double p(std::size_t i) const {
    return static_cast<double>(count.at(i)) / static_cast<double>(contexts);
  }
  double p(std::size_t i, std::size_t j) const {
    if (i > j)
      std::swap(i, j);
    auto it = joint.find({i, j});
    return it == joint.end()
               ? 0.0
               : static_cast<double>(it->second) / static_cast<double>(contexts);
  }
};

inline CooccurrenceStats compute_cooccurrence(const std::vector<TokenizedSlice> &slices,
                                              const Vocabulary &vocab,
                                              std::size_t window = 0) {
  CooccurrenceStats st;
  st.count.assign(vocab.size(), 0);

  auto add_context = [&](const std::vector<std::string> &tokens, std::size_t begin,
                         std::size_t end) {
    std::vector<std::size_t> ids;
    for (std::size_t k = begin; k < end; ++k) {
      auto it = vocab.index.find(tokens[k]);
      if (it != vocab.index.end())
        ids.push_back(it->second);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    ++st.contexts;
    for (std::size_t a = 0; a < ids.size(); ++a) {
      ++st.count[ids[a]];
      for (std::size_t b = a + 1; b < ids.size(); ++b)
        ++st.joint[{ids[a], ids[b]}];
    }
  };

  for (const auto &s : slices) {
    const auto n = s.tokens.size();
    if (window == 0 || n <= window) {
      add_context(s.tokens, 0, n);
    } else {
      for (std::size_t b = 0; b + window <= n; ++b)
        add_context(s.tokens, b, b + window);
    }
  }
  return st;
}

/// max(ln(p_ij / (p_i p_j)), 0); zero when the pair never co-occurs.
inline double ppmi_value(double p_i, double p_j, double p_ij) {
  if (p_ij <= 0.0 || p_i <= 0.0 || p_j <= 0.0)
    return 0.0;
  return std::max(std::log(p_ij / (p_i * p_j)), 0.0);
}

inline double ppmi(std::size_t i, std::size_t j, const CooccurrenceStats &stats) {
  return ppmi_value(stats.p(i), stats.p(j), stats.p(i, j));
}

struct GraphEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double weight = 0.0;

  friend bool operator==(const GraphEntry &, const GraphEntry &) = default;
};

struct TextGraph {
  std::vector<std::string> words;  // node i < V
  std::vector<SliceId> slice_ids;  // node V + k
  std::vector<GraphEntry> entries; // A, both triangles, sorted by (row, col)
  SparseMatrix a_hat;              // empty until normalize_adjacency
  Eigen::MatrixXd x;               // empty until assemble_feature_matrix

  std::size_t num_words() const { return words.size(); }
  std::size_t num_slices() const { return slice_ids.size(); }
  std::size_t num_nodes() const { return words.size() + slice_ids.size(); }
  std::size_t slice_node(std::size_t k) const { return words.size() + k; }

  Eigen::MatrixXd dense_adjacency() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(num_nodes()),
                                              static_cast<Eigen::Index>(num_nodes()));
    for (const auto &e : entries)
      a(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.weight;
    return a;
  }
};

inline TextGraph build_adjacency(const std::vector<TokenizedSlice> &slices,
                                 const Vocabulary &vocab,
                                 const CooccurrenceStats &stats) {
  TextGraph g;
  g.words = vocab.words;
  for (const auto &s : slices)
    g.slice_ids.push_back(s.slice_id);
  const std::size_t V = vocab.size();

  for (std::size_t i = 0; i < g.num_nodes(); ++i)
    g.entries.push_back({i, i, 1.0});

  for (const auto &[pair, c] : stats.joint) {
    (void)c;
    double w = ppmi(pair.first, pair.second, stats);
    if (w > 0.0) {
      g.entries.push_back({pair.first, pair.second, w});
      g.entries.push_back({pair.second, pair.first, w});
    }
  }

  const double n = static_cast<double>(vocab.num_slices);
  for (std::size_t k = 0; k < slices.size(); ++k) {
    std::map<std::size_t, std::size_t> tf;
    for (const auto &t : slices[k].tokens) {
      auto it = vocab.index.find(t);
      if (it != vocab.index.end())
        ++tf[it->second];
    }
    for (const auto &[w, count] : tf) {
      double weight = static_cast<double>(count) *
                      std::log(n / static_cast<double>(vocab.df[w]));
      if (weight > 0.0) {
        g.entries.push_back({V + k, w, weight});
        g.entries.push_back({w, V + k, weight});
      }
    }
  }

  std::sort(g.entries.begin(), g.entries.end(), [](const GraphEntry &a, const GraphEntry &b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return g;
}

/// Fills a_hat = D^-1/2 A D^-1/2 with D the row sums of A.
inline TextGraph normalize_adjacency(TextGraph g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> degree(n, 0.0);
  for (const auto &e : g.entries)
    degree[e.row] += e.weight;
  for (std::size_t i = 0; i < n; ++i)
    if (!(degree[i] > 0.0))
      throw data_error("node " + std::to_string(i) + " has no incident weight");

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(g.entries.size());
  for (const auto &e : g.entries)
    trip.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col),
                      e.weight / std::sqrt(degree[e.row] * degree[e.col]));
  g.a_hat.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  g.a_hat.setFromTriplets(trip.begin(), trip.end());
  g.a_hat.makeCompressed();
  return g;
}

struct GraphOptions {
  std::size_t min_df = 1;
  std::size_t window = 0; // 0 = slice-level co-occurrence
};

inline TextGraph build_text_graph(const std::vector<TokenizedSlice> &slices,
                                  const GraphOptions &opts = {}) {
  Vocabulary vocab = build_vocab(slices, opts.min_df);
  CooccurrenceStats stats = compute_cooccurrence(slices, vocab, opts.window);
  return build_adjacency(slices, vocab, stats);
}

// Graph dump:
//   nodes=<V+N> words=<V> slices=<N> dim=<d>
//   <i> <j> <weight>            one line per stored entry of A
//   word <idx> <token>
//   slice <idx> <slice_id>

inline std::string format_graph_dump(const TextGraph &g) {
  std::string out = "nodes=" + std::to_string(g.num_nodes()) +
                    " words=" + std::to_string(g.num_words()) +
                    " slices=" + std::to_string(g.num_slices()) +
                    " dim=" + std::to_string(g.x.cols()) + "\n";
  for (const auto &e : g.entries) {
    out += std::to_string(e.row);
    out += ' ';
    out += std::to_string(e.col);
    out += ' ';
    out += io::format_double(e.weight);
    out += '\n';
  }
  for (std::size_t i = 0; i < g.num_words(); ++i)
    out += "word " + std::to_string(i) + " " + g.words[i] + "\n";
  for (std::size_t k = 0; k < g.num_slices(); ++k)
    out += "slice " + std::to_string(g.slice_node(k)) + " " +
           std::to_string(g.slice_ids[k]) + "\n";
  return out;
}

struct GraphDump {
  TextGraph graph; // entries and legend; a_hat and x empty
  std::size_t dim = 0;
};

inline GraphDump parse_graph_dump(std::string_view text,
                                  const std::string &source = "<graph>") {
  auto lines = io::split_lines(text);
  if (lines.empty())
    throw parse_error(source, 1, "empty graph dump");
  std::size_t nodes = 0, words = 0, slices = 0, dim = 0;
  {
    auto f = io::fields(lines[0]);
    auto kv = [&](std::size_t i, std::string_view key, std::size_t &out) {
      if (i >= f.size() || f[i].substr(0, key.size() + 1) != std::string(key) + "=" ||
          !io::parse_int(f[i].substr(key.size() + 1), out))
        throw parse_error(source, 1, "malformed header, expected " + std::string(key) + "=<n>");
    };
    if (f.size() != 4)
      throw parse_error(source, 1, "malformed header");
    kv(0, "nodes", nodes);
    kv(1, "words", words);
    kv(2, "slices", slices);
    kv(3, "dim", dim);
    if (nodes != words + slices)
      throw parse_error(source, 1, "nodes != words + slices");
  }
  GraphDump d;
  d.dim = dim;
  d.graph.words.resize(words);
  d.graph.slice_ids.resize(slices);
  std::vector<char> word_seen(words, 0), slice_seen(slices, 0);
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    auto f = io::fields(lines[ln]);
    if (f.empty())
      continue;
    std::size_t idx = 0;
    if (f[0] == "word" || f[0] == "slice") {
      if (f.size() != 3 || !io::parse_int(f[1], idx))
        throw parse_error(source, ln + 1, "malformed legend line");
      if (f[0] == "word") {
        if (idx >= words)
          throw parse_error(source, ln + 1, "word index out of range");
        d.graph.words[idx] = std::string(f[2]);
        word_seen[idx] = 1;
      } else {
        if (idx < words || idx >= nodes)
          throw parse_error(source, ln + 1, "slice index out of range");
        if (!io::parse_int(f[2], d.graph.slice_ids[idx - words]))
          throw parse_error(source, ln + 1, "bad slice id");
        slice_seen[idx - words] = 1;
      }
      continue;
    }
    GraphEntry e;
    if (f.size() != 3 || !io::parse_int(f[0], e.row) || !io::parse_int(f[1], e.col) ||
        !io::parse_double(f[2], e.weight))
      throw parse_error(source, ln + 1, "malformed entry, expected '<i> <j> <weight>'");
    if (e.row >= nodes || e.col >= nodes)
      throw parse_error(source, ln + 1, "entry index out of range");
    d.graph.entries.push_back(e);
  }
  if (std::count(word_seen.begin(), word_seen.end(), 0) ||
      std::count(slice_seen.begin(), slice_seen.end(), 0))
    throw parse_error(source, lines.size(), "node legend incomplete");
  std::sort(d.graph.entries.begin(), d.graph.entries.end(),
            [](const GraphEntry &a, const GraphEntry &b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  return d;
}

} // namespace vulgcn
