#pragma once

// Node features: slice vectors from an external embedding file, seeded
// Gaussian vectors for word nodes, and the (V+N) x d feature matrix.

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "graph.hpp"
#include "random.hpp"
#include "text_io.hpp"

namespace vulgcn {

struct EmbeddingTable {
  std::size_t dim = 0;
  std::map<SliceId, std::vector<double>> vectors;
};

/// Grammar: `dim=<d>` on the first line, then `<slice_id>\t<f1> ... <fd>`.
/// Lines starting with '#' are comments.
inline EmbeddingTable parse_embeddings(std::string_view text,
                                       const std::string &source = "<embeddings>") {
  auto lines = io::split_lines(text);
  std::size_t ln = 0;
  while (ln < lines.size() && (lines[ln].empty() || lines[ln][0] == '#'))
    ++ln;
  EmbeddingTable t;
  if (ln >= lines.size() || lines[ln].rfind("dim=", 0) != 0 ||
      !io::parse_int(std::string_view(lines[ln]).substr(4), t.dim) || t.dim == 0)
    throw parse_error(source, ln + 1, "expected header 'dim=<d>' with d >= 1");
  for (++ln; ln < lines.size(); ++ln) {
    const std::string &line = lines[ln];
    if (line.empty() || line[0] == '#')
      continue;
    std::size_t tab = line.find('\t');
    SliceId id = 0;
    if (tab == std::string::npos ||
        !io::parse_int(std::string_view(line).substr(0, tab), id))
      throw parse_error(source, ln + 1, "expected '<slice_id>\\t<values>'");
    auto vals = io::fields(std::string_view(line).substr(tab + 1));
    if (vals.size() != t.dim)
      throw parse_error(source, ln + 1,
                        "row " + std::to_string(id) + ": expected " +
                            std::to_string(t.dim) + " values, got " +
                            std::to_string(vals.size()));
    std::vector<double> v(t.dim);
    for (std::size_t k = 0; k < t.dim; ++k)
      if (!io::parse_double(vals[k], v[k]) || !std::isfinite(v[k]))
        throw parse_error(source, ln + 1,
                          "row " + std::to_string(id) + ": non-numeric value '" +
                              std::string(vals[k]) + "'");
    if (!t.vectors.emplace(id, std::move(v)).second)
      throw parse_error(source, ln + 1, "duplicate slice id " + std::to_string(id));
  }
  return t;
}

inline EmbeddingTable load_embeddings(const std::string &path) {
  return parse_embeddings(io::read_file(path), path);
}

inline std::string format_embeddings(const EmbeddingTable &t) {
  std::string out = "dim=" + std::to_string(t.dim) + "\n";
  for (const auto &[id, v] : t.vectors) {
    out += std::to_string(id);
    out += '\t';
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k)
        out += ' ';
      out += io::format_double(v[k]);
    }
    out += '\n';
  }
  return out;
}

inline void write_embeddings(const std::string &path, const EmbeddingTable &t) {
  io::write_file(path, format_embeddings(t));
}

/// Gaussian vector with variance 1/dim, seeded by (word text, seed) only.
inline Eigen::VectorXd word_feature(const std::string &word, std::size_t dim,
                                    std::uint64_t seed) {
  Rng rng(mix_seed(seed, stable_hash(word)));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < v.size(); ++k)
    v(k) = normal(rng) * scale;
  return v;
}

inline Eigen::MatrixXd word_node_features(const std::vector<std::string> &words,
                                          std::size_t dim, std::uint64_t seed) {
  if (dim < 1)
    throw usage_error("feature dimension must be >= 1");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(words.size()),
                    static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < words.size(); ++i)
    m.row(static_cast<Eigen::Index>(i)) = word_feature(words[i], dim, seed).transpose();
  return m;
}

inline Eigen::MatrixXd word_node_features(const Vocabulary &vocab, std::size_t dim,
                                          std::uint64_t seed) {
  return word_node_features(vocab.words, dim, seed);
}

struct FeatureOptions {
  /// Slices without an embedding get the mean of their word-node rows.
  bool fallback_mean_words = false;
};

/// Rows 0..V-1 from `words`, rows V.. from `slices` in node order.
/// `tokens` (same order as the graph's slice nodes) is needed only for the
/// fallback.
inline TextGraph assemble_feature_matrix(TextGraph g, const Eigen::MatrixXd &words,
                                         const EmbeddingTable *slices,
                                         const std::vector<TokenizedSlice> *tokens,
                                         const FeatureOptions &opts = {}) {
  const auto V = static_cast<Eigen::Index>(g.num_words());
  if (words.rows() != V)
    throw data_error("word feature rows (" + std::to_string(words.rows()) +
                     ") != vocabulary size (" + std::to_string(V) + ")");
  const Eigen::Index dim = words.cols();
  if (slices && slices->dim != static_cast<std::size_t>(dim))
    throw data_error("embedding dim " + std::to_string(slices->dim) +
                     " != word feature dim " + std::to_string(dim));
  if (opts.fallback_mean_words && (!tokens || tokens->size() != g.num_slices()))
    throw data_error("fallback mode needs the tokenized slices of the graph");

  std::unordered_map<std::string, Eigen::Index> word_index;
  for (Eigen::Index i = 0; i < V; ++i)
    word_index.emplace(g.words[static_cast<std::size_t>(i)], i);

  Eigen::MatrixXd x(static_cast<Eigen::Index>(g.num_nodes()), dim);
  x.topRows(V) = words;
  for (std::size_t k = 0; k < g.num_slices(); ++k) {
    const auto row = static_cast<Eigen::Index>(g.slice_node(k));
    const SliceId id = g.slice_ids[k];
    if (slices) {
      auto it = slices->vectors.find(id);
      if (it != slices->vectors.end()) {
        x.row(row) = Eigen::Map<const Eigen::RowVectorXd>(it->second.data(), dim);
        continue;
      }
    }
    if (!opts.fallback_mean_words)
      throw data_error("no embedding for slice " + std::to_string(id));
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(dim);
    std::size_t count = 0;
    for (const auto &t : (*tokens)[k].tokens) {
      auto it = word_index.find(t);
      if (it == word_index.end())
        continue;
      sum += words.row(it->second);
      ++count;
    }
    x.row(row) = count ? Eigen::RowVectorXd(sum / static_cast<double>(count)) : sum;
  }
  g.x = std::move(x);
  return g;
}

// Node feature file: the embedding grammar keyed by node index.

inline std::string format_node_features(const Eigen::MatrixXd &x) {
  EmbeddingTable t;
  t.dim = static_cast<std::size_t>(x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::vector<double> v(t.dim);
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      v[static_cast<std::size_t>(c)] = x(i, c);
    t.vectors.emplace(static_cast<SliceId>(i), std::move(v));
  }
  return format_embeddings(t);
}

inline Eigen::MatrixXd parse_node_features(std::string_view text, std::size_t nodes,
                                           const std::string &source = "<features>") {
  EmbeddingTable t = parse_embeddings(text, source);
  if (t.vectors.size() != nodes)
    throw data_error(source + ": expected " + std::to_string(nodes) +
                     " feature rows, got " + std::to_string(t.vectors.size()));
  Eigen::MatrixXd x(static_cast<Eigen::Index>(nodes), static_cast<Eigen::Index>(t.dim));
  for (const auto &[id, v] : t.vectors) {
    if (id >= nodes)
      throw data_error(source + ": node index " + std::to_string(id) + " out of range");
    for (std::size_t c = 0; c < t.dim; ++c)
      x(static_cast<Eigen::Index>(id), static_cast<Eigen::Index>(c)) = v[c];
  }
  return x;
}

} // namespace vulgcn
