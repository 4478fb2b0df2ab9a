#pragma once

// End-to-end commands. Each stage reads and writes the file formats of the
// owning modules, so the stages can be run one by one or chained by
// run_pipeline, which calls the same functions.

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "corpus.hpp"
#include "embed.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "gcn.hpp"
#include "graph.hpp"
#include "normalize.hpp"
#include "slicer.hpp"
#include "synthetic.hpp"
#include "text_io.hpp"

namespace vulgcn {

namespace fs = std::filesystem;

/// Messages a command wants shown to the user (warnings, progress).
using Logger = std::function<void(const std::string &)>;

inline void log_to(const Logger &log, const std::string &msg) {
  if (log)
    log(msg);
}

// ---------------------------------------------------------------- extract

struct ExtractOptions {
  std::string src_dir;
  std::string sinks_path; // empty = default sink list
  std::string out_path;
  SliceKind kind = SliceKind::GADGET;
  /// Relative source path -> label; files not listed are labeled 0.
  std::map<std::string, int> labels;
};

inline bool is_c_source(const fs::path &p) {
  static const std::set<std::string> ext = {".c", ".cc", ".cpp", ".cxx", ".h", ".hpp"};
  return ext.count(p.extension().string()) > 0;
}

inline std::string user_funcs_path(const std::string &corpus_path) {
  return corpus_path + ".funcs";
}

/// Writes the corpus and, next to it, `<out>.funcs` with the names of the
/// functions defined in the scanned sources.
inline Corpus cmd_extract(const ExtractOptions &opt, const Logger &log = {}) {
  if (!fs::is_directory(opt.src_dir))
    throw data_error("source directory not found: " + opt.src_dir);
  SinkConfig sinks = opt.sinks_path.empty() ? default_sinks() : load_sink_config(opt.sinks_path);

  std::vector<std::string> files;
  for (const auto &entry : fs::recursive_directory_iterator(opt.src_dir))
    if (entry.is_regular_file() && is_c_source(entry.path()))
      files.push_back(fs::relative(entry.path(), opt.src_dir).generic_string());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw data_error("no C/C++ source files under " + opt.src_dir);
  for (const auto &[path, label] : opt.labels)
    if (std::find(files.begin(), files.end(), path) == files.end())
      throw usage_error("--label names unknown file '" + path + "'");

  Corpus corpus;
  std::set<std::string> user_funcs;
  SliceId next_id = 0;
  for (const auto &rel : files) {
    const std::string text = io::read_file((fs::path(opt.src_dir) / rel).string());
    ExtractedUnit unit;
    try {
      unit = extract_gadgets(text, rel, sinks, opt.kind);
    } catch (const Error &e) {
      throw Error(e.kind(), rel + ": " + e.what());
    }
    auto label = opt.labels.find(rel);
    for (auto &g : unit.gadgets) {
      g.id = next_id++;
      g.label = label == opt.labels.end() ? 0 : label->second;
      corpus.records.push_back(std::move(g));
    }
    user_funcs.insert(unit.user_functions.begin(), unit.user_functions.end());
    log_to(log, rel + ": " + std::to_string(unit.gadgets.size()) + " gadget(s)");
  }
  write_gadget_file(opt.out_path, corpus.records);
  std::string funcs;
  for (const auto &f : user_funcs)
    funcs += f + "\n";
  io::write_file(user_funcs_path(opt.out_path), funcs);
  return corpus;
}

// -------------------------------------------------------------- normalize

struct NormalizeOptions {
  std::string corpus_path;
  SliceKind kind = SliceKind::GADGET;
  std::string user_funcs_path; // one name per line; empty = none
  bool dedup = false;
  bool keep_field_names = false;
  std::string out_path;
};

inline std::unordered_set<std::string> load_name_list(const std::string &path) {
  std::unordered_set<std::string> names;
  for (const auto &line : io::split_lines(io::read_file(path)))
    for (auto f : io::fields(line))
      names.emplace(f);
  return names;
}

inline std::vector<TokenizedSlice> cmd_normalize(const NormalizeOptions &opt,
                                                 const Logger &log = {}) {
  Corpus corpus = parse_gadget_file(opt.corpus_path, opt.kind);
  if (corpus.records.empty())
    throw data_error("corpus is empty: " + opt.corpus_path);
  std::unordered_set<std::string> user_funcs;
  if (!opt.user_funcs_path.empty())
    user_funcs = load_name_list(opt.user_funcs_path);
  SymbolizeOptions sym;
  sym.symbolize_fields = !opt.keep_field_names;
  auto slices = normalize_corpus(corpus, user_funcs, sym);
  if (opt.dedup) {
    DedupResult d = dedup_tokenized(slices);
    log_to(log, "dedup: dropped " + std::to_string(d.dropped) + " duplicate slice(s), " +
                    std::to_string(d.label_conflicts) + " with conflicting labels");
    slices = std::move(d.kept);
  }
  io::write_file(opt.out_path, format_tokenized(slices));
  return slices;
}

// ------------------------------------------------------------ build-graph

struct BuildGraphOptions {
  std::string tokens_path;
  std::string embeddings_path; // empty = word-feature fallback for every slice
  bool fallback_mean_words = false;
  std::size_t dim = 768; // used when no embedding file is given
  std::size_t min_df = 1;
  std::size_t window = 0;
  std::uint64_t seed = 0;
  std::string out_graph;
  std::string out_features;
};

inline TextGraph cmd_build_graph(const BuildGraphOptions &opt, const Logger &log = {}) {
  auto slices = load_tokenized(opt.tokens_path);
  if (slices.empty())
    throw data_error("tokenized corpus is empty: " + opt.tokens_path);
  GraphOptions gopt;
  gopt.min_df = opt.min_df;
  gopt.window = opt.window;
  TextGraph g = build_text_graph(slices, gopt);

  std::optional<EmbeddingTable> table;
  FeatureOptions fopt;
  fopt.fallback_mean_words = opt.fallback_mean_words;
  if (!opt.embeddings_path.empty()) {
    if (fs::exists(opt.embeddings_path) || !opt.fallback_mean_words)
      table = load_embeddings(opt.embeddings_path);
    else
      log_to(log, "embedding file " + opt.embeddings_path +
                      " not found; using mean word features for every slice");
  } else {
    fopt.fallback_mean_words = true;
  }
  const std::size_t dim = table ? table->dim : opt.dim;
  Eigen::MatrixXd words = word_node_features(g.words, dim, opt.seed);
  g = assemble_feature_matrix(std::move(g), words, table ? &*table : nullptr, &slices, fopt);

  io::write_file(opt.out_graph, format_graph_dump(g));
  io::write_file(opt.out_features, format_node_features(g.x));
  log_to(log, "graph: " + std::to_string(g.num_words()) + " words, " +
                  std::to_string(g.num_slices()) + " slices, " +
                  std::to_string(g.entries.size()) + " stored entries, dim " +
                  std::to_string(dim));
  return g;
}

/// Graph dump + feature file -> normalized graph ready for the model.
inline TextGraph load_graph(const std::string &graph_path, const std::string &features_path) {
  GraphDump d = parse_graph_dump(io::read_file(graph_path), graph_path);
  TextGraph g = normalize_adjacency(std::move(d.graph));
  g.x = parse_node_features(io::read_file(features_path), g.num_nodes(), features_path);
  if (d.dim != static_cast<std::size_t>(g.x.cols()))
    throw data_error(graph_path + ": header dim " + std::to_string(d.dim) +
                     " != feature dim " + std::to_string(g.x.cols()));
  return g;
}

struct NodeLabels {
  std::vector<int> labels; // per node, -1 for words
  std::unordered_map<SliceId, std::size_t> node_of;
};

inline NodeLabels node_labels(const TextGraph &g, const std::vector<TokenizedSlice> &slices) {
  std::unordered_map<SliceId, int> by_id;
  for (const auto &s : slices)
    by_id.emplace(s.slice_id, s.label);
  NodeLabels nl;
  nl.labels.assign(g.num_nodes(), -1);
  for (std::size_t k = 0; k < g.num_slices(); ++k) {
    auto it = by_id.find(g.slice_ids[k]);
    if (it == by_id.end())
      throw data_error("graph slice " + std::to_string(g.slice_ids[k]) +
                       " is missing from the tokenized corpus");
    nl.labels[g.slice_node(k)] = it->second;
    nl.node_of.emplace(g.slice_ids[k], g.slice_node(k));
  }
  return nl;
}

inline std::vector<std::size_t> mask_for(const NodeLabels &nl, const std::vector<SliceId> &ids) {
  std::vector<std::size_t> mask;
  for (SliceId id : ids) {
    auto it = nl.node_of.find(id);
    if (it == nl.node_of.end())
      throw data_error("slice " + std::to_string(id) + " is not in the graph");
    mask.push_back(it->second);
  }
  return mask;
}

// ------------------------------------------------------------------ train

struct TrainOptions {
  std::string tokens_path;
  std::string graph_path;
  std::string features_path;
  double train_fraction = 0.8;
  bool stratify = false;
  TrainConfig config;
  std::string out_checkpoint;
};

inline Checkpoint cmd_train(const TrainOptions &opt, const Logger &log = {}) {
  auto slices = load_tokenized(opt.tokens_path);
  TextGraph g = load_graph(opt.graph_path, opt.features_path);
  NodeLabels nl = node_labels(g, slices);

  std::vector<SliceId> ids;
  std::vector<int> labels;
  for (const auto &s : slices) {
    ids.push_back(s.slice_id);
    labels.push_back(s.label);
  }
  Split split = split_ids(ids, labels, opt.train_fraction, opt.config.seed, opt.stratify);
  for (const auto &w : split.warnings)
    log_to(log, "warning: " + w);

  TrainResult tr = train(g, opt.config, nl.labels, mask_for(nl, split.train));
  Checkpoint ck;
  ck.params = std::move(tr.params);
  ck.config = opt.config;
  ck.train_fraction = opt.train_fraction;
  ck.stratify = opt.stratify;
  ck.train_ids = std::move(split.train);
  ck.test_ids = std::move(split.test);
  ck.loss_history = std::move(tr.loss_history);
  io::write_file(opt.out_checkpoint, format_checkpoint(ck));
  if (!ck.loss_history.empty())
    log_to(log, "final training loss " + io::format_double(ck.loss_history.back()));
  return ck;
}

// ---------------------------------------------------------- predict / eval

struct PredictOptions {
  std::string checkpoint_path;
  std::string graph_path;
  std::string features_path;
  bool all_slices = false; // default: the checkpoint's test split
  std::string out_path;
};

struct SlicePrediction {
  SliceId id = 0;
  double p0 = 0.0, p1 = 0.0;
  int label = 0;
};

inline std::vector<SlicePrediction> predict_slices(const TextGraph &g, const Checkpoint &ck,
                                                   const std::vector<SliceId> &ids) {
  std::unordered_map<SliceId, std::size_t> node_of;
  for (std::size_t k = 0; k < g.num_slices(); ++k)
    node_of.emplace(g.slice_ids[k], g.slice_node(k));
  std::vector<std::size_t> mask;
  for (SliceId id : ids) {
    auto it = node_of.find(id);
    if (it == node_of.end())
      throw data_error("slice " + std::to_string(id) + " is not in the graph");
    mask.push_back(it->second);
  }
  Predictions p = predict(g, ck.params, mask);
  std::vector<SlicePrediction> out;
  for (std::size_t r = 0; r < ids.size(); ++r)
    out.push_back({ids[r], p.probs(static_cast<Eigen::Index>(r), 0),
                   p.probs(static_cast<Eigen::Index>(r), 1), p.labels[r]});
  return out;
}

inline std::string format_predictions(const std::vector<SlicePrediction> &preds) {
  std::string out;
  for (const auto &p : preds)
    out += std::to_string(p.id) + "\t" + io::format_double(p.p0) + "\t" +
           io::format_double(p.p1) + "\t" + std::to_string(p.label) + "\n";
  return out;
}

inline std::vector<SlicePrediction> cmd_predict(const PredictOptions &opt) {
  Checkpoint ck = parse_checkpoint(io::read_file(opt.checkpoint_path), opt.checkpoint_path);
  TextGraph g = load_graph(opt.graph_path, opt.features_path);
  std::vector<SliceId> ids = opt.all_slices ? g.slice_ids : ck.test_ids;
  auto preds = predict_slices(g, ck, ids);
  io::write_file(opt.out_path, format_predictions(preds));
  return preds;
}

struct EvalOptions {
  std::string checkpoint_path;
  std::string graph_path;
  std::string features_path;
  std::string tokens_path;
  bool with_baseline = false;
  std::string out_report;
};

struct EvalOutcome {
  EvalReport gcn;
  std::optional<EvalReport> baseline;
  std::string text;
};

inline EvalOutcome cmd_eval(const EvalOptions &opt, const Logger &log = {}) {
  Checkpoint ck = parse_checkpoint(io::read_file(opt.checkpoint_path), opt.checkpoint_path);
  TextGraph g = load_graph(opt.graph_path, opt.features_path);
  auto slices = load_tokenized(opt.tokens_path);
  NodeLabels nl = node_labels(g, slices);
  if (ck.test_ids.empty())
    throw data_error("checkpoint has an empty test split; nothing to evaluate");

  auto preds = predict_slices(g, ck, ck.test_ids);
  std::vector<int> p, t;
  for (const auto &sp : preds) {
    p.push_back(sp.label);
    t.push_back(nl.labels[nl.node_of.at(sp.id)]);
  }
  EvalOutcome out;
  out.gcn = evaluate(p, t);
  std::vector<std::pair<std::string, EvalReport>> rows = {{"GCN", out.gcn}};

  if (opt.with_baseline) {
    Eigen::MatrixXd feats(static_cast<Eigen::Index>(g.num_slices()), g.x.cols());
    std::vector<int> labels(g.num_slices());
    for (std::size_t k = 0; k < g.num_slices(); ++k) {
      feats.row(static_cast<Eigen::Index>(k)) = g.x.row(static_cast<Eigen::Index>(g.slice_node(k)));
      labels[k] = nl.labels[g.slice_node(k)];
    }
    auto rows_of = [&](const std::vector<SliceId> &ids) {
      std::vector<std::size_t> r;
      for (SliceId id : ids)
        r.push_back(nl.node_of.at(id) - g.num_words());
      return r;
    };
    BaselineResult b = baseline_linear(feats, labels, rows_of(ck.train_ids),
                                       rows_of(ck.test_ids), ck.config);
    out.baseline = b.report;
    rows.emplace_back("Linear baseline", b.report);
  }

  out.text = format_report_table(rows) + "\n" + format_report_kv(out.gcn, "gcn.");
  if (out.baseline)
    out.text += format_report_kv(*out.baseline, "baseline.");
  for (const auto &w : out.gcn.warnings)
    log_to(log, "warning: " + w);
  io::write_file(opt.out_report, out.text);
  return out;
}

// -------------------------------------------------------------- synthetic

struct GenSyntheticOptions {
  SyntheticSpec spec;
  std::string out_path;
};

inline std::vector<SliceRecord> cmd_gen_synthetic(const GenSyntheticOptions &opt) {
  auto records = generate_synthetic(opt.spec);
  write_gadget_file(opt.out_path, records);
  return records;
}

// --------------------------------------------------------------- pipeline

struct PipelineOptions {
  std::string corpus_path;
  SliceKind kind = SliceKind::GADGET;
  std::string user_funcs_path;
  bool dedup = false;
  bool keep_field_names = false;
  std::string embeddings_path;
  bool fallback_mean_words = false;
  std::size_t dim = 768;
  std::size_t min_df = 1;
  std::size_t window = 0;
  double train_fraction = 0.8;
  bool stratify = false;
  bool with_baseline = false;
  TrainConfig config;
  std::string out_dir;
};

struct PipelineResult {
  Checkpoint checkpoint;
  EvalOutcome eval;
  std::map<std::string, std::string> artifacts; // name -> path
};

inline std::string pipeline_config_echo(const PipelineOptions &o) {
  const auto &c = o.config;
  std::string s;
  auto kv = [&](const std::string &k, const std::string &v) { s += k + "=" + v + "\n"; };
  kv("corpus", o.corpus_path);
  kv("kind", std::string(to_string(o.kind)));
  kv("user_funcs", o.user_funcs_path);
  kv("dedup", o.dedup ? "1" : "0");
  kv("keep_field_names", o.keep_field_names ? "1" : "0");
  kv("embeddings", o.embeddings_path);
  kv("fallback_mean_words", o.fallback_mean_words ? "1" : "0");
  kv("dim", std::to_string(o.dim));
  kv("min_df", std::to_string(o.min_df));
  kv("window", std::to_string(o.window));
  kv("train_fraction", io::format_double(o.train_fraction));
  kv("stratify", o.stratify ? "1" : "0");
  kv("baseline", o.with_baseline ? "1" : "0");
  kv("learning_rate", io::format_double(c.learning_rate));
  kv("epochs", std::to_string(c.epochs));
  kv("dropout_p", io::format_double(c.dropout_p));
  kv("dropout_layers", std::to_string(c.dropout_layers));
  kv("hidden", std::to_string(c.hidden));
  kv("seed", std::to_string(c.seed));
  kv("propagation", std::string(propagation_rule));
  kv("out_dir", o.out_dir);
  return s;
}

/// normalize -> build-graph -> train -> eval (-> predict), every stage
/// writing its artifact into out_dir. Errors carry a "[stage]" prefix.
/// timings.txt is the only output that differs between identical runs.
inline PipelineResult run_pipeline(const PipelineOptions &o, const Logger &log = {}) {
  fs::create_directories(o.out_dir);
  auto path = [&](const char *name) { return (fs::path(o.out_dir) / name).string(); };
  PipelineResult res;
  res.artifacts = {{"tokens", path("tokens.tsv")},         {"graph", path("graph.txt")},
                   {"features", path("features.txt")},     {"checkpoint", path("checkpoint.txt")},
                   {"report", path("report.txt")},         {"predictions", path("predictions.tsv")},
                   {"config", path("config.txt")},         {"timings", path("timings.txt")}};
  io::write_file(res.artifacts["config"], pipeline_config_echo(o));

  std::string timings;
  auto stage = [&](const char *name, auto &&fn) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const Error &e) {
      throw Error(e.kind(), std::string("[") + name + "] " + e.what());
    } catch (const std::exception &e) {
      throw Error(ErrorKind::data, std::string("[") + name + "] " + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    timings += std::string(name) + "=" + io::format_double(secs) + "\n";
    log_to(log, std::string("stage ") + name + " done");
  };

  stage("normalize", [&] {
    NormalizeOptions n;
    n.corpus_path = o.corpus_path;
    n.kind = o.kind;
    n.user_funcs_path = o.user_funcs_path;
    n.dedup = o.dedup;
    n.keep_field_names = o.keep_field_names;
    n.out_path = res.artifacts["tokens"];
    cmd_normalize(n, log);
  });
  stage("embed", [&] {
    if (!o.embeddings_path.empty() && !o.fallback_mean_words && !fs::exists(o.embeddings_path))
      throw data_error("embedding file not found: " + o.embeddings_path +
                       " (pass --fallback-mean-words to use word features)");
  });
  stage("build-graph", [&] {
    BuildGraphOptions b;
    b.tokens_path = res.artifacts["tokens"];
    b.embeddings_path = o.embeddings_path;
    b.fallback_mean_words = o.fallback_mean_words;
    b.dim = o.dim;
    b.min_df = o.min_df;
    b.window = o.window;
    b.seed = o.config.seed;
    b.out_graph = res.artifacts["graph"];
    b.out_features = res.artifacts["features"];
    cmd_build_graph(b, log);
  });
  stage("train", [&] {
    TrainOptions t;
    t.tokens_path = res.artifacts["tokens"];
    t.graph_path = res.artifacts["graph"];
    t.features_path = res.artifacts["features"];
    t.train_fraction = o.train_fraction;
    t.stratify = o.stratify;
    t.config = o.config;
    t.out_checkpoint = res.artifacts["checkpoint"];
    res.checkpoint = cmd_train(t, log);
  });
  stage("eval", [&] {
    EvalOptions e;
    e.checkpoint_path = res.artifacts["checkpoint"];
    e.graph_path = res.artifacts["graph"];
    e.features_path = res.artifacts["features"];
    e.tokens_path = res.artifacts["tokens"];
    e.with_baseline = o.with_baseline;
    e.out_report = res.artifacts["report"];
    res.eval = cmd_eval(e, log);
    PredictOptions p;
    p.checkpoint_path = res.artifacts["checkpoint"];
    p.graph_path = res.artifacts["graph"];
    p.features_path = res.artifacts["features"];
    p.out_path = res.artifacts["predictions"];
    cmd_predict(p);
  });
  io::write_file(res.artifacts["timings"], timings);
  return res;
}

} // namespace vulgcn
