// vulgcn: command-line front end for slice extraction, normalization,
// graph construction, GCN training and evaluation.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "vulgcn/vulgcn.hpp"

namespace {

void add_train_flags(CLI::App *cmd, vulgcn::TrainConfig &cfg) {
  cmd->add_option("--lr", cfg.learning_rate, "Adam learning rate")->capture_default_str();
  cmd->add_option("--epochs", cfg.epochs, "training epochs")->capture_default_str();
  cmd->add_option("--dropout", cfg.dropout_p, "dropout probability per dropout layer")
      ->capture_default_str();
  cmd->add_option("--hidden", cfg.hidden, "graph-convolution width")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "seed for split, init and dropout")->capture_default_str();
}

vulgcn::SliceKind kind_from(const std::string &s) { return vulgcn::parse_slice_kind(s); }

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Vulnerable code slice detection with a word/slice graph convolutional network"};
  app.require_subcommand(1);
  auto log = [](const std::string &msg) { std::cerr << msg << "\n"; };

  // extract
  vulgcn::ExtractOptions ex;
  std::string ex_kind = "GADGET";
  std::vector<std::string> ex_labels;
  auto *extract = app.add_subcommand("extract", "extract code gadgets around sink calls");
  extract->add_option("--src", ex.src_dir, "source directory")->required();
  extract->add_option("--sinks", ex.sinks_path, "sink config file (default list if omitted)");
  extract->add_option("--out", ex.out_path, "output corpus file")->required();
  extract->add_option("--kind", ex_kind, "slice kind: FC, AU, PU, AE, GADGET")->capture_default_str();
  extract->add_option("--label", ex_labels, "per-file label, <relative-path>=<0|1> (repeatable)");

  // normalize
  vulgcn::NormalizeOptions no;
  std::string no_kind = "GADGET";
  auto *normalize = app.add_subcommand("normalize", "symbolize and tokenize a corpus");
  normalize->add_option("--corpus", no.corpus_path, "gadget corpus file")->required();
  normalize->add_option("--kind", no_kind, "slice kind")->capture_default_str();
  normalize->add_option("--user-funcs", no.user_funcs_path, "user-defined function names");
  normalize->add_flag("--dedup", no.dedup, "drop slices with duplicate token sequences");
  normalize->add_flag("--keep-field-names", no.keep_field_names, "do not rename struct fields");
  normalize->add_option("--out", no.out_path, "tokenized corpus file")->required();

  // build-graph
  vulgcn::BuildGraphOptions bg;
  auto *build = app.add_subcommand("build-graph", "build the word/slice graph and node features");
  build->add_option("--tokens", bg.tokens_path, "tokenized corpus")->required();
  build->add_option("--embeddings", bg.embeddings_path, "slice embedding file");
  build->add_flag("--fallback-mean-words", bg.fallback_mean_words,
                  "use mean word features for slices without an embedding");
  build->add_option("--dim", bg.dim, "feature width when no embedding file is given")
      ->capture_default_str();
  build->add_option("--min-df", bg.min_df, "minimum document frequency")->capture_default_str();
  build->add_option("--window", bg.window, "sliding-window co-occurrence (0 = whole slice)")
      ->capture_default_str();
  build->add_option("--seed", bg.seed, "word feature seed")->capture_default_str();
  build->add_option("--out", bg.out_graph, "graph dump")->required();
  build->add_option("--features-out", bg.out_features, "node feature file")->required();

  // train
  vulgcn::TrainOptions tr;
  bool tr_single = false;
  auto *train = app.add_subcommand("train", "train the GCN on the training split");
  train->add_option("--tokens", tr.tokens_path, "tokenized corpus")->required();
  train->add_option("--graph", tr.graph_path, "graph dump")->required();
  train->add_option("--features", tr.features_path, "node feature file")->required();
  train->add_option("--train-fraction", tr.train_fraction, "share of slices used for training")
      ->capture_default_str();
  train->add_flag("--stratify", tr.stratify, "split per label");
  train->add_flag("--single-dropout", tr_single, "one dropout layer instead of two");
  add_train_flags(train, tr.config);
  train->add_option("--out", tr.out_checkpoint, "checkpoint file")->required();

  // eval
  vulgcn::EvalOptions ev;
  auto *eval = app.add_subcommand("eval", "evaluate a checkpoint on its test split");
  eval->add_option("--checkpoint", ev.checkpoint_path, "checkpoint file")->required();
  eval->add_option("--graph", ev.graph_path, "graph dump")->required();
  eval->add_option("--features", ev.features_path, "node feature file")->required();
  eval->add_option("--tokens", ev.tokens_path, "tokenized corpus")->required();
  eval->add_flag("--baseline", ev.with_baseline, "also report the linear baseline");
  eval->add_option("--out", ev.out_report, "report file")->required();

  // predict
  vulgcn::PredictOptions pr;
  auto *predict = app.add_subcommand("predict", "write per-slice class probabilities");
  predict->add_option("--checkpoint", pr.checkpoint_path, "checkpoint file")->required();
  predict->add_option("--graph", pr.graph_path, "graph dump")->required();
  predict->add_option("--features", pr.features_path, "node feature file")->required();
  predict->add_flag("--all", pr.all_slices, "predict every slice, not only the test split");
  predict->add_option("--out", pr.out_path, "predictions file")->required();

  // pipeline
  vulgcn::PipelineOptions pl;
  std::string pl_kind = "GADGET";
  bool pl_single = false;
  auto *pipeline = app.add_subcommand("pipeline", "normalize, build graph, train and evaluate");
  pipeline->add_option("--corpus", pl.corpus_path, "gadget corpus file")->required();
  pipeline->add_option("--kind", pl_kind, "slice kind")->capture_default_str();
  pipeline->add_option("--user-funcs", pl.user_funcs_path, "user-defined function names");
  pipeline->add_flag("--dedup", pl.dedup, "drop duplicate token sequences");
  pipeline->add_flag("--keep-field-names", pl.keep_field_names, "do not rename struct fields");
  pipeline->add_option("--embeddings", pl.embeddings_path, "slice embedding file");
  pipeline->add_flag("--fallback-mean-words", pl.fallback_mean_words,
                     "use mean word features where embeddings are missing");
  pipeline->add_option("--dim", pl.dim, "feature width without embeddings")->capture_default_str();
  pipeline->add_option("--min-df", pl.min_df, "minimum document frequency")->capture_default_str();
  pipeline->add_option("--window", pl.window, "sliding-window co-occurrence")->capture_default_str();
  pipeline->add_option("--train-fraction", pl.train_fraction, "training share")->capture_default_str();
  pipeline->add_flag("--stratify", pl.stratify, "split per label");
  pipeline->add_flag("--baseline", pl.with_baseline, "also report the linear baseline");
  pipeline->add_flag("--single-dropout", pl_single, "one dropout layer instead of two");
  add_train_flags(pipeline, pl.config);
  pipeline->add_option("--out-dir", pl.out_dir, "output directory")->required();

  // gen-synthetic
  vulgcn::GenSyntheticOptions gs;
  std::string gs_signal = "token";
  auto *gen = app.add_subcommand("gen-synthetic", "generate a planted-signal corpus");
  gen->add_option("--n", gs.spec.n, "number of slices")->capture_default_str();
  gen->add_option("--fraction", gs.spec.vuln_fraction, "share of vulnerable slices")
      ->capture_default_str();
  gen->add_option("--signal", gs_signal, "token | cooccur")->capture_default_str();
  gen->add_option("--token", gs.spec.planted_token, "planted call for the token signal")
      ->capture_default_str();
  gen->add_option("--noise-lines", gs.spec.noise_lines, "noise statements per slice")
      ->capture_default_str();
  gen->add_option("--seed", gs.spec.seed, "generator seed")->capture_default_str();
  gen->add_option("--out", gs.out_path, "output corpus file")->required();

  // stats
  std::string st_corpus, st_kind = "GADGET";
  auto *stats = app.add_subcommand("stats", "count slices per label and kind");
  stats->add_option("--corpus", st_corpus, "gadget corpus file")->required();
  stats->add_option("--kind", st_kind, "slice kind")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (*extract) {
      ex.kind = kind_from(ex_kind);
      for (const auto &l : ex_labels) {
        auto eq = l.rfind('=');
        if (eq == std::string::npos || (l.substr(eq + 1) != "0" && l.substr(eq + 1) != "1"))
          throw vulgcn::usage_error("--label expects <path>=<0|1>, got '" + l + "'");
        ex.labels[l.substr(0, eq)] = l.back() - '0';
      }
      auto corpus = vulgcn::cmd_extract(ex, log);
      std::cout << corpus.records.size() << " gadget(s) written to " << ex.out_path << "\n";
    } else if (*normalize) {
      no.kind = kind_from(no_kind);
      auto slices = vulgcn::cmd_normalize(no, log);
      std::cout << slices.size() << " tokenized slice(s) written to " << no.out_path << "\n";
    } else if (*build) {
      vulgcn::cmd_build_graph(bg, log);
    } else if (*train) {
      if (tr_single)
        tr.config.dropout_layers = 1;
      tr.config.validate();
      auto ck = vulgcn::cmd_train(tr, log);
      std::cout << "trained " << ck.config.epochs << " epoch(s); checkpoint " << tr.out_checkpoint
                << "\n";
    } else if (*eval) {
      auto out = vulgcn::cmd_eval(ev, log);
      std::cout << out.text;
    } else if (*predict) {
      auto preds = vulgcn::cmd_predict(pr);
      std::cout << preds.size() << " prediction(s) written to " << pr.out_path << "\n";
    } else if (*pipeline) {
      pl.kind = kind_from(pl_kind);
      if (pl_single)
        pl.config.dropout_layers = 1;
      pl.config.validate();
      auto res = vulgcn::run_pipeline(pl, log);
      std::cout << res.eval.text;
    } else if (*gen) {
      gs.spec.signal = vulgcn::parse_signal_kind(gs_signal);
      auto recs = vulgcn::cmd_gen_synthetic(gs);
      std::cout << recs.size() << " slice(s) written to " << gs.out_path << "\n";
    } else if (*stats) {
      auto corpus = vulgcn::parse_gadget_file(st_corpus, kind_from(st_kind));
      std::cout << vulgcn::format_corpus_stats(vulgcn::corpus_stats(corpus));
    }
  } catch (const vulgcn::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(vulgcn::ErrorKind::data);
  }
  return 0;
}
