// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include <vulgcn/eval.hpp>
#include <vulgcn/graph.hpp>
#include <vulgcn/normalize.hpp>
#include <vulgcn/pipeline.hpp>

#include "gradcheck.hpp"
#include "oracle.hpp"

using namespace vulgcn;
namespace fs = std::filesystem;

namespace tol {
constexpr double edge_weight = 1e-12;
constexpr double edge_seconds = 5.0;
constexpr double grad_rel = 1e-4;
constexpr double grad_h = 1e-5;
constexpr double grad_seconds = 10.0;
constexpr double token_f1 = 0.95;
constexpr double token_seconds = 60.0;
constexpr double contrast_baseline_f1 = 0.6;
constexpr double contrast_gcn_f1 = 0.9;
constexpr double contrast_seconds = 90.0;
} // namespace tol

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const std::string &name, const std::function<Outcome()> &fn,
            double budget_seconds = 0.0) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_seconds > 0 && secs >= budget_seconds) {
    o.pass = false;
    o.detail += " over time budget " + io::format_double(budget_seconds) + "s";
  }
  failures += !o.pass;
  std::printf("%s %-26s %6.2fs  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs,
              o.detail.c_str());
  std::fflush(stdout);
}

std::vector<oracle::Doc> random_corpus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t vocab = 5 + rng() % 46;
  const std::size_t slices = 2 + rng() % 19;
  std::vector<oracle::Doc> docs(slices);
  for (auto &d : docs) {
    const std::size_t len = 1 + rng() % 15;
    for (std::size_t k = 0; k < len; ++k)
      d.push_back("t" + std::to_string(rng() % vocab));
  }
  return docs;
}

std::vector<TokenizedSlice> as_slices(const std::vector<oracle::Doc> &docs) {
  std::vector<TokenizedSlice> out;
  for (std::size_t k = 0; k < docs.size(); ++k)
    out.push_back({static_cast<SliceId>(k), static_cast<int>(k % 2), docs[k]});
  return out;
}

constexpr std::uint64_t corpus_seeds = 10;

Outcome edge_weights() {
  double worst = 0.0;
  for (std::uint64_t s = 1; s <= corpus_seeds; ++s) {
    auto docs = random_corpus(s);
    TextGraph g = normalize_adjacency(build_text_graph(as_slices(docs)));
    oracle::DenseGraph o = oracle::build(docs);
    if (g.words != o.words)
      return {false, "vocabulary order differs on corpus " + std::to_string(s)};
    worst = std::max(worst, (g.dense_adjacency() - o.a).cwiseAbs().maxCoeff());
    worst = std::max(worst, (Eigen::MatrixXd(g.a_hat) - o.a_hat).cwiseAbs().maxCoeff());
  }
  return {worst <= tol::edge_weight, "max |diff| " + io::format_double(worst)};
}

Outcome adjacency_structure() {
  std::size_t checked = 0;
  for (std::uint64_t s = 1; s <= corpus_seeds; ++s) {
    TextGraph g = build_text_graph(as_slices(random_corpus(s)));
    Eigen::MatrixXd a = g.dense_adjacency();
    const auto v = static_cast<Eigen::Index>(g.num_words());
    const std::string where = " on corpus " + std::to_string(s);
    if (a != a.transpose())
      return {false, "asymmetric" + where};
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (a(i, i) != 1.0)
        return {false, "diagonal != 1" + where};
      for (Eigen::Index j = 0; j < a.cols(); ++j, ++checked) {
        if (a(i, j) < 0.0)
          return {false, "negative weight" + where};
        if (i >= v && j >= v && i != j && a(i, j) != 0.0)
          return {false, "slice-slice edge" + where};
      }
    }
    for (const auto &e : g.entries)
      if (e.row >= v && e.col >= v && e.row != e.col)
        return {false, "stored slice-slice entry" + where};
  }
  return {true, std::to_string(checked) + " entries"};
}

Outcome gradient_check() {
  double worst_full = 0.0, worst_wide = 0.0;
  std::size_t entries = 0;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    auto pr = gradcheck::random_problem(6, 8, s);
    gradcheck::Options o;
    o.h = tol::grad_h;
    // Every entry of every tensor at a narrow hidden width.
    for (auto r : gradcheck::check(pr, init_params(8, s, 16), o)) {
      worst_full = std::max(worst_full, r.rel_error);
      entries += r.checked;
    }
    // Sampled entries at the default width.
    o.max_entries = 64;
    for (auto r : gradcheck::check(pr, init_params(8, s, default_hidden), o, s)) {
      worst_wide = std::max(worst_wide, r.rel_error);
      entries += r.checked;
    }
  }
  const double worst = std::max(worst_full, worst_wide);
  return {worst < tol::grad_rel, "max rel error " + io::format_double(worst) + " over " +
                                     std::to_string(entries) + " entries"};
}

fs::path scratch(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("vulgcn_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

PipelineOptions synthetic_run(const fs::path &dir, SignalKind signal, std::size_t epochs) {
  GenSyntheticOptions gen;
  gen.spec.n = 200;
  gen.spec.vuln_fraction = 0.3;
  gen.spec.signal = signal;
  gen.out_path = (dir / "corpus.txt").string();
  cmd_gen_synthetic(gen);
  PipelineOptions p;
  p.corpus_path = gen.out_path;
  p.fallback_mean_words = true;
  p.with_baseline = signal == SignalKind::cooccur;
  p.config.epochs = epochs;
  p.out_dir = (dir / "out").string();
  return p;
}

Outcome token_learning() {
  PipelineResult r = run_pipeline(synthetic_run(scratch("token"), SignalKind::token, 200));
  const auto &h = r.checkpoint.loss_history;
  if (h.size() < 20)
    return {false, "short loss history"};
  for (std::size_t k = 1; k < 20; ++k)
    if (!(h[k] < h[k - 1]))
      return {false, "loss rose at epoch " + std::to_string(k + 1)};
  const double f1 = r.eval.gcn.f1;
  return {f1 >= tol::token_f1, "loss " + io::format_double(h.front()) + " -> " +
                                   io::format_double(h.back()) + ", F1 " + io::format_double(f1)};
}

Outcome graph_contrast() {
  PipelineResult r = run_pipeline(synthetic_run(scratch("cooccur"), SignalKind::cooccur, 500));
  const double gcn = r.eval.gcn.f1, base = r.eval.baseline->f1;
  return {base <= tol::contrast_baseline_f1 && gcn >= tol::contrast_gcn_f1,
          "baseline F1 " + io::format_double(base) + ", GCN F1 " + io::format_double(gcn)};
}

Outcome tokenizer() {
  const std::vector<std::string> expect = {"V1", "=", "V2", "-", "8", ";"};
  if (tokenize_symbolic({"V1=V2-8;"}, 0, 0).tokens != expect)
    return {false, "worked example mis-tokenized"};

  const std::vector<std::vector<std::string>> templates = {
      {"int @0 = @1 + 4;", "@2 [ @0 ] = @1 ;", "if (@0 > @3) @4(@2, @1);", "@3++;"},
      {"char @0[16];", "strcpy(@0, @1);", "@2 = strlen(@0) - @3;", "return @2;"},
      {"@0->@5 = @1;", "@4(@0, @1.@5);", "memcpy(@2, @0, @3 * 2);"},
      {"for (@0 = 0; @0 < @1; @0++) @2[@0] = @3;", "free(@2);", "@4(@3);"},
      {"size_t @0 = sizeof(@1);", "@2 = (char *) malloc(@0);", "@2[@3] = 'x';"},
  };
  std::mt19937_64 rng(2024);
  auto fresh = [&](std::size_t k) {
    std::string s;
    const std::size_t len = 1 + rng() % 6;
    for (std::size_t c = 0; c < len; ++c)
      s += static_cast<char>('a' + rng() % 26);
    return "q" + s + "_" + std::to_string(k);
  };
  auto instantiate = [](std::vector<std::string> lines, const std::vector<std::string> &names) {
    for (auto &l : lines)
      for (std::size_t k = 0; k < names.size(); ++k)
        for (std::size_t p; (p = l.find("@" + std::to_string(k))) != std::string::npos;)
          l.replace(p, 2, names[k]);
    return lines;
  };
  constexpr int cases = 50;
  for (int c = 0; c < cases; ++c) {
    const auto &t = templates[static_cast<std::size_t>(c) % templates.size()];
    std::vector<std::string> a, b;
    for (std::size_t k = 0; k < 6; ++k) {
      a.push_back(fresh(k));
      b.push_back(fresh(k + 10));
    }
    SliceRecord ra{static_cast<SliceId>(c), "x.c", instantiate(t, a), 0, SliceKind::GADGET};
    SliceRecord rb{static_cast<SliceId>(c), "y.c", instantiate(t, b), 0, SliceKind::GADGET};
    if (normalize_slice(ra, {a[4]}).tokens != normalize_slice(rb, {b[4]}).tokens)
      return {false, "case " + std::to_string(c) + " not invariant"};
  }
  return {true, "worked example + " + std::to_string(cases) + " renaming cases"};
}

Outcome metrics_conformance() {
  std::mt19937_64 rng(99);
  constexpr int cases = 100;
  for (int c = 0; c < cases;) {
    ConfusionMatrix m{rng() % 40, rng() % 40, rng() % 40, rng() % 40};
    if (m.total() == 0)
      continue;
    ++c;
    EvalReport r = metrics(m);
    auto o = oracle::metrics(static_cast<double>(m.tp), static_cast<double>(m.tn),
                             static_cast<double>(m.fp), static_cast<double>(m.fn));
    if (r.accuracy != o.accuracy || r.precision != o.precision || r.recall != o.recall ||
        r.f1 != o.f1)
      return {false, "mismatch on case " + std::to_string(c)};
  }
  EvalReport p = evaluate({1, 0, 1, 1, 0}, {1, 0, 1, 1, 0});
  if (p.accuracy != 1.0 || p.precision != 1.0 || p.recall != 1.0 || p.f1 != 1.0)
    return {false, "perfect classifier below 1.0"};
  return {true, std::to_string(cases) + " matrices exact, perfect = 1.0"};
}

Outcome determinism() {
  fs::path dir = scratch("determinism");
  GenSyntheticOptions gen;
  gen.spec.n = 80;
  gen.spec.seed = 5;
  gen.out_path = (dir / "corpus.txt").string();
  cmd_gen_synthetic(gen);
  PipelineOptions p;
  p.corpus_path = gen.out_path;
  p.fallback_mean_words = true;
  p.with_baseline = true;
  p.config.epochs = 20;
  p.config.seed = 3;
  p.out_dir = (dir / "a").string();
  run_pipeline(p);
  p.out_dir = (dir / "b").string();
  run_pipeline(p);
  for (const char *f : {"checkpoint.txt", "report.txt"})
    if (io::read_file((dir / "a" / f).string()) != io::read_file((dir / "b" / f).string()))
      return {false, std::string(f) + " differs"};
  return {true, "checkpoint and report byte-identical"};
}

} // namespace

int main() {
  report("edge-weight oracle", edge_weights, tol::edge_seconds);
  report("adjacency structure", adjacency_structure);
  report("gradient check", gradient_check, tol::grad_seconds);
  report("token learning", token_learning, tol::token_seconds);
  report("graph advantage contrast", graph_contrast, tol::contrast_seconds);
  report("tokenizer conformance", tokenizer);
  report("metrics conformance", metrics_conformance);
  report("determinism", determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
