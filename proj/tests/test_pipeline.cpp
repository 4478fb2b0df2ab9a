#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

#include <vulgcn/pipeline.hpp>

using namespace vulgcn;
namespace fs = std::filesystem;

namespace {

const std::string fixtures = VULGCN_FIXTURES;
const std::string cli = VULGCN_CLI;

fs::path scratch(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("vulgcn_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string corpus_file(const fs::path &dir, std::size_t n = 40, std::uint64_t seed = 1) {
  GenSyntheticOptions g;
  g.spec.n = n;
  g.spec.seed = seed;
  g.out_path = (dir / "corpus.txt").string();
  cmd_gen_synthetic(g);
  return g.out_path;
}

TrainConfig quick() {
  TrainConfig c;
  c.epochs = 5;
  c.hidden = 8;
  c.seed = 2;
  return c;
}

int run(const std::string &args) {
  int status = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Extract, GoldenFixture) {
  fs::path dir = scratch("extract");
  ExtractOptions o;
  o.src_dir = fixtures + "/extract/src";
  o.out_path = (dir / "gadgets.txt").string();
  o.labels = {{"copy.c", 1}, {"net/recv.c", 1}};
  Corpus c = cmd_extract(o);
  EXPECT_EQ(c.records.size(), 7u);
  EXPECT_EQ(io::read_file(o.out_path), io::read_file(fixtures + "/extract/expected.txt"));
  EXPECT_EQ(io::read_file(o.out_path + ".funcs"),
            io::read_file(fixtures + "/extract/expected.txt.funcs"));
}

TEST(Extract, SingleFileAndErrors) {
  fs::path dir = scratch("extract_single");
  fs::create_directories(dir / "src");
  io::write_file((dir / "src" / "a.c").string(), "void f(char *s) { char b[4]; strcpy(b, s); }\n");
  ExtractOptions o;
  o.src_dir = (dir / "src").string();
  o.out_path = (dir / "out.txt").string();
  EXPECT_EQ(cmd_extract(o).records.size(), 1u);
  EXPECT_EQ(parse_gadget_file(o.out_path).records.size(), 1u);

  fs::create_directories(dir / "empty");
  o.src_dir = (dir / "empty").string();
  EXPECT_THROW(cmd_extract(o), Error);
  o.src_dir = (dir / "src").string();
  o.labels = {{"missing.c", 1}};
  EXPECT_THROW(cmd_extract(o), Error);
}

TEST(Pipeline, StagesEqualPipeline) {
  fs::path dir = scratch("stages");
  const std::string corpus = corpus_file(dir);

  PipelineOptions p;
  p.corpus_path = corpus;
  p.dim = 16;
  p.with_baseline = true;
  p.config = quick();
  p.out_dir = (dir / "whole").string();
  run_pipeline(p);

  const fs::path s = dir / "staged";
  fs::create_directories(s);
  NormalizeOptions n;
  n.corpus_path = corpus;
  n.out_path = (s / "tokens.tsv").string();
  cmd_normalize(n);
  BuildGraphOptions b;
  b.tokens_path = n.out_path;
  b.dim = 16;
  b.seed = p.config.seed;
  b.out_graph = (s / "graph.txt").string();
  b.out_features = (s / "features.txt").string();
  cmd_build_graph(b);
  TrainOptions t;
  t.tokens_path = n.out_path;
  t.graph_path = b.out_graph;
  t.features_path = b.out_features;
  t.config = quick();
  t.out_checkpoint = (s / "checkpoint.txt").string();
  cmd_train(t);
  EvalOptions e;
  e.checkpoint_path = t.out_checkpoint;
  e.graph_path = b.out_graph;
  e.features_path = b.out_features;
  e.tokens_path = n.out_path;
  e.with_baseline = true;
  e.out_report = (s / "report.txt").string();
  cmd_eval(e);

  for (const char *f : {"tokens.tsv", "graph.txt", "features.txt", "checkpoint.txt", "report.txt"})
    EXPECT_EQ(io::read_file((s / f).string()), io::read_file((dir / "whole" / f).string())) << f;
}

TEST(Pipeline, RerunIsByteIdentical) {
  fs::path dir = scratch("rerun");
  PipelineOptions p;
  p.corpus_path = corpus_file(dir);
  p.dim = 16;
  p.config = quick();
  p.out_dir = (dir / "a").string();
  run_pipeline(p);
  p.out_dir = (dir / "b").string();
  run_pipeline(p);
  for (const char *f : {"tokens.tsv", "graph.txt", "features.txt", "checkpoint.txt", "report.txt",
                        "predictions.tsv"})
    EXPECT_EQ(io::read_file((dir / "a" / f).string()), io::read_file((dir / "b" / f).string()))
        << f;
}

TEST(Pipeline, MissingEmbeddingsIsStageTagged) {
  fs::path dir = scratch("missing_emb");
  PipelineOptions p;
  p.corpus_path = corpus_file(dir, 12);
  p.embeddings_path = (dir / "nope.txt").string();
  p.dim = 8;
  p.config = quick();
  p.out_dir = (dir / "out").string();
  try {
    run_pipeline(p);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(std::string(e.what()).rfind("[embed] embedding file not found", 0), 0u) << e.what();
    EXPECT_EQ(e.exit_code(), 2);
  }
  p.fallback_mean_words = true;
  std::vector<std::string> messages;
  run_pipeline(p, [&](const std::string &m) { messages.push_back(m); });
  EXPECT_TRUE(std::any_of(messages.begin(), messages.end(), [](const std::string &m) {
    return m.find("not found; using mean word features") != std::string::npos;
  }));
}

TEST(Pipeline, EmbeddingFileUsed) {
  fs::path dir = scratch("with_emb");
  const std::string corpus = corpus_file(dir, 10);
  EmbeddingTable t;
  t.dim = 4;
  for (const auto &r : parse_gadget_file(corpus).records)
    t.vectors[r.id] = {1.0 * r.id, 0.5, -0.5, 2.0};
  write_embeddings((dir / "emb.txt").string(), t);
  PipelineOptions p;
  p.corpus_path = corpus;
  p.embeddings_path = (dir / "emb.txt").string();
  p.config = quick();
  p.out_dir = (dir / "out").string();
  run_pipeline(p);
  TextGraph g = load_graph(p.out_dir + "/graph.txt", p.out_dir + "/features.txt");
  EXPECT_EQ(g.x.cols(), 4);
  const auto row = static_cast<Eigen::Index>(g.slice_node(3));
  EXPECT_EQ(g.x(row, 0), 3.0);
}

TEST(Pipeline, PredictionsFile) {
  fs::path dir = scratch("predict");
  PipelineOptions p;
  p.corpus_path = corpus_file(dir, 20);
  p.dim = 8;
  p.config = quick();
  p.out_dir = (dir / "out").string();
  PipelineResult r = run_pipeline(p);
  auto lines = io::split_lines(io::read_file(p.out_dir + "/predictions.tsv"));
  ASSERT_EQ(lines.size(), r.checkpoint.test_ids.size());
  for (const auto &l : lines) {
    auto f = io::fields(l);
    ASSERT_EQ(f.size(), 4u);
    double p0 = 0, p1 = 0;
    ASSERT_TRUE(io::parse_double(f[1], p0) && io::parse_double(f[2], p1));
    EXPECT_NEAR(p0 + p1, 1.0, 1e-12);
  }
}

TEST(Pipeline, TokenizedIdsMustMatchGraph) {
  TextGraph g = build_text_graph({{1, 0, {"a"}}, {2, 1, {"b"}}});
  EXPECT_THROW(node_labels(g, {{1, 0, {"a"}}}), Error);
}

TEST(Cli, ExitCodes) {
  fs::path dir = scratch("cli");
  const std::string corpus = corpus_file(dir, 20);
  const std::string out = (dir / "out").string();
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("train --bogus"), 1);
  EXPECT_EQ(run("gen-synthetic --n 10 --fraction 2 --out " + (dir / "g.txt").string()), 1);
  EXPECT_EQ(run("normalize --corpus " + (dir / "absent.txt").string() + " --out " + out), 2);
  EXPECT_EQ(run("pipeline --corpus " + corpus + " --epochs 2 --hidden 4 --dim 8 --out-dir " + out),
            0);
  EXPECT_EQ(run("pipeline --corpus " + corpus + " --epochs 3 --hidden 4 --dim 8 --lr 1e300 "
                "--out-dir " + out),
            3);
  EXPECT_EQ(run("stats --corpus " + corpus), 0);
}

TEST(Cli, ExtractMatchesLibrary) {
  fs::path dir = scratch("cli_extract");
  const std::string out = (dir / "g.txt").string();
  ASSERT_EQ(run("extract --src " + fixtures + "/extract/src --out " + out +
                " --label copy.c=1 --label net/recv.c=1"),
            0);
  EXPECT_EQ(io::read_file(out), io::read_file(fixtures + "/extract/expected.txt"));
}
