#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "signgram/cli.hpp"
#include "signgram/service.hpp"
#include "signgram/stats.hpp"
#include "test_support.hpp"

using namespace signgram;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "signgram");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("signgram_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& content) {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }

  std::string sample_corpus(std::size_t tokens = 4000) {
    Rng rng(1);
    Corpus c = testing_support::sparse_chain(8, 0.2).sample_corpus(rng, tokens, 14);
    c.label = "chain";
    return write("chain.txt", serialize_corpus_string(c));
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"stats", path("missing.txt")}).code, cli::kExitUsage);
  const auto corpus = write("bad.txt", "#! vocab=3\n1 2 9\n");
  const auto r = run_cli({"stats", corpus});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_EQ(run_cli({"stats", sample_corpus(), "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"train", sample_corpus(), "-o", path("m.json"), "--smoothing", "nope"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, StatsZipfMatchesLibraryFit) {
  // Integer counts following a Zipf-Mandelbrot curve.
  std::ostringstream corpus;
  corpus << "#! vocab=60\n";
  std::vector<RankPoint> points;
  for (int r = 1; r <= 60; ++r) {
    const int f = static_cast<int>(std::lround(std::exp(8.0 - 1.3 * std::log(r + 3.0))));
    points.push_back({static_cast<double>(r), static_cast<double>(f)});
    for (int i = 0; i < f; ++i) corpus << r << '\n';
  }
  const auto file = write("zipf.txt", corpus.str());
  const auto r = run_cli({"stats", file, "--zipf"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, values;
  std::getline(lines, header);
  std::getline(lines, values);
  EXPECT_EQ(header, "a\tb\tc\tresidual\tdegenerate");
  double a, b, c;
  std::istringstream(values) >> a >> b >> c;
  const auto fit = fit_zipf_mandelbrot(points);
  EXPECT_EQ(a, fit.a);
  EXPECT_EQ(b, fit.b);
  EXPECT_EQ(c, fit.c);
}

TEST_F(CliTest, StatsSections) {
  const auto corpus = write("c.txt", "#! vocab=5\n1 2 3\n1 2\n4 2 3\n5\n");
  auto r = run_cli({"stats", corpus});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "rank\tsign\tfrequency");
  EXPECT_NE(r.out.find("1\t2\t3\n"), std::string::npos);
  r = run_cli({"stats", corpus, "--coverage", "0.8", "--positional", "--lengths"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("set\tsigns\tdistinct\tcoverage"), std::string::npos);
  EXPECT_NE(r.out.find("sign\ttotal\tbeginner\tender"), std::string::npos);
  EXPECT_NE(r.out.find("length\ttexts\n1\t1\n2\t1\n3\t2\n"), std::string::npos);
}

TEST_F(CliTest, CleanLeavesInputUntouched) {
  const std::string raw = "#! vocab=5\n1 2\n1 ? 3\n1 2\n4 | lines=2\n";
  const auto in = write("raw.txt", raw);
  const auto r = run_cli({"clean", in, "-o", path("clean.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(in), raw);
  EXPECT_EQ(slurp(path("clean.txt")), "#! vocab=5 label=EBUDS\n1 2\n");
  EXPECT_NE(r.err.find("4\t1\t1\t1\t1"), std::string::npos);
}

TEST_F(CliTest, TrainScoreGenerateMatrix) {
  const auto corpus = sample_corpus();
  ASSERT_EQ(run_cli({"train", corpus, "-o", path("m.json")}).code, 0);
  const auto model = load_model_file(path("m.json"));
  EXPECT_EQ(model.label(), "chain");

  const auto texts = write("t.txt", "#! vocab=8\n1 2 3\n4 5 | id=x\n");
  const auto r = run_cli({"score", path("m.json"), texts});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "index\tid\tlength\tlog2_prob");
  std::getline(lines, line);
  const double lp = std::stod(line.substr(line.rfind('\t') + 1));
  EXPECT_EQ(lp, sequence_log_prob(model, make_text({1, 2, 3})));
  std::getline(lines, line);
  EXPECT_EQ(line.substr(0, 4), "1\tx\t");

  const auto g1 = run_cli({"generate", path("m.json"), "--seed", "5", "-n", "10"});
  const auto g2 = run_cli({"generate", path("m.json"), "--seed", "5", "-n", "10"});
  ASSERT_EQ(g1.code, 0);
  EXPECT_EQ(g1.out, g2.out);
  EXPECT_EQ(run_cli({"generate", path("m.json")}).code, cli::kExitUsage);  // seed is required

  const auto m = run_cli({"matrix", path("m.json")});
  ASSERT_EQ(m.code, 0);
  EXPECT_EQ(std::count(m.out.begin(), m.out.end(), '\n'), 10);
  EXPECT_EQ(run_cli({"matrix", path("m.json"), "--reference"}).code, 0);
}

TEST_F(CliTest, RestoreTableAndJson) {
  const auto corpus = sample_corpus();
  ASSERT_EQ(run_cli({"train", corpus, "-o", path("m.json")}).code, 0);
  auto r = run_cli({"restore", path("m.json"), "--text", "1 ? 3", "--top", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "text\trank\tfilling\tlog2_prob\tprobability");

  const auto gapped = write("g.txt", "#! vocab=8\n1 ? 3\n? ? 5 ?\n");
  r = run_cli({"restore", path("m.json"), gapped, "--json", "--top", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  RestorationService svc(load_model_file(path("m.json")));
  const std::string expected = svc.restore(R"({"text":[1,"?",3],"top_k":4})").body.dump() + "\n" +
                               svc.restore(R"({"text":["?","?",5,"?"],"top_k":4})").body.dump() + "\n";
  EXPECT_EQ(r.out, expected);

  EXPECT_EQ(run_cli({"restore", path("m.json"), "--text", "1 2"}).code, cli::kExitData);
  EXPECT_EQ(run_cli({"restore", path("m.json")}).code, cli::kExitUsage);
}

TEST_F(CliTest, ArgmaxEntropySignificantPerplexity) {
  const auto corpus = sample_corpus();
  ASSERT_EQ(run_cli({"train", corpus, "-o", path("m.json")}).code, 0);
  auto r = run_cli({"argmax-text", path("m.json"), "--length", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "length\tlog2_prob\ttext");

  r = run_cli({"entropy", corpus});
  ASSERT_EQ(r.code, 0);
  r = run_cli({"entropy", corpus, "--include-boundaries"});
  ASSERT_EQ(r.code, 0);

  r = run_cli({"significant", corpus, "--top", "5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);

  r = run_cli({"perplexity", corpus, "--holdout", "0.2", "--seed", "3", "--orders", "1..3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
  EXPECT_EQ(run_cli({"perplexity", corpus}).code, cli::kExitUsage);  // holdout split needs a seed
  EXPECT_EQ(run_cli({"perplexity", corpus, "--seed", "1", "--orders", "0..9"}).code, cli::kExitUsage);
  r = run_cli({"perplexity", "--train", corpus, "--test", corpus, "--orders", "2", "--exclude-end"});
  ASSERT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, CrossvalIsByteIdenticalUnderSeed) {
  const auto corpus = sample_corpus();
  const auto a = run_cli({"crossval", corpus, "--seed", "7", "--trials", "5", "--trials-out", path("a.tsv")});
  const auto b = run_cli({"crossval", corpus, "--seed", "7", "--trials", "5", "--threads", "2", "--trials-out",
                          path("b.tsv")});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(slurp(path("a.tsv")), slurp(path("b.tsv")));
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 8);
  EXPECT_EQ(run_cli({"crossval", corpus}).code, cli::kExitUsage);  // seed is required
}
