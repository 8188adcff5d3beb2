#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bitext/bitext.hpp"
#include "cli_util.hpp"
#include "toy_data.hpp"

using namespace bitext;
using namespace bitext::testing;

namespace {

class Cli : public ::testing::Test {
 protected:
  RunResult run(std::vector<std::string> args) { return run_cli(args, dir); }
  std::string path(std::string_view name) const { return (dir / name).string(); }

  /// 10-pair corpus.tsv with scores.tsv giving pair i the score i/10.
  void write_scored_ten() {
    write_corpus_tsv(dir / "corpus.tsv", synthetic_corpus({{Origin::kEmea, 10}}));
    std::string scores;
    for (int i = 0; i < 10; ++i) scores += std::to_string(i) + "\t" + format_score(i / 10.0) + "\n";
    write_file(dir / "scores.tsv", scores);
  }

  TempDir dir;
};

}  // namespace

TEST_F(Cli, PreprocessMatchesFixture) {
  const auto r = run({"preprocess", "--input-tsv", (kFixtureDir / "preprocess_20.tsv").string(), "--output-dir",
                      path("out")});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(read_file(dir / "out" / "preprocessed.tsv"), read_file(kFixtureDir / "preprocess_20.expected.tsv"));
  const auto stats = read_file(dir / "out" / "preprocess_stats.txt");
  for (const char* line : {"input_pairs: 20\n", "total_pairs: 10\n", "removed.dedup: 2\n",
                           "removed.untranslated: 3\n", "removed.length: 4\n", "removed.charset: 1\n"})
    EXPECT_NE(stats.find(line), std::string::npos) << line;
}

TEST_F(Cli, PreprocessIgnoresCrlf) {
  std::string text = read_file(kFixtureDir / "preprocess_20.tsv");
  std::string crlf;
  for (char c : text) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  write_file(dir / "crlf.tsv", crlf);
  ASSERT_EQ(run({"preprocess", "--input-tsv", path("crlf.tsv"), "--output-dir", path("out")}).exit_code, 0);
  EXPECT_EQ(read_file(dir / "out" / "preprocessed.tsv"), read_file(kFixtureDir / "preprocess_20.expected.tsv"));
}

TEST_F(Cli, PreprocessParallelFiles) {
  write_file(dir / "a.en", "The patient received two doses.\n\nWash your hands often.\n");
  write_file(dir / "a.pl", "Pacjent otrzymał dwie dawki.\nPuste po lewej.\nMyj często ręce.\n");
  const auto r = run({"preprocess", "--input-pair", "ecdc," + path("a.en") + "," + path("a.pl"), "--output-dir",
                      path("out")});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Corpus c = read_corpus_tsv(dir / "out" / "preprocessed.tsv");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[1].source, "Wash your hands often.");
  EXPECT_EQ(c[1].origin, Origin::kEcdc);
}

TEST_F(Cli, DataErrorsExitThree) {
  write_file(dir / "empty.tsv", "");
  auto r = run({"preprocess", "--input-tsv", path("empty.tsv"), "--output-dir", path("out")});
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_TRUE(r.err.starts_with("EMPTY_CORPUS: ")) << r.err;

  write_file(dir / "bad.tsv", "ok source text\t\xff\xfe broken\tECDC\n");
  r = run({"preprocess", "--input-tsv", path("bad.tsv"), "--output-dir", path("out")});
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_TRUE(r.err.starts_with("INVALID_ENCODING: ")) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  auto r = run({"filter", "--no-such-flag"});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_TRUE(r.err.starts_with("USAGE: ")) << r.err;
  r = run({"sample", "--set", "bogus=1"});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_TRUE(r.err.starts_with("INVALID_ARGUMENT: ")) << r.err;
  EXPECT_EQ(run({}).exit_code, 2);
}

TEST_F(Cli, ScoreMuseToy) {
  write_toy_tables(dir.path());
  write_toy_corpus(dir / "toy.tsv");
  ASSERT_EQ(run({"preprocess", "--input-tsv", path("toy.tsv"), "--output-dir", path("out")}).exit_code, 0);
  const std::vector<std::string> args = {"score", "--corpus", path("out/preprocessed.tsv"), "--source-emb",
                                         path("en.vec"), "--target-emb", path("pl.vec"), "--output-dir",
                                         path("out")};
  const auto r = run(args);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto entries = read_score_tsv(dir / "out" / "scores_muse.tsv");
  const auto toy = medical_toy_pairs();
  ASSERT_EQ(entries.size(), toy.size());
  for (std::size_t i = 0; i < toy.size(); ++i) {
    EXPECT_EQ(entries[i].id, i);
    EXPECT_NEAR(entries[i].score, toy[i].expected_score, 1e-6) << "pair " << i;
  }
  EXPECT_EQ(read_file(dir / "out" / "uncovered_muse.txt"), "");

  const auto first = read_file(dir / "out" / "scores_muse.tsv");
  auto again = args;
  again.insert(again.end(), {"--threads", "4"});
  ASSERT_EQ(run(again).exit_code, 0);
  EXPECT_EQ(read_file(dir / "out" / "scores_muse.tsv"), first);
}

TEST_F(Cli, ScorePrecomputed) {
  write_corpus_tsv(dir / "corpus.tsv", synthetic_corpus({{Origin::kSubtitles, 4}}));
  EmbeddingSet src(2), tgt(2);
  for (PairId id : {0, 1, 3}) {
    src.add(id, std::vector<float>{1, static_cast<float>(id)});
    tgt.add(id, std::vector<float>{static_cast<float>(id), 1});
  }
  write_embedding_file(dir / "src.embf", src);
  write_embedding_file(dir / "tgt.embf", tgt);
  std::vector<std::string> args = {"score", "--corpus", path("corpus.tsv"), "--method", "precomputed",
                                   "--method-tag", "LASER", "--source-emb", path("src.embf"), "--target-emb",
                                   path("tgt.embf"), "--output-dir", path("out")};
  auto r = run(args);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_TRUE(r.err.starts_with("MISSING_EMBEDDINGS: ")) << r.err;

  args.push_back("--permissive");
  r = run(args);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(read_file(dir / "out" / "scores_laser.tsv"), "0\t0.000000\n1\t1.000000\n3\t0.600000\n");
  EXPECT_EQ(read_file(dir / "out" / "uncovered_laser.txt"), "2\n");

  args[8] = path("absent.embf");
  r = run(args);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_TRUE(r.err.starts_with("MISSING_EMBEDDINGS: ")) << r.err;
}

TEST_F(Cli, FilterFractions) {
  write_scored_ten();
  const auto r = run({"filter", "--corpus", path("corpus.tsv"), "--scores", path("scores.tsv"), "--method-tag",
                      "labse", "--fractions", "0.2,0.6,1", "--output-dir", path("out")});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(ids_of(read_corpus_tsv(dir / "out" / "filtered_labse_20.tsv")), (std::vector<PairId>{8, 9}));
  EXPECT_EQ(ids_of(read_corpus_tsv(dir / "out" / "filtered_labse_60.tsv")),
            (std::vector<PairId>{4, 5, 6, 7, 8, 9}));
  EXPECT_EQ(read_file(dir / "out" / "filtered_labse_100.tsv"), read_file(dir / "corpus.tsv"));

  const auto bad = run({"filter", "--corpus", path("corpus.tsv"), "--scores", path("scores.tsv"), "--fractions",
                        "0", "--output-dir", path("out")});
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_TRUE(bad.err.starts_with("INVALID_ARGUMENT: ")) << bad.err;
}

TEST_F(Cli, SampleSeeds) {
  write_corpus_tsv(dir / "corpus.tsv", synthetic_corpus({{Origin::kEmea, 10}}));
  const std::vector<std::string> args = {"sample", "--corpus", path("corpus.tsv"), "--fractions", "0.2,0.6",
                                         "--seeds", "1,2,3", "--output-dir", path("out")};
  ASSERT_EQ(run(args).exit_code, 0);
  EXPECT_EQ(ids_of(read_corpus_tsv(dir / "out" / "random_60_seed1.tsv")), (std::vector<PairId>{1, 2, 3, 4, 8, 9}));
  EXPECT_EQ(ids_of(read_corpus_tsv(dir / "out" / "random_60_seed2.tsv")), (std::vector<PairId>{2, 3, 4, 6, 8, 9}));
  EXPECT_EQ(ids_of(read_corpus_tsv(dir / "out" / "random_60_seed3.tsv")), (std::vector<PairId>{2, 4, 5, 6, 7, 8}));
  EXPECT_EQ(read_corpus_tsv(dir / "out" / "random_20_seed1.tsv").size(), 2u);
}

TEST_F(Cli, SplitPartitions) {
  const Corpus c = synthetic_corpus({{Origin::kEcdc, 100}, {Origin::kEmea, 200}, {Origin::kSubtitles, 700}});
  write_corpus_tsv(dir / "corpus.tsv", c);
  ASSERT_EQ(run({"split", "--corpus", path("corpus.tsv"), "--seed", "17", "--output-dir", path("out")}).exit_code, 0);
  const Corpus train = read_corpus_tsv(dir / "out" / "train.tsv");
  const Corpus valid = read_corpus_tsv(dir / "out" / "valid.tsv");
  EXPECT_EQ(train.size(), 800u);
  auto ids = ids_of(train);
  const auto v = ids_of(valid);
  ids.insert(ids.end(), v.begin(), v.end());
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(ids, ids_of(c));
}

TEST_F(Cli, BleuLine) {
  const auto r = run({"bleu", "--hyp", (kFixtureDir / "bleu" / "zero_4gram.hyp").string(), "--ref",
                      (kFixtureDir / "bleu" / "zero_4gram.ref").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, "BLEU = 25.556 100.0/44.4/28.6/10.0 (BP = 0.761, hyp_len = 11, ref_len = 14)\n");
}

TEST_F(Cli, CorrelateJoinsOnIds) {
  write_file(dir / "a.tsv", "0\t0.100000\n1\t0.200000\n2\t0.300000\n5\t0.900000\n");
  write_file(dir / "b.tsv", "2\t0.400000\n1\t0.200000\n0\t0.100000\n7\t-0.500000\n");
  const auto r = run({"correlate", "--scores-a", path("a.tsv"), "--scores-b", path("b.tsv"), "--method-a", "LASER",
                      "--method-b", "LABSE"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, "r = 0.981981 (n = 3, LASER vs LABSE)\n");
}

TEST_F(Cli, ReportSummarizesArtifacts) {
  write_scored_ten();
  ASSERT_EQ(run({"preprocess", "--input-tsv", (kFixtureDir / "preprocess_20.tsv").string(), "--output-dir",
                 path("out")}).exit_code, 0);
  std::filesystem::copy(dir / "scores.tsv", dir / "out" / "scores_muse.tsv");
  ASSERT_EQ(run({"sample", "--corpus", path("out/preprocessed.tsv"), "--fractions", "0.2", "--seeds", "4",
                 "--output-dir", path("out")}).exit_code, 0);
  const auto r = run({"report", "--output-dir", path("out"), "--bins", "4"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto report = read_file(dir / "out" / "report.txt");
  EXPECT_EQ(report, r.out);
  EXPECT_NE(report.find("preprocessed\t10\t1.0000\n"), std::string::npos) << report;
  EXPECT_NE(report.find("random_20_seed4\t2\t0.2000\n"), std::string::npos) << report;
  EXPECT_NE(report.find("# scores_muse (10 scored)\n"), std::string::npos) << report;
  EXPECT_NE(report.find("0.500\t1.000\t5\n"), std::string::npos) << report;
}

TEST_F(Cli, ConfigFileWithOverrides) {
  write_corpus_tsv(dir / "corpus.tsv", synthetic_corpus({{Origin::kEmea, 10}}));
  write_file(dir / "run.cfg", "corpus=" + path("corpus.tsv") + "\nfractions=0.6\nseeds=1,2\noutput_dir=" +
                                  path("cfg_out") + "\n");
  ASSERT_EQ(run({"sample", "--config", path("run.cfg"), "--set", "seeds=3"}).exit_code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "cfg_out" / "random_60_seed3.tsv"));
  EXPECT_FALSE(std::filesystem::exists(dir / "cfg_out" / "random_60_seed1.tsv"));
  EXPECT_EQ(run({"sample", "--config", path("missing.cfg")}).exit_code, 2);
}
