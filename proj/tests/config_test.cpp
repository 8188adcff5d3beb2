#include <gtest/gtest.h>

#include "bitext/config.hpp"
#include "test_util.hpp"

using namespace bitext;
using bitext::testing::TempDir;
using bitext::testing::write_file;

namespace {

ErrorCode set_error(std::string_view assignment) {
  ConfigBuilder b;
  try {
    b.set_assignment(assignment);
    b.build();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIoError;
}

}  // namespace

TEST(Config, Defaults) {
  const auto c = ConfigBuilder().build();
  EXPECT_EQ(c.fractions, (std::vector<double>{0.2, 0.6}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_DOUBLE_EQ(c.train_fraction, 0.8);
  EXPECT_EQ(c.min_chars, 15u);
  EXPECT_EQ(c.max_chars, 200u);
  EXPECT_EQ(c.threads, 1u);
  EXPECT_EQ(c.missing, MissingPolicy::kStrict);
  EXPECT_EQ(c.backend, ScoringBackend::kMuse);
  EXPECT_EQ(c.label(), "muse");
}

TEST(Config, ParsesValues) {
  ConfigBuilder b;
  b.set_assignment("fractions = 0.1, 0.5,1");
  b.set_assignment("seeds=7,8");
  b.set_assignment("method=precomputed");
  b.set_assignment("method_tag=labse");
  b.set_assignment("input_pair=subtitles,a.en,a.pl");
  b.set_assignment("input_pair=ECDC, b.en, b.pl");
  b.set_assignment("threads=4");
  b.set_assignment("missing=permissive");
  const auto c = b.build();
  EXPECT_EQ(c.fractions, (std::vector<double>{0.1, 0.5, 1.0}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{7, 8}));
  EXPECT_EQ(c.backend, ScoringBackend::kPrecomputed);
  EXPECT_EQ(c.label(), "labse");
  ASSERT_EQ(c.inputs.size(), 2u);
  const auto& second = std::get<ParallelInput>(c.inputs[1]);
  EXPECT_EQ(second.origin, Origin::kEcdc);
  EXPECT_EQ(second.source, "b.en");
  EXPECT_EQ(c.threads, 4u);
  EXPECT_EQ(c.missing, MissingPolicy::kPermissive);
}

TEST(Config, RejectsBadValues) {
  EXPECT_EQ(set_error("no_such_key=1"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(set_error("fractions"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(set_error("fractions=0"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(set_error("fractions=0.2,1.5"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(set_error("fractions=abc"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(set_error("train_fraction=1"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(set_error("threads=0"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(set_error("seeds=-1"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(set_error("method=bert"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(set_error("method_tag=bert"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(set_error("input_pair=mars,a,b"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(set_error("input_pair=ecdc,a"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(set_error("min_chars=300"), ErrorCode::kInvalidArgument);
}

TEST(Config, FileThenOverrides) {
  TempDir dir;
  write_file(dir / "run.cfg",
             "# comment\n"
             "fractions=0.3\n"
             "\n"
             "input_tsv=one.tsv\n"
             "input_tsv=two.tsv\n"
             "output_dir=out\n");
  ConfigBuilder b;
  b.load_file(dir / "run.cfg");
  EXPECT_EQ(b.config().inputs.size(), 2u);
  b.set_assignment("input_tsv=three.tsv");
  b.set_assignment("seed=9");
  const auto c = b.build();
  // a list key set in a later layer replaces the earlier list
  ASSERT_EQ(c.inputs.size(), 1u);
  EXPECT_EQ(std::get<TsvInput>(c.inputs[0]).path, "three.tsv");
  EXPECT_EQ(c.fractions, (std::vector<double>{0.3}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{9}));
  EXPECT_EQ(c.output_dir, "out");
}

TEST(Config, FileErrorsNameTheLine) {
  TempDir dir;
  write_file(dir / "bad.cfg", "fractions=0.2\nbins=0\n");
  ConfigBuilder b;
  try {
    b.load_file(dir / "bad.cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(ConfigBuilder().load_file(dir / "missing.cfg"), Error);
}
