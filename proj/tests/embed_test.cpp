#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bitext/embed.hpp"
#include "test_util.hpp"

using namespace bitext;
using bitext::testing::TempDir;
using bitext::testing::write_file;

using Tokens = std::vector<std::string>;

TEST(Tokenize, SplitsPunctuationAndFoldsCase) {
  EXPECT_EQ(tokenize("Hello, world!"), (Tokens{"hello", ",", "world", "!"}));
  EXPECT_EQ(tokenize(""), Tokens{});
  EXPECT_EQ(tokenize("obrzęk mózgu"), (Tokens{"obrzęk", "mózgu"}));
}

TEST(Tokenize, EdgeForms) {
  EXPECT_EQ(tokenize("  \t "), Tokens{});
  EXPECT_EQ(tokenize("(Zażółć)."), (Tokens{"(", "zażółć", ")", "."}));
  EXPECT_EQ(tokenize("..."), (Tokens{".", ".", "."}));
  EXPECT_EQ(tokenize("don't STRASSE"), (Tokens{"don't", "strasse"}));
  EXPECT_EQ(tokenize("ÓSMY dzień"), (Tokens{"ósmy", "dzień"}));
}

class WordTable : public ::testing::Test {
 protected:
  TempDir dir;
};

TEST_F(WordTable, LoadsHeaderAndRows) {
  write_file(dir / "t.vec", "2 3\nred 1 0 0.5 \nblue -1e-1 2 3\r\n");
  const auto load = load_word_table(dir / "t.vec", "en");
  EXPECT_EQ(load.table.size(), 2u);
  EXPECT_EQ(load.table.dim(), 3u);
  EXPECT_EQ(load.table.language(), "en");
  const auto blue = load.table.find("blue");
  ASSERT_TRUE(blue);
  EXPECT_FLOAT_EQ((*blue)[0], -0.1f);
  EXPECT_FALSE(load.table.find("green"));
}

TEST_F(WordTable, DimensionMismatchNamesLine) {
  write_file(dir / "t.vec", "2 4\na 1 2 3 4\nb 1 2 3\n");
  try {
    load_word_table(dir / "t.vec");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST_F(WordTable, DuplicateKeepsFirst) {
  write_file(dir / "t.vec", "3 2\nx 1 2\ny 3 4\nx 5 6\n");
  const auto load = load_word_table(dir / "t.vec");
  EXPECT_EQ(load.duplicates, 1u);
  EXPECT_EQ(load.table.size(), 2u);
  EXPECT_FLOAT_EQ((*load.table.find("x"))[0], 1.0f);
}

TEST_F(WordTable, MalformedInputs) {
  auto code = [&](std::string_view content) {
    write_file(dir / "bad.vec", content);
    try {
      load_word_table(dir / "bad.vec");
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code(""), ErrorCode::kMalformedHeader);
  EXPECT_EQ(code("10\n"), ErrorCode::kMalformedHeader);
  EXPECT_EQ(code("2 zero\n"), ErrorCode::kMalformedHeader);
  EXPECT_EQ(code("1 0\n"), ErrorCode::kMalformedHeader);
  EXPECT_EQ(code("1 2\nw 1 abc\n"), ErrorCode::kInvalidNumber);
  EXPECT_EQ(code("1 2\nw 1 nan\n"), ErrorCode::kInvalidNumber);
}

namespace {

WordEmbeddingTable table_2d() {
  WordEmbeddingTable t(2);
  t.add("x", std::vector<float>{1, 0});
  t.add("y", std::vector<float>{0, 1});
  t.add("z", std::vector<float>{0.3f, -2.5f});
  return t;
}

}  // namespace

TEST(MeanPooling, Examples) {
  const auto t = table_2d();
  const auto one = embed_sentence_mean(Tokens{"x"}, t);
  ASSERT_TRUE(one);
  EXPECT_EQ(*one, EmbeddingVector({1, 0}));
  const auto two = embed_sentence_mean(Tokens{"x", "oov", "y"}, t);
  ASSERT_TRUE(two);
  EXPECT_EQ(*two, EmbeddingVector({0.5f, 0.5f}));
  EXPECT_FALSE(embed_sentence_mean(Tokens{"a", "b"}, t));
  EXPECT_FALSE(embed_sentence_mean(Tokens{}, t));
}

TEST(MeanPooling, PermutationInvariant) {
  std::mt19937_64 rng(5);
  WordEmbeddingTable t(7);
  std::normal_distribution<float> normal;
  for (int w = 0; w < 30; ++w) {
    std::vector<float> v(7);
    for (auto& c : v) c = normal(rng);
    t.add("w" + std::to_string(w), v);
  }
  for (int trial = 0; trial < 100; ++trial) {
    Tokens tokens;
    for (int k = 0; k < 12; ++k) tokens.push_back("w" + std::to_string(rng() % 35));
    const auto base = embed_sentence_mean(tokens, t);
    std::shuffle(tokens.begin(), tokens.end(), rng);
    EXPECT_EQ(embed_sentence_mean(tokens, t), base);
  }
}

TEST(Cosine, Examples) {
  EXPECT_DOUBLE_EQ(cosine_similarity(EmbeddingVector({1, 0}), EmbeddingVector({1, 0})), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(EmbeddingVector({1, 0}), EmbeddingVector({0, 1})), 0.0);
  // dot 32, norms sqrt(14) and sqrt(77)
  EXPECT_NEAR(cosine_similarity(EmbeddingVector({1, 2, 3}), EmbeddingVector({4, 5, 6})), 0.974632, 1e-6);
  EXPECT_NEAR(cosine_similarity(EmbeddingVector({1, 2, 3}), EmbeddingVector({4, 5, 6})),
              32.0 / std::sqrt(14.0 * 77.0), 1e-12);
}

TEST(Cosine, Errors) {
  try {
    cosine_similarity(EmbeddingVector({1, 0}), EmbeddingVector({1, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  try {
    cosine_similarity(EmbeddingVector({0, 0}), EmbeddingVector({1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroVector);
  }
}

TEST(Cosine, ClampsRoundingOvershoot) {
  const EmbeddingVector v({0.1f, 0.7f, 0.3f, 1e-3f, 123.4f});
  const double c = cosine_similarity(v, v);
  EXPECT_LE(c, 1.0);
  EXPECT_NEAR(c, 1.0, 1e-12);
}

TEST(EmbeddingVectorType, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(EmbeddingVector(std::vector<float>{}), Error);
  EXPECT_THROW(EmbeddingVector({1.0f, std::nanf("")}), Error);
  EXPECT_THROW(EmbeddingVector({INFINITY}), Error);
}
