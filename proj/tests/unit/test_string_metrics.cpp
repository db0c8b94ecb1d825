#include <gtest/gtest.h>

#include "etr/random.hpp"
#include "etr/string_metrics.hpp"
#include "test_support.hpp"

namespace etr {
namespace {

// Expected values come from tests/oracles/label_scores.py.

TEST(StringMetrics, WorkedExamples) {
  EXPECT_NEAR(ngram_sim("paper", "papers"), 0.6666666666666666, 1e-12);
  EXPECT_NEAR(ngram_sim(normalize_label("ConferencePaper"), normalize_label("Paper")), 0.4, 1e-12);
  EXPECT_NEAR(lcs_sim("chair", "chairman"), 0.7692307692307693, 1e-12);
  EXPECT_NEAR(levenshtein_sim("kitten", "sitting"), 0.5714285714285714, 1e-12);
  EXPECT_EQ(levenshtein_distance("kitten", "sitting"), 3u);
  EXPECT_EQ(lcs_length("chair", "chairman"), 5u);
}

TEST(StringMetrics, EmptyInputs) {
  EXPECT_EQ(ngram_sim("", ""), 1.0);
  EXPECT_EQ(ngram_sim("a", ""), 0.0);
  EXPECT_EQ(levenshtein_sim("", ""), 1.0);
  EXPECT_EQ(lcs_sim("", ""), 1.0);
  EXPECT_EQ(levenshtein_sim("abc", ""), 0.0);
  EXPECT_EQ(lcs_sim("", "abc"), 0.0);
}

TEST(StringMetrics, CaseFoldingAndIdentity) {
  EXPECT_EQ(ngram_sim("Name", "NAME"), 1.0);
  EXPECT_EQ(ngram_sim("x", "x", 1), 1.0);
  EXPECT_EQ(case_fold("HasISBN"), "hasisbn");
}

TEST(StringMetrics, Tokenizer) {
  EXPECT_EQ(tokenize_label("locatedIn"), (std::vector<std::string>{"located", "in"}));
  EXPECT_EQ(tokenize_label("has_ISBN10"), (std::vector<std::string>{"has", "isbn", "10"}));
  EXPECT_EQ(tokenize_label("HTTPServer"), (std::vector<std::string>{"http", "server"}));
  EXPECT_EQ(normalize_label("  birth-date.value "), "birth date value");
  EXPECT_TRUE(tokenize_label("__").empty());
}

TEST(StringMetrics, AgreesWithNaiveDynamicProgramming) {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    // Lengths straddle the 64-byte bit-parallel limit.
    const std::size_t max_len = i % 4 == 0 ? 90 : 20;
    const std::string a = testing::random_string(rng, max_len, "abcd");
    const std::string b = testing::random_string(rng, max_len, "abcd");
    ASSERT_EQ(levenshtein_distance(a, b), testing::naive_levenshtein(a, b)) << a << " / " << b;
    ASSERT_EQ(lcs_length(a, b), testing::naive_lcs(a, b)) << a << " / " << b;
  }
}

TEST(StringMetrics, SymmetricAndBounded) {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const std::string a = testing::random_string(rng, 12, "abcAB _");
    const std::string b = testing::random_string(rng, 12, "abcAB _");
    for (std::size_t n = 1; n <= 4; ++n) {
      const double s = ngram_sim(a, b, n);
      EXPECT_EQ(s, ngram_sim(b, a, n));
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
    }
    EXPECT_EQ(levenshtein_sim(a, b), levenshtein_sim(b, a));
    EXPECT_EQ(lcs_sim(a, b), lcs_sim(b, a));
    EXPECT_GE(levenshtein_sim(a, b), 0.0);
    EXPECT_LE(lcs_sim(a, b), 1.0);
  }
}

}  // namespace
}  // namespace etr
