#include <gtest/gtest.h>

#include "etr/errors.hpp"
#include "etr/similarity.hpp"
#include "test_support.hpp"

namespace etr {
namespace {

using testing::make_ontology;

TEST(PropertyMatcher, LabelScore) {
  // See tests/oracles/label_scores.py.
  EXPECT_NEAR(property_label_score("location", "locatedIn"), 0.5727272727272728, 1e-12);
  EXPECT_EQ(property_label_score("birthDate", "birth_date"), 1.0);
}

TEST(PropertyMatcher, GreedyOneToOne) {
  const Ontology a = make_ontology({"name", "location", "zzz"},
                                   {{"A", {"name", "location", "zzz"}}});
  const Ontology b = make_ontology({"locatedIn", "fullName", "name", "qqq"},
                                   {{"B", {"locatedIn", "fullName", "name", "qqq"}}});
  const FcaContext fa = build_context(a, Level::kSchema);
  const FcaContext fb = build_context(b, Level::kSchema);
  const PropertyAlignment pm = match_properties(fa, fb, 0.5);
  ASSERT_EQ(pm.pairs.size(), 2u);
  EXPECT_EQ(pm.pairs[0].a, "location");
  EXPECT_EQ(pm.pairs[0].b, "locatedIn");
  EXPECT_EQ(pm.pairs[1].a, "name");
  EXPECT_EQ(pm.pairs[1].b, "name");
  EXPECT_TRUE(match_properties(fa, fb, 1.01).pairs.empty());
}

TEST(Similarity, SingleAlignedTerm) {
  // Each side has two properties; one aligned pair with HS = 1 on both.
  const Ontology a = make_ontology({"p", "x"}, {{"A", {"p", "x"}}});
  const Ontology b = make_ontology({"q", "y"}, {{"B", {"q", "y"}}});
  const FcaContext fa = build_context(a, Level::kSchema);
  const FcaContext fb = build_context(b, Level::kSchema);
  const PropertyAlignment pm{{{"p", "q", 1.0}}};
  EXPECT_DOUBLE_EQ(compute_similarity(fa, fb, "A", "B", pm, SpecificityKind::kHorizontal), 0.5);
  EXPECT_EQ(compute_similarity(fa, fb, "A", "B", {}, SpecificityKind::kHorizontal), 0.0);
}

TEST(Similarity, UnalignedSidesAreSkipped) {
  const Ontology a = make_ontology({"p", "x"}, {{"A", {"p"}}, {"A2", {"x"}}});
  const Ontology b = make_ontology({"q"}, {{"B", {"q"}}});
  const FcaContext fa = build_context(a, Level::kSchema);
  const FcaContext fb = build_context(b, Level::kSchema);
  const PropertyAlignment pm{{{"p", "q", 1.0}}};
  const SimilarityCalculator calc(fa, fb, pm, {});
  EXPECT_TRUE(calc.shares_aligned_property(fa.object_index("A"), 0));
  EXPECT_FALSE(calc.shares_aligned_property(fa.object_index("A2"), 0));
  EXPECT_EQ(calc.similarity("A2", "B", SpecificityKind::kVertical), 0.0);
}

TEST(Similarity, ErrorsArePerPair) {
  const Ontology a = make_ontology({"p"}, {{"A", {"p"}}, {"Bare", {}}});
  const Ontology b = make_ontology({"q"}, {{"B", {"q"}}});
  const FcaContext fa = build_context(a, Level::kSchema);
  const FcaContext fb = build_context(b, Level::kSchema);
  const PropertyAlignment pm{{{"p", "q", 1.0}}};
  EXPECT_THROW(compute_similarity(fa, fb, "Bare", "B", pm, SpecificityKind::kHorizontal),
               EmptyPropertySet);
  EXPECT_THROW(compute_similarity(fa, fb, "Nope", "B", pm, SpecificityKind::kHorizontal),
               UnknownId);
  try {
    compute_similarity_list(fa, fb, {{"A", "B"}, {"Bare", "B"}}, pm,
                            SpecificityKind::kHorizontal);
    FAIL() << "expected PairError";
  } catch (const PairError& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(Similarity, MatchesBruteForceOnRandomOntologies) {
  Rng rng(17);
  const SpecificityKind kinds[] = {SpecificityKind::kHorizontal,
                                   SpecificityKind::kVertical,
                                   SpecificityKind::kInformational};
  for (int trial = 0; trial < 100; ++trial) {
    const Ontology a = testing::random_ontology(rng, "a");
    const Ontology b = testing::random_ontology(rng, "b");
    const PropertyAlignment pm = testing::random_alignment(rng, a, b);
    const FcaContext fa = build_context(a, Level::kSchema);
    const FcaContext fb = build_context(b, Level::kSchema);
    const testing::ReferenceSpecificity ra(a, 0.5);
    const testing::ReferenceSpecificity rb(b, 0.5);
    std::vector<ObjectPair> pairs;
    for (const auto& x : fa.object_ids()) {
      for (const auto& y : fb.object_ids()) pairs.emplace_back(x, y);
    }
    for (auto kind : kinds) {
      const auto got = compute_similarity_list(fa, fb, pairs, pm, kind);
      ASSERT_EQ(got.size(), pairs.size());
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double want = testing::reference_similarity(ra, rb, pairs[i].first,
                                                          pairs[i].second, pm, kind);
        EXPECT_NEAR(got[i], want, 1e-12);
        EXPECT_LE(std::abs(got[i]), 1.0 + 1e-9);
      }
    }
  }
}

TEST(Similarity, SwappingSidesIsBitIdentical) {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const Ontology a = testing::random_ontology(rng, "a");
    const Ontology b = testing::random_ontology(rng, "b");
    const PropertyAlignment pm = testing::random_alignment(rng, a, b);
    const FcaContext fa = build_context(a, Level::kSchema);
    const FcaContext fb = build_context(b, Level::kSchema);
    const SimilarityCalculator fwd(fa, fb, pm, {});
    const SimilarityCalculator back(fb, fa, pm.reversed(), {});
    for (std::size_t i = 0; i < fa.object_count(); ++i) {
      for (std::size_t j = 0; j < fb.object_count(); ++j) {
        for (auto kind : {SpecificityKind::kHorizontal, SpecificityKind::kVertical,
                          SpecificityKind::kInformational}) {
          EXPECT_EQ(fwd.similarity(i, j, kind), back.similarity(j, i, kind));
        }
      }
    }
  }
}

TEST(Normalize, MinMax) {
  EXPECT_EQ(normalize({0, 5, 10}, NormalizationMethod::kMinMax),
            (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(normalize({3, 3, 3}, NormalizationMethod::kMinMax),
            (std::vector<double>{0.5, 0.5, 0.5}));
  const auto v = normalize({1, 2, 4}, NormalizationMethod::kMinMax);
  EXPECT_EQ(v[0], 0.0);
  EXPECT_NEAR(v[1], 1.0 / 3.0, 1e-12);
  EXPECT_EQ(v[2], 1.0);
  EXPECT_TRUE(normalize({}, NormalizationMethod::kMinMax).empty());
}

TEST(Normalize, ZScoreThenMinMaxHasSameRankAndRange) {
  const auto v = normalize({1, 2, 4}, NormalizationMethod::kZScoreThenMinMax);
  EXPECT_NEAR(v[0], 0.0, 1e-12);
  EXPECT_NEAR(v[1], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(v[2], 1.0, 1e-12);
  EXPECT_EQ(parse_normalization("zscore"), NormalizationMethod::kZScoreThenMinMax);
  EXPECT_THROW(parse_normalization("bogus"), ConfigError);
}

}  // namespace
}  // namespace etr
