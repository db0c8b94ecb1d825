#include <gtest/gtest.h>

#include <sstream>

#include "etr/errors.hpp"
#include "etr/fca_context.hpp"
#include "test_support.hpp"

namespace etr {
namespace {

using testing::make_ontology;

Ontology person_place() {
  return make_ontology({"name", "location"},
                       {{"Person", {"name"}}, {"Place", {"name", "location"}}});
}

TEST(FcaContext, SchemaMatrixInLexicographicOrder) {
  const FcaContext ctx = build_context(person_place(), Level::kSchema);
  EXPECT_EQ(ctx.object_ids(), (std::vector<std::string>{"Person", "Place"}));
  EXPECT_EQ(ctx.property_ids(), (std::vector<std::string>{"location", "name"}));
  EXPECT_FALSE(ctx.has(0, 0));
  EXPECT_TRUE(ctx.has(0, 1));
  EXPECT_TRUE(ctx.has(1, 0));
  EXPECT_TRUE(ctx.has(1, 1));
}

TEST(FcaContext, SingleCell) {
  const FcaContext ctx =
      build_context(make_ontology({"p"}, {{"A", {"p"}}}), Level::kSchema);
  EXPECT_EQ(ctx.object_count(), 1u);
  EXPECT_EQ(ctx.property_count(), 1u);
  EXPECT_TRUE(ctx.has(0, 0));
}

TEST(FcaContext, InstanceLevelWithoutPropertiesIsEmpty) {
  const Ontology o = make_ontology({"p"}, {{"A", {"p"}}}, {{"x", {"A"}}, {"y", {}}});
  EXPECT_THROW(build_context(o, Level::kInstance), EmptyContext);
}

TEST(FcaContext, ExtentsAndPartitions) {
  const FcaContext ctx = build_context(
      make_ontology({"name", "location", "unused"},
                    {{"Person", {"name"}}, {"Place", {"name", "location"}}}),
      Level::kSchema);
  EXPECT_EQ(extent(ctx, "name").object_ids,
            (std::vector<std::string>{"Person", "Place"}));
  EXPECT_TRUE(extent(ctx, "unused").object_ids.empty());
  const auto [plus, minus] = partition_by(ctx, "location");
  EXPECT_EQ(plus.object_ids, std::vector<std::string>{"Place"});
  EXPECT_EQ(minus.object_ids, std::vector<std::string>{"Person"});
  const auto [all, none] = partition_by(ctx, "name");
  EXPECT_EQ(all.size(), 2u);
  EXPECT_EQ(none.size(), 0u);
  const auto [nobody, everyone] = partition_by(ctx, "unused");
  EXPECT_EQ(nobody.size(), 0u);
  EXPECT_EQ(everyone.size(), 2u);
  EXPECT_THROW(extent(ctx, "missing"), UnknownId);
}

TEST(FcaContext, InstanceMetadata) {
  const Ontology o = make_ontology(
      {"p", "q"}, {{"Person", {"p"}}, {"Athlete", {"q"}, {"Person"}}},
      {{"a", {"Athlete"}, {"p"}}, {"b", {"Person", "Athlete"}, {"q"}}, {"c", {}, {"p", "q"}}});
  const FcaContext ctx = build_context(o, Level::kInstance);
  EXPECT_EQ(ctx.object_layer(ctx.object_index("a")), 2);
  EXPECT_EQ(ctx.object_layer(ctx.object_index("b")), 1);
  // Untyped entities sit at the deepest layer.
  EXPECT_EQ(ctx.object_layer(ctx.object_index("c")), ctx.layer_normalizer());
  EXPECT_EQ(ctx.population(0), 1u);
  EXPECT_NE(ctx.population_class(ctx.object_index("a")),
            ctx.population_class(ctx.object_index("b")));
}

TEST(FcaContext, SchemaPopulationIsInstanceCount) {
  const Ontology o = make_ontology({"p"}, {{"A", {"p"}}, {"B", {"p"}}},
                                   {{"x", {"A"}}, {"y", {"A"}}, {"z", {"A", "B"}}});
  const FcaContext ctx = build_context(o, Level::kSchema);
  EXPECT_EQ(ctx.population(ctx.object_index("A")), 3u);
  EXPECT_EQ(ctx.population(ctx.object_index("B")), 1u);
}

TEST(FcaContext, RandomInvariants) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Ontology o = testing::random_ontology(rng, "o");
    const FcaContext ctx = build_context(o, Level::kSchema);
    const FcaContext again = build_context(o, Level::kSchema);
    EXPECT_EQ(ctx.incidence(), again.incidence());
    EXPECT_EQ(ctx.object_ids(), again.object_ids());
    for (std::size_t i = 0; i < ctx.object_count(); ++i) {
      const auto props = o.props_of(ctx.object_ids()[i], Level::kSchema);
      for (std::size_t j = 0; j < ctx.property_count(); ++j) {
        const bool expected = std::binary_search(props.begin(), props.end(),
                                                 ctx.property_ids()[j]);
        EXPECT_EQ(ctx.has(i, j), expected);
      }
    }
    for (const auto& pid : ctx.property_ids()) {
      const auto ext = extent(ctx, pid);
      EXPECT_EQ(ext.size(), ctx.incidence().column_count(ctx.property_index(pid)));
      const auto [plus, minus] = partition_by(ctx, pid);
      std::vector<std::string> merged = plus.object_ids;
      merged.insert(merged.end(), minus.object_ids.begin(), minus.object_ids.end());
      std::sort(merged.begin(), merged.end());
      EXPECT_EQ(merged, ctx.object_ids());
      EXPECT_EQ(plus.size() + minus.size(), ctx.object_count());
    }
  }
}

TEST(FcaContext, DumpFormat) {
  const FcaContext ctx = build_context(person_place(), Level::kSchema);
  std::ostringstream out;
  dump_context(ctx, out);
  EXPECT_EQ(out.str(),
            "# etr-context format_version=1 level=schema\n"
            "object\tlocation\tname\n"
            "Person\t0\t1\n"
            "Place\t1\t1\n");
}

}  // namespace
}  // namespace etr
