#include <gtest/gtest.h>

#include <sstream>

#include "etr/errors.hpp"
#include "etr/ontology.hpp"
#include "test_support.hpp"

namespace etr {
namespace {

using testing::make_ontology;

TEST(Ontology, SingleEtypeIsRootAtLayerOne) {
  const Ontology o = make_ontology({"name"}, {{"Person", {"name"}}});
  ASSERT_EQ(o.etypes().size(), 1u);
  EXPECT_EQ(o.layer_of("Person"), 1);
  EXPECT_EQ(o.max_depth(), 1);
}

TEST(Ontology, ChildIsOneLayerBelowParent) {
  const Ontology o = make_ontology(
      {"name"}, {{"Person", {"name"}}, {"Athlete", {"name"}, {"Person"}}});
  EXPECT_EQ(o.layer_of("Person"), 1);
  EXPECT_EQ(o.layer_of("Athlete"), 2);
  EXPECT_EQ(o.roots(), std::vector<std::string>{"Person"});
}

TEST(Ontology, DiamondTakesLongestPath) {
  // R <- B (layer 2); R <- X <- C (layer 3); D under B and C.
  const Ontology o = make_ontology(
      {"p"}, {{"R", {"p"}},
              {"B", {"p"}, {"R"}},
              {"X", {"p"}, {"R"}},
              {"C", {"p"}, {"X"}},
              {"D", {"p"}, {"B", "C"}}});
  EXPECT_EQ(o.layer_of("B"), 2);
  EXPECT_EQ(o.layer_of("C"), 3);
  EXPECT_EQ(o.layer_of("D"), 4);
  EXPECT_EQ(o.max_depth(), 4);
  EXPECT_EQ(o.ancestors("D"), (std::vector<std::string>{"B", "C", "R", "X"}));
}

TEST(Ontology, CycleIsRejected) {
  try {
    make_ontology({"p"}, {{"A", {"p"}, {"B"}}, {"B", {"p"}, {"A"}}});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("cycle"), std::string::npos);
  }
}

TEST(Ontology, RejectsDuplicatesAndDanglingReferences) {
  EXPECT_THROW(make_ontology({"p", "p"}, {{"A", {"p"}}}), ValidationError);
  EXPECT_THROW(make_ontology({"p"}, {{"A", {"p"}}, {"A", {"p"}}}), ValidationError);
  EXPECT_THROW(make_ontology({"p"}, {{"A", {"q"}}}), ValidationError);
  EXPECT_THROW(make_ontology({"p"}, {{"A", {"p"}, {"Z"}}}), ValidationError);
  EXPECT_THROW(make_ontology({"p"}, {{"A", {"p"}, {"A"}}}), ValidationError);
  EXPECT_THROW(make_ontology({"p"}, {{"A", {"p"}}}, {{"i", {"Nope"}}}), ValidationError);
}

TEST(Ontology, UnknownIdLookups) {
  const Ontology o = make_ontology({"p"}, {{"A", {"p"}}});
  EXPECT_THROW(o.etype("B"), UnknownId);
  EXPECT_THROW(o.layer_of("B"), UnknownId);
  EXPECT_THROW(o.props_of("B", Level::kSchema), UnknownId);
}

TEST(Ontology, PropsOfAtBothLevels) {
  const Ontology o = make_ontology(
      {"name", "education", "location"},
      {{"Person", {"name", "education"}}, {"Student", {"location"}, {"Person"}}},
      {{"bob", {"Person"}, {"name"}}, {"ghost", {}}});
  EXPECT_EQ(o.props_of("Person", Level::kSchema),
            (std::vector<std::string>{"education", "name"}));
  EXPECT_TRUE(o.props_of("ghost", Level::kInstance).empty());
  EXPECT_EQ(o.props_of("bob", Level::kInstance), std::vector<std::string>{"name"});
  EXPECT_EQ(o.props_of("Student", Level::kSchema), std::vector<std::string>{"location"});
  EXPECT_EQ(o.props_of("Student", Level::kSchema, {.inherit_properties = true}),
            (std::vector<std::string>{"education", "location", "name"}));
}

TEST(Ontology, InstanceCountsCountAssertions) {
  const Ontology o = make_ontology(
      {"p"}, {{"Person", {"p"}}, {"Athlete", {"p"}, {"Person"}}, {"Empty", {"p"}}},
      {{"a", {"Person"}}, {"b", {"Person"}}, {"c", {"Person", "Athlete"}}, {"d", {"Athlete"}}});
  EXPECT_EQ(o.instance_count("Empty"), 0u);
  EXPECT_EQ(o.instance_count("Person"), 3u);
  EXPECT_EQ(o.instance_count("Athlete"), 2u);
  // Roll-up adds d, whose type is a subclass of Person.
  EXPECT_EQ(o.instance_count("Person", {.rollup_instances = true}), 4u);
}

TEST(Ontology, RandomInvariants) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Ontology o = testing::random_ontology(rng, "x");
    for (const auto& [child, parent] : o.subclass_edges()) {
      EXPECT_GT(o.layer_of(child), o.layer_of(parent));
    }
    std::size_t assertions = 0;
    for (const auto& e : o.entities()) assertions += e.etype_ids.size();
    std::size_t counted = 0;
    for (const auto& e : o.etypes()) counted += o.instance_count(e.id);
    EXPECT_EQ(counted, assertions);
  }
}

TEST(CanonicalFormat, RoundTripRandomOntologies) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Ontology o = testing::random_ontology(rng, "r");
    const std::string text = serialize_canonical(o);
    const Ontology back = parse_ontology_text(text, OntologyFormat::kCanonical);
    EXPECT_EQ(back, o);
    EXPECT_EQ(serialize_canonical(back), text);
  }
}

TEST(CanonicalFormat, ParsesHandWrittenDocument) {
  const char* doc = R"({
    "format_version": 1,
    "id": "demo",
    "properties": [{"id": "name", "label": "name"}, {"id": "location"}],
    "etypes": [
      {"id": "Person", "label": "Person", "properties": ["name"], "parents": []},
      {"id": "Place", "properties": ["name", "location"]}
    ],
    "entities": [{"id": "bob", "types": ["Person"], "properties": ["name"]}]
  })";
  const Ontology o = parse_ontology_text(doc, OntologyFormat::kCanonical);
  EXPECT_EQ(o.id(), "demo");
  EXPECT_EQ(o.etype("Place").label, "Place");
  EXPECT_EQ(o.property("location").label, "location");
  EXPECT_EQ(o.instance_count("Person"), 1u);
}

TEST(CanonicalFormat, Errors) {
  EXPECT_THROW(parse_ontology_text(R"({"format_version": 2, "etypes": []})",
                                   OntologyFormat::kCanonical),
               FormatVersionMismatch);
  try {
    parse_ontology_text("{\n  \"format_version\": 1,\n  \"etypes\": [\n", OntologyFormat::kCanonical);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 3u);
  }
  EXPECT_THROW(load_ontology("/nonexistent/file.json"), IoError);
}

}  // namespace
}  // namespace etr
