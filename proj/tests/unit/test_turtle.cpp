#include <gtest/gtest.h>

#include "etr/errors.hpp"
#include "etr/turtle.hpp"

namespace etr {
namespace {

constexpr const char* kDoc = R"(
@prefix rdf:  <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix owl:  <http://www.w3.org/2002/07/owl#> .
@prefix ex:   <http://example.org/conf#> .

ex:Person a owl:Class ; rdfs:label "Person"@en .
ex:Author a owl:Class ;
    rdfs:subClassOf ex:Person .
ex:name a owl:DatatypeProperty ; rdfs:domain ex:Person .
ex:writes a owl:ObjectProperty ;
    rdfs:domain ex:Author ;
    rdfs:label "writes paper" .
ex:alice a ex:Author ;
    ex:name "Alice" ;
    ex:writes ex:p1 , ex:p2 .
ex:alice ex:nickname "Al" .
)";

TEST(Turtle, ParsesTriplesWithExpandedIris) {
  const TurtleDocument doc = parse_turtle(kDoc);
  EXPECT_EQ(doc.prefixes.size(), 4u);
  // Person: 2, Author: 2, name: 2, writes: 3, alice: 1 + 1 + 2, nickname: 1
  EXPECT_EQ(doc.triples.size(), 14u);
  EXPECT_EQ(doc.triples[0].subject.value, "http://example.org/conf#Person");
  EXPECT_EQ(doc.triples[1].object.kind, RdfTerm::Kind::kLiteral);
  EXPECT_EQ(doc.triples[1].object.value, "Person");
  EXPECT_EQ(compact_iri("http://example.org/conf#Person", doc.prefixes), "ex:Person");
  EXPECT_EQ(compact_iri("urn:other", doc.prefixes), "urn:other");
}

TEST(Turtle, ImportMapsSchemaAndInstances) {
  const TurtleImport imp = import_turtle(kDoc);
  const Ontology& o = imp.ontology;
  ASSERT_TRUE(o.has_etype("ex:Person"));
  ASSERT_TRUE(o.has_etype("ex:Author"));
  EXPECT_EQ(o.layer_of("ex:Author"), 2);
  EXPECT_EQ(o.props_of("ex:Person", Level::kSchema), std::vector<std::string>{"ex:name"});
  EXPECT_EQ(o.props_of("ex:Author", Level::kSchema), std::vector<std::string>{"ex:writes"});
  EXPECT_EQ(o.property("ex:writes").label, "writes paper");
  EXPECT_EQ(o.property("ex:name").label, "name");
  ASSERT_TRUE(o.has_entity("ex:alice"));
  EXPECT_EQ(o.entity("ex:alice").etype_ids, std::vector<std::string>{"ex:Author"});
  EXPECT_EQ(o.props_of("ex:alice", Level::kInstance),
            (std::vector<std::string>{"ex:name", "ex:writes"}));
  // ex:nickname was never declared.
  EXPECT_EQ(imp.report.ignored_predicates, 1u);
  EXPECT_EQ(imp.report.triples, 14u);
}

TEST(Turtle, UndeclaredPredicatesCanBeAccepted) {
  const TurtleImport imp = import_turtle(kDoc, {.accept_undeclared_predicates = true});
  EXPECT_EQ(imp.report.ignored_predicates, 0u);
  EXPECT_EQ(imp.ontology.props_of("ex:alice", Level::kInstance).size(), 3u);
}

TEST(Turtle, LiteralForms) {
  const TurtleDocument doc = parse_turtle(R"(
    @prefix ex: <http://e/> .
    ex:a ex:p """multi
line""" , 'single' , 42 , -1.5e3 , true , "typed"^^ex:T , "esc\"aped" .
  )");
  ASSERT_EQ(doc.triples.size(), 7u);
  EXPECT_EQ(doc.triples[0].object.value, "multi\nline");
  EXPECT_EQ(doc.triples[1].object.value, "single");
  EXPECT_EQ(doc.triples[2].object.value, "42");
  EXPECT_EQ(doc.triples[3].object.value, "-1.5e3");
  EXPECT_EQ(doc.triples[4].object.value, "true");
  EXPECT_EQ(doc.triples[5].object.value, "typed");
  EXPECT_EQ(doc.triples[6].object.value, "esc\"aped");
}

TEST(Turtle, ErrorsCarryPosition) {
  try {
    parse_turtle("@prefix ex: <http://e/> .\nex:a ex:b [ ex:c ex:d ] .\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_turtle("ex:a ex:b ex:c ."), ParseError);  // undeclared prefix
  EXPECT_THROW(parse_turtle("<http://a> <http://b> \"open"), ParseError);
  EXPECT_THROW(parse_turtle("<http://a> <http://b> <http://c>"), ParseError);
}

TEST(Turtle, LoadOntologyDispatchesOnExtension) {
  const Ontology o = parse_ontology_text(kDoc, OntologyFormat::kTurtleSubset);
  EXPECT_TRUE(o.has_etype("ex:Author"));
}

}  // namespace
}  // namespace etr
