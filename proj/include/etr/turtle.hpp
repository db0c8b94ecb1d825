#pragma once
// Turtle subset reader.
//
// Supported syntax: @prefix / PREFIX, @base / BASE (recorded, IRIs are not
// resolved against it), IRIs, prefixed names, the `a` keyword, string
// literals (short and long forms, with language tags or datatypes), numeric
// and boolean literals, labelled blank nodes, and `;` / `,` predicate-object
// lists. Anonymous blank nodes `[ ]` and collections `( )` are rejected.
//
// Triples are mapped onto the ontology model as follows:
//   C rdfs:subClassOf D          etypes C, D and the edge C -> D
//   C a owl:Class|rdfs:Class     declares etype C
//   P rdfs:domain C              associates P with etype C
//   P a rdf:Property|owl:*Property  declares property P
//   X rdfs:label "l"             label of X
//   S a C  (C not a meta-class)  entity S typed with etype C
//   S P O  (P a known property)  entity S uses property P
// Any other predicate is ignored and counted in the report.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "etr/ontology.hpp"

namespace etr {

struct RdfTerm {
  enum class Kind { kIri, kBlank, kLiteral };
  Kind kind = Kind::kIri;
  std::string value;  // IRI, blank label (`_:x`) or literal lexical form

  bool operator==(const RdfTerm&) const = default;
};

struct RdfTriple {
  RdfTerm subject;
  RdfTerm predicate;
  RdfTerm object;

  bool operator==(const RdfTriple&) const = default;
};

struct TurtleDocument {
  std::vector<std::pair<std::string, std::string>> prefixes;  // name, IRI
  std::vector<RdfTriple> triples;                             // expanded IRIs
};

// Tokenizes and parses the document. Prefixed names are expanded to full
// IRIs. Throws ParseError with line/column on malformed input.
TurtleDocument parse_turtle(std::string_view text);

// Shortens an IRI to `prefix:local` using the longest matching namespace;
// returns the IRI unchanged when nothing matches.
std::string compact_iri(
    const std::string& iri,
    const std::vector<std::pair<std::string, std::string>>& prefixes);

struct TurtleOptions {
  // Treat every predicate outside the schema vocabulary as an entity
  // property, even if it was never declared.
  bool accept_undeclared_predicates = false;
};

struct TurtleImport {
  Ontology ontology;
  ParseReport report;
};

TurtleImport import_turtle(std::string_view text,
                           const TurtleOptions& options = {});

}  // namespace etr
