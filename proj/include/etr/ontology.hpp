#pragma once
// Ontology model: etypes, entities, properties and the is-a hierarchy.
//
// An Ontology is immutable once built. `Ontology::build` validates ids and
// references, rejects hierarchy cycles, and assigns each etype its layer
// (longest path from any root, roots at layer 1). All collections are kept
// sorted by id so every derived structure has a deterministic order.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace etr {

enum class Level { kSchema, kInstance };

std::string_view to_string(Level level);
Level parse_level(std::string_view text);

struct Property {
  std::string id;
  std::string label;

  bool operator==(const Property&) const = default;
};

struct Etype {
  std::string id;
  std::string label;
  std::vector<std::string> property_ids;  // prop(E), sorted unique
  std::vector<std::string> parent_ids;    // sorted unique
  int layer = 0;                          // derived, 1 = root

  bool operator==(const Etype&) const = default;
};

struct Entity {
  std::string id;
  std::string label;
  std::vector<std::string> etype_ids;     // may be empty
  std::vector<std::string> property_ids;  // may be empty

  bool operator==(const Entity&) const = default;
};

// Query switches for behaviours the ontology leaves open. Both default off.
struct QueryOptions {
  bool inherit_properties = false;  // prop(E) also includes ancestors' props
  bool rollup_instances = false;    // F(E) also counts subclass instances
};

class Ontology {
 public:
  Ontology() = default;

  // Validates and normalizes the given collections. Throws ValidationError on
  // duplicate ids, dangling references or a subclass cycle.
  static Ontology build(std::string id, std::vector<Property> properties,
                        std::vector<Etype> etypes,
                        std::vector<Entity> entities);

  const std::string& id() const { return id_; }
  const std::vector<Etype>& etypes() const { return etypes_; }
  const std::vector<Entity>& entities() const { return entities_; }
  const std::vector<Property>& properties() const { return properties_; }

  // (child, parent) pairs, sorted.
  std::vector<std::pair<std::string, std::string>> subclass_edges() const;
  std::vector<std::string> roots() const;

  const Etype& etype(std::string_view id) const;
  const Entity& entity(std::string_view id) const;
  const Property& property(std::string_view id) const;
  bool has_etype(std::string_view id) const;
  bool has_entity(std::string_view id) const;
  bool has_property(std::string_view id) const;

  int layer_of(std::string_view etype_id) const;
  // Deepest layer in the hierarchy; 1 for an ontology without etypes.
  int max_depth() const { return max_depth_; }

  // Sorted property ids of an etype (schema) or entity (instance).
  std::vector<std::string> props_of(std::string_view object_id, Level level,
                                    const QueryOptions& options = {}) const;

  // F(E): number of entities asserting the etype.
  std::size_t instance_count(std::string_view etype_id,
                             const QueryOptions& options = {}) const;

  // All strict ancestors of an etype, sorted.
  std::vector<std::string> ancestors(std::string_view etype_id) const;

  bool operator==(const Ontology& other) const;

 private:
  std::string id_;
  std::vector<Property> properties_;
  std::vector<Etype> etypes_;
  std::vector<Entity> entities_;
  std::unordered_map<std::string, std::size_t> property_index_;
  std::unordered_map<std::string, std::size_t> etype_index_;
  std::unordered_map<std::string, std::size_t> entity_index_;
  int max_depth_ = 1;
};

// Canonical exchange format (JSON document, format_version 1).
enum class OntologyFormat { kCanonical, kTurtleSubset };

struct ParseReport {
  std::size_t triples = 0;
  std::size_t ignored_predicates = 0;  // turtle only
};

Ontology parse_ontology(std::istream& in, OntologyFormat format,
                        ParseReport* report = nullptr);
Ontology parse_ontology_text(std::string_view text, OntologyFormat format,
                             ParseReport* report = nullptr);
Ontology load_ontology(const std::string& path,
                       ParseReport* report = nullptr);

std::string serialize_canonical(const Ontology& ontology);
void save_ontology(const Ontology& ontology, const std::string& path);

}  // namespace etr
