#pragma once
// Formal-concept incidence context: objects x properties bit matrix built
// from an Ontology at schema level (objects = etypes) or instance level
// (objects = entities), plus the per-object metadata the specificity
// measures need.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "etr/ontology.hpp"

namespace etr {

// Row-major bit matrix, one 64-bit word run per row.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool test(std::size_t r, std::size_t c) const {
    return (words_[r * stride_ + c / 64] >> (c % 64)) & 1U;
  }
  void set(std::size_t r, std::size_t c) {
    words_[r * stride_ + c / 64] |= std::uint64_t{1} << (c % 64);
  }
  std::size_t row_count(std::size_t r) const;
  std::size_t column_count(std::size_t c) const;

  bool operator==(const BitMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
};

// K_v: sorted ids of the objects possessing a property.
struct ExtentSet {
  std::string property_id;
  std::vector<std::string> object_ids;

  std::size_t size() const { return object_ids.size(); }
  bool operator==(const ExtentSet&) const = default;
};

struct ContextOptions {
  QueryOptions query;
};

class FcaContext {
 public:
  Level level() const { return level_; }
  const std::vector<std::string>& object_ids() const { return object_ids_; }
  const std::vector<std::string>& property_ids() const { return property_ids_; }
  const BitMatrix& incidence() const { return incidence_; }
  std::size_t object_count() const { return object_ids_.size(); }
  std::size_t property_count() const { return property_ids_.size(); }

  // Index lookups; throw UnknownId.
  std::size_t object_index(std::string_view id) const;
  std::size_t property_index(std::string_view id) const;
  bool has_object(std::string_view id) const;
  bool has_property(std::string_view id) const;

  bool has(std::size_t object, std::size_t property) const {
    return incidence_.test(object, property);
  }
  // |prop(object)|
  std::size_t property_count_of(std::size_t object) const {
    return incidence_.row_count(object);
  }
  // Indices of the objects possessing a property (ascending).
  std::vector<std::size_t> extent_indices(std::size_t property) const;

  // Hierarchy layer of each object. Schema level: the etype's layer.
  // Instance level: the shallowest asserted etype, or layer_normalizer for
  // untyped entities.
  int object_layer(std::size_t object) const { return layers_[object]; }
  // Deepest layer of the source ontology (>= 1).
  int layer_normalizer() const { return layer_normalizer_; }

  // Population weight F of each object. Schema level: F(E), the etype's
  // instance count. Instance level: 1 per entity.
  std::size_t population(std::size_t object) const {
    return population_[object];
  }
  // Class key of each object used to group populations inside an extent.
  // Schema level: each etype is its own class. Instance level: entities
  // sharing the same asserted etype set share a class.
  std::size_t population_class(std::size_t object) const {
    return classes_[object];
  }

  const std::string& label_of(std::size_t object) const {
    return object_labels_[object];
  }
  const std::string& property_label(std::size_t property) const {
    return property_labels_[property];
  }

  friend FcaContext build_context(const Ontology&, Level,
                                  const ContextOptions&);

 private:
  Level level_ = Level::kSchema;
  std::vector<std::string> object_ids_;
  std::vector<std::string> object_labels_;
  std::vector<std::string> property_ids_;
  std::vector<std::string> property_labels_;
  std::unordered_map<std::string, std::size_t> object_index_;
  std::unordered_map<std::string, std::size_t> property_index_;
  BitMatrix incidence_;
  std::vector<int> layers_;
  std::vector<std::size_t> population_;
  std::vector<std::size_t> classes_;
  int layer_normalizer_ = 1;
};

// Throws EmptyContext when no object at the requested level has a property.
FcaContext build_context(const Ontology& ontology, Level level,
                         const ContextOptions& options = {});

ExtentSet extent(const FcaContext& context, std::string_view property_id);

// (K+, K-): objects with and without the property.
std::pair<ExtentSet, ExtentSet> partition_by(const FcaContext& context,
                                             std::string_view property_id);

// Text matrix dump: header row of property ids, then one row per object.
void dump_context(const FcaContext& context, std::ostream& out);

}  // namespace etr
