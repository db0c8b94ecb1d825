#include "etr/ontology.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <iterator>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "etr/errors.hpp"
#include "etr/turtle.hpp"
#include "json.hpp"

namespace etr {

ParseError::ParseError(const std::string& what, std::size_t line,
                       std::size_t column)
    : Error(line == 0 ? what
                      : fmt::format("{} (line {}, column {})", what, line,
                                    column)),
      line_(line),
      column_(column) {}

PairError::PairError(std::size_t index, const std::string& what)
    : Error(fmt::format("pair #{}: {}", index, what)), index_(index) {}

std::string_view to_string(Level level) {
  return level == Level::kSchema ? "schema" : "instance";
}

Level parse_level(std::string_view text) {
  if (text == "schema") return Level::kSchema;
  if (text == "instance") return Level::kInstance;
  throw ConfigError(fmt::format("unknown level '{}'", text));
}

namespace {

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

template <typename T>
std::unordered_map<std::string, std::size_t> index_by_id(
    std::vector<T>& items, std::string_view what) {
  std::sort(items.begin(), items.end(),
            [](const T& a, const T& b) { return a.id < b.id; });
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id.empty()) {
      throw ValidationError(fmt::format("{} with empty id", what));
    }
    if (!index.emplace(items[i].id, i).second) {
      throw ValidationError(
          fmt::format("duplicate {} id '{}'", what, items[i].id));
    }
  }
  return index;
}

}  // namespace

Ontology Ontology::build(std::string id, std::vector<Property> properties,
                         std::vector<Etype> etypes,
                         std::vector<Entity> entities) {
  Ontology o;
  o.id_ = std::move(id);
  o.properties_ = std::move(properties);
  o.etypes_ = std::move(etypes);
  o.entities_ = std::move(entities);
  o.property_index_ = index_by_id(o.properties_, "property");
  o.etype_index_ = index_by_id(o.etypes_, "etype");
  o.entity_index_ = index_by_id(o.entities_, "entity");

  for (auto& p : o.properties_) {
    if (p.label.empty()) p.label = p.id;
  }
  auto check_props = [&](const std::vector<std::string>& ids,
                         const std::string& owner) {
    for (const auto& pid : ids) {
      if (!o.property_index_.contains(pid)) {
        throw ValidationError(fmt::format(
            "'{}' references unknown property '{}'", owner, pid));
      }
    }
  };
  for (auto& e : o.etypes_) {
    if (e.label.empty()) e.label = e.id;
    sort_unique(e.property_ids);
    sort_unique(e.parent_ids);
    check_props(e.property_ids, e.id);
    for (const auto& parent : e.parent_ids) {
      if (!o.etype_index_.contains(parent)) {
        throw ValidationError(fmt::format(
            "etype '{}' has unknown parent '{}'", e.id, parent));
      }
      if (parent == e.id) {
        throw ValidationError(fmt::format("cycle: '{}' is its own parent", e.id));
      }
    }
  }
  for (auto& en : o.entities_) {
    if (en.label.empty()) en.label = en.id;
    sort_unique(en.etype_ids);
    sort_unique(en.property_ids);
    check_props(en.property_ids, en.id);
    for (const auto& t : en.etype_ids) {
      if (!o.etype_index_.contains(t)) {
        throw ValidationError(
            fmt::format("entity '{}' has unknown etype '{}'", en.id, t));
      }
    }
  }

  // Kahn's algorithm over parent -> child edges; layer is the longest path.
  const std::size_t n = o.etypes_.size();
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = o.etypes_[i].parent_ids.size();
    for (const auto& parent : o.etypes_[i].parent_ids) {
      children[o.etype_index_.at(parent)].push_back(i);
    }
  }
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) {
      o.etypes_[i].layer = 1;
      queue.push_back(i);
    }
  }
  std::size_t visited = 0;
  while (visited < queue.size()) {
    const std::size_t cur = queue[visited++];
    for (std::size_t child : children[cur]) {
      o.etypes_[child].layer =
          std::max(o.etypes_[child].layer, o.etypes_[cur].layer + 1);
      if (--pending[child] == 0) queue.push_back(child);
    }
  }
  if (visited != n) {
    std::vector<std::string> stuck;
    for (std::size_t i = 0; i < n; ++i) {
      if (pending[i] != 0) stuck.push_back(o.etypes_[i].id);
    }
    throw ValidationError(
        fmt::format("cycle in subclass hierarchy involving: {}",
                    fmt::join(stuck, ", ")));
  }
  o.max_depth_ = 1;
  for (const auto& e : o.etypes_) o.max_depth_ = std::max(o.max_depth_, e.layer);
  return o;
}

std::vector<std::pair<std::string, std::string>> Ontology::subclass_edges()
    const {
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : etypes_) {
    for (const auto& p : e.parent_ids) edges.emplace_back(e.id, p);
  }
  return edges;
}

std::vector<std::string> Ontology::roots() const {
  std::vector<std::string> out;
  for (const auto& e : etypes_) {
    if (e.parent_ids.empty()) out.push_back(e.id);
  }
  return out;
}

namespace {

template <typename T>
const T& lookup(const std::vector<T>& items,
                const std::unordered_map<std::string, std::size_t>& index,
                std::string_view id, std::string_view what) {
  auto it = index.find(std::string(id));
  if (it == index.end()) {
    throw UnknownId(fmt::format("unknown {} '{}'", what, id));
  }
  return items[it->second];
}

}  // namespace

const Etype& Ontology::etype(std::string_view id) const {
  return lookup(etypes_, etype_index_, id, "etype");
}
const Entity& Ontology::entity(std::string_view id) const {
  return lookup(entities_, entity_index_, id, "entity");
}
const Property& Ontology::property(std::string_view id) const {
  return lookup(properties_, property_index_, id, "property");
}
bool Ontology::has_etype(std::string_view id) const {
  return etype_index_.contains(std::string(id));
}
bool Ontology::has_entity(std::string_view id) const {
  return entity_index_.contains(std::string(id));
}
bool Ontology::has_property(std::string_view id) const {
  return property_index_.contains(std::string(id));
}

int Ontology::layer_of(std::string_view etype_id) const {
  return etype(etype_id).layer;
}

std::vector<std::string> Ontology::ancestors(std::string_view etype_id) const {
  std::set<std::string> seen;
  std::vector<std::string> stack = etype(etype_id).parent_ids;
  while (!stack.empty()) {
    std::string cur = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    for (const auto& p : etype(cur).parent_ids) stack.push_back(p);
  }
  return {seen.begin(), seen.end()};
}

std::vector<std::string> Ontology::props_of(std::string_view object_id,
                                            Level level,
                                            const QueryOptions& options) const {
  if (level == Level::kInstance) return entity(object_id).property_ids;
  const Etype& e = etype(object_id);
  if (!options.inherit_properties) return e.property_ids;
  std::vector<std::string> out = e.property_ids;
  for (const auto& a : ancestors(object_id)) {
    const auto& ap = etype(a).property_ids;
    out.insert(out.end(), ap.begin(), ap.end());
  }
  sort_unique(out);
  return out;
}

std::size_t Ontology::instance_count(std::string_view etype_id,
                                     const QueryOptions& options) const {
  const std::string target(etype(etype_id).id);
  std::size_t count = 0;
  for (const auto& en : entities_) {
    bool hit = std::binary_search(en.etype_ids.begin(), en.etype_ids.end(),
                                  target);
    if (!hit && options.rollup_instances) {
      for (const auto& t : en.etype_ids) {
        auto anc = ancestors(t);
        if (std::binary_search(anc.begin(), anc.end(), target)) {
          hit = true;
          break;
        }
      }
    }
    if (hit) ++count;
  }
  return count;
}

bool Ontology::operator==(const Ontology& other) const {
  return id_ == other.id_ && properties_ == other.properties_ &&
         etypes_ == other.etypes_ && entities_ == other.entities_;
}

// ---------------------------------------------------------------------------
// Canonical format

namespace {

using nlohmann::json;

constexpr int kCanonicalFormatVersion = 1;

std::pair<std::size_t, std::size_t> line_col(std::string_view text,
                                             std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::vector<std::string> string_list(const json& node, const char* key,
                                     const std::string& owner) {
  std::vector<std::string> out;
  auto it = node.find(key);
  if (it == node.end()) return out;
  if (!it->is_array()) {
    throw ParseError(fmt::format("'{}' of '{}' must be an array", key, owner));
  }
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw ParseError(
          fmt::format("'{}' of '{}' must contain strings", key, owner));
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string required_string(const json& node, const char* key,
                            std::string_view where) {
  auto it = node.find(key);
  if (it == node.end() || !it->is_string()) {
    throw ParseError(fmt::format("{}: missing string field '{}'", where, key));
  }
  return it->get<std::string>();
}

std::string optional_string(const json& node, const char* key) {
  auto it = node.find(key);
  if (it == node.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw ParseError(fmt::format("field '{}' must be a string", key));
  }
  return it->get<std::string>();
}

Ontology parse_canonical(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("malformed canonical ontology document", line, col);
  }
  if (!doc.is_object()) throw ParseError("document root must be an object");
  auto version = doc.find("format_version");
  if (version == doc.end() || !version->is_number_integer()) {
    throw ParseError("missing integer field 'format_version'");
  }
  if (version->get<int>() != kCanonicalFormatVersion) {
    throw FormatVersionMismatch(fmt::format(
        "unsupported ontology format_version {}", version->get<int>()));
  }

  std::vector<Property> properties;
  std::vector<Etype> etypes;
  std::vector<Entity> entities;
  auto section = [&](const char* key) -> const json& {
    static const json kEmpty = json::array();
    auto it = doc.find(key);
    if (it == doc.end()) return kEmpty;
    if (!it->is_array()) {
      throw ParseError(fmt::format("'{}' must be an array", key));
    }
    return *it;
  };
  for (const auto& p : section("properties")) {
    std::string id = required_string(p, "id", "property");
    std::string label = optional_string(p, "label");
    properties.push_back({std::move(id), std::move(label)});
  }
  for (const auto& e : section("etypes")) {
    Etype et;
    et.id = required_string(e, "id", "etype");
    et.label = optional_string(e, "label");
    et.property_ids = string_list(e, "properties", et.id);
    et.parent_ids = string_list(e, "parents", et.id);
    etypes.push_back(std::move(et));
  }
  for (const auto& e : section("entities")) {
    Entity en;
    en.id = required_string(e, "id", "entity");
    en.label = optional_string(e, "label");
    en.etype_ids = string_list(e, "types", en.id);
    en.property_ids = string_list(e, "properties", en.id);
    entities.push_back(std::move(en));
  }
  std::string id = optional_string(doc, "id");
  return Ontology::build(std::move(id), std::move(properties),
                         std::move(etypes), std::move(entities));
}

}  // namespace

Ontology parse_ontology_text(std::string_view text, OntologyFormat format,
                             ParseReport* report) {
  if (format == OntologyFormat::kTurtleSubset) {
    TurtleImport imported = import_turtle(text);
    if (report != nullptr) *report = imported.report;
    return std::move(imported.ontology);
  }
  if (report != nullptr) *report = {};
  return parse_canonical(text);
}

Ontology parse_ontology(std::istream& in, OntologyFormat format,
                        ParseReport* report) {
  std::string text{std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>()};
  return parse_ontology_text(text, format, report);
}

Ontology load_ontology(const std::string& path, ParseReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open ontology '{}'", path));
  const bool turtle = path.ends_with(".ttl") || path.ends_with(".turtle");
  return parse_ontology(
      in, turtle ? OntologyFormat::kTurtleSubset : OntologyFormat::kCanonical,
      report);
}

std::string serialize_canonical(const Ontology& ontology) {
  json doc = json::object();
  doc["format_version"] = kCanonicalFormatVersion;
  doc["id"] = ontology.id();
  json props = json::array();
  for (const auto& p : ontology.properties()) {
    props.push_back({{"id", p.id}, {"label", p.label}});
  }
  json etypes = json::array();
  for (const auto& e : ontology.etypes()) {
    etypes.push_back({{"id", e.id},
                      {"label", e.label},
                      {"properties", e.property_ids},
                      {"parents", e.parent_ids}});
  }
  json entities = json::array();
  for (const auto& e : ontology.entities()) {
    entities.push_back({{"id", e.id},
                        {"label", e.label},
                        {"types", e.etype_ids},
                        {"properties", e.property_ids}});
  }
  doc["properties"] = std::move(props);
  doc["etypes"] = std::move(etypes);
  doc["entities"] = std::move(entities);
  return doc.dump(1) + "\n";
}

void save_ontology(const Ontology& ontology, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write ontology '{}'", path));
  out << serialize_canonical(ontology);
}

}  // namespace etr
