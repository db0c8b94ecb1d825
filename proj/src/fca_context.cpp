#include "etr/fca_context.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "etr/errors.hpp"

namespace etr {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows),
      cols_(cols),
      stride_((cols + 63) / 64),
      words_(rows * ((cols + 63) / 64), 0) {}

std::size_t BitMatrix::row_count(std::size_t r) const {
  std::size_t n = 0;
  for (std::size_t w = 0; w < stride_; ++w) {
    n += static_cast<std::size_t>(std::popcount(words_[r * stride_ + w]));
  }
  return n;
}

std::size_t BitMatrix::column_count(std::size_t c) const {
  std::size_t n = 0;
  for (std::size_t r = 0; r < rows_; ++r) n += test(r, c) ? 1 : 0;
  return n;
}

std::size_t FcaContext::object_index(std::string_view id) const {
  auto it = object_index_.find(std::string(id));
  if (it == object_index_.end()) {
    throw UnknownId(fmt::format("object '{}' not in context", id));
  }
  return it->second;
}

std::size_t FcaContext::property_index(std::string_view id) const {
  auto it = property_index_.find(std::string(id));
  if (it == property_index_.end()) {
    throw UnknownId(fmt::format("property '{}' not in context", id));
  }
  return it->second;
}

bool FcaContext::has_object(std::string_view id) const {
  return object_index_.contains(std::string(id));
}

bool FcaContext::has_property(std::string_view id) const {
  return property_index_.contains(std::string(id));
}

std::vector<std::size_t> FcaContext::extent_indices(std::size_t property) const {
  std::vector<std::size_t> out;
  for (std::size_t o = 0; o < object_count(); ++o) {
    if (has(o, property)) out.push_back(o);
  }
  return out;
}

FcaContext build_context(const Ontology& ontology, Level level,
                         const ContextOptions& options) {
  FcaContext ctx;
  ctx.level_ = level;
  ctx.layer_normalizer_ = ontology.max_depth();

  std::vector<std::vector<std::string>> rows;
  if (level == Level::kSchema) {
    for (const auto& e : ontology.etypes()) {
      ctx.object_ids_.push_back(e.id);
      ctx.object_labels_.push_back(e.label);
      rows.push_back(ontology.props_of(e.id, level, options.query));
      ctx.layers_.push_back(e.layer);
      ctx.population_.push_back(
          ontology.instance_count(e.id, options.query));
      ctx.classes_.push_back(ctx.classes_.size());
    }
  } else {
    std::map<std::vector<std::string>, std::size_t> class_keys;
    for (const auto& en : ontology.entities()) {
      ctx.object_ids_.push_back(en.id);
      ctx.object_labels_.push_back(en.label);
      rows.push_back(en.property_ids);
      int layer = ctx.layer_normalizer_;
      if (!en.etype_ids.empty()) {
        layer = ontology.max_depth();
        for (const auto& t : en.etype_ids) {
          layer = std::min(layer, ontology.layer_of(t));
        }
      }
      ctx.layers_.push_back(layer);
      ctx.population_.push_back(1);
      auto [it, inserted] =
          class_keys.emplace(en.etype_ids, class_keys.size());
      ctx.classes_.push_back(it->second);
    }
  }

  bool any = false;
  for (const auto& r : rows) any = any || !r.empty();
  if (!any) {
    throw EmptyContext(fmt::format(
        "ontology '{}' has no {}-level object with properties", ontology.id(),
        to_string(level)));
  }

  // Every declared property becomes a column, used or not.
  for (const auto& p : ontology.properties()) {
    ctx.property_ids_.push_back(p.id);
    ctx.property_labels_.push_back(p.label);
  }
  for (std::size_t i = 0; i < ctx.object_ids_.size(); ++i) {
    ctx.object_index_.emplace(ctx.object_ids_[i], i);
  }
  for (std::size_t j = 0; j < ctx.property_ids_.size(); ++j) {
    ctx.property_index_.emplace(ctx.property_ids_[j], j);
  }
  ctx.incidence_ = BitMatrix(ctx.object_ids_.size(), ctx.property_ids_.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& pid : rows[i]) {
      ctx.incidence_.set(i, ctx.property_index_.at(pid));
    }
  }
  return ctx;
}

ExtentSet extent(const FcaContext& context, std::string_view property_id) {
  const std::size_t p = context.property_index(property_id);
  ExtentSet out{std::string(property_id), {}};
  for (std::size_t o : context.extent_indices(p)) {
    out.object_ids.push_back(context.object_ids()[o]);
  }
  return out;
}

std::pair<ExtentSet, ExtentSet> partition_by(const FcaContext& context,
                                             std::string_view property_id) {
  const std::size_t p = context.property_index(property_id);
  ExtentSet plus{std::string(property_id), {}};
  ExtentSet minus{std::string(property_id), {}};
  for (std::size_t o = 0; o < context.object_count(); ++o) {
    (context.has(o, p) ? plus : minus)
        .object_ids.push_back(context.object_ids()[o]);
  }
  return {std::move(plus), std::move(minus)};
}

void dump_context(const FcaContext& context, std::ostream& out) {
  out << "# etr-context format_version=1 level=" << to_string(context.level())
      << "\n";
  out << "object";
  for (const auto& p : context.property_ids()) out << '\t' << p;
  out << '\n';
  for (std::size_t o = 0; o < context.object_count(); ++o) {
    out << context.object_ids()[o];
    for (std::size_t p = 0; p < context.property_count(); ++p) {
      out << '\t' << (context.has(o, p) ? '1' : '0');
    }
    out << '\n';
  }
}

}  // namespace etr
