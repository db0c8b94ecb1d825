#include "etr/synth.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "etr/corpus_io.hpp"
#include "etr/errors.hpp"
#include "etr/random.hpp"

namespace etr {

namespace {

struct Category {
  const char* name;
  std::vector<const char*> stems;
};

const std::vector<Category>& vocabulary() {
  static const std::vector<Category> cats = {
      {"agent", {"person", "student", "author", "reviewer", "chair", "member",
                 "organizer", "speaker", "editor", "professor", "attendee"}},
      {"document", {"paper", "article", "abstract", "review", "report",
                    "thesis", "proceedings", "journal", "book", "chapter"}},
      {"event", {"conference", "workshop", "session", "meeting", "tutorial",
                 "symposium", "talk", "seminar", "banquet"}},
      {"place", {"venue", "city", "country", "room", "hotel", "campus",
                 "building", "region"}},
      {"organization", {"university", "institute", "company", "committee",
                        "department", "publisher", "sponsor", "laboratory"}},
      {"topic", {"topic", "track", "area", "keyword", "domain", "field"}},
  };
  return cats;
}

const std::vector<const char*>& property_nouns() {
  static const std::vector<const char*> nouns = {
      "name", "title", "date", "code", "email", "address", "size", "count",
      "rank", "status", "level", "phone", "budget", "deadline", "language",
      "duration", "capacity", "website", "identifier", "description"};
  return nouns;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

char random_letter(Rng& rng) {
  return static_cast<char>('a' + rng.below(26));
}

// Per-character edits: each position is substituted, deleted or followed by
// an inserted letter with probability `rate`.
std::string add_noise(const std::string& label, double rate, Rng& rng) {
  if (rate <= 0.0) return label;
  std::string out;
  for (char c : label) {
    if (!rng.bernoulli(rate)) {
      out.push_back(c);
      continue;
    }
    const bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
    char r = random_letter(rng);
    if (upper) r = static_cast<char>(std::toupper(static_cast<unsigned char>(r)));
    switch (rng.below(3)) {
      case 0: out.push_back(r); break;
      case 1: break;
      default:
        out.push_back(c);
        out.push_back(r);
        break;
    }
  }
  return out.empty() ? label : out;
}

// Drops round(fraction * n) ids, always keeping at least one.
std::vector<std::string> subsample(std::vector<std::string> ids,
                                   double fraction, Rng& rng) {
  if (fraction <= 0.0 || ids.size() <= 1) return ids;
  auto drop = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(ids.size()) + 0.5));
  drop = std::min(drop, ids.size() - 1);
  rng.shuffle(std::span(ids));
  ids.resize(ids.size() - drop);
  std::sort(ids.begin(), ids.end());
  return ids;
}

struct Draft {
  std::vector<Property> properties;
  std::vector<Etype> etypes;
  std::vector<Entity> entities;
  std::vector<std::string> etype_of_entity;  // parallel to entities
};

}  // namespace

void SyntheticSpec::validate() const {
  if (n_etypes <= 0 || depth <= 0 || properties_per_etype <= 0 ||
      entities_per_etype <= 0) {
    throw InvalidSpec("etype count, depth, properties and entities must be positive");
  }
  if (depth > n_etypes) {
    throw InvalidSpec(fmt::format("depth {} needs at least {} etypes", depth, depth));
  }
  if (shared_properties < 0) throw InvalidSpec("shared property count is negative");
  if (shared_properties > 0 && (max_shareability < 2 || max_shareability > n_etypes)) {
    throw InvalidSpec("max shareability must lie in [2, n_etypes]");
  }
  if (!(label_noise >= 0.0 && label_noise < 1.0)) {
    throw InvalidSpec("label noise must lie in [0,1)");
  }
  if (!(property_subsample >= 0.0 && property_subsample < 1.0)) {
    throw InvalidSpec("property subsampling must lie in [0,1)");
  }
  if (!(population_skew >= 0.0 && population_skew < 1.0)) {
    throw InvalidSpec("population skew must lie in [0,1)");
  }
  if (!(entity_property_keep > 0.0 && entity_property_keep <= 1.0)) {
    throw InvalidSpec("entity property keep rate must lie in (0,1]");
  }
}

SyntheticBenchmark generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto n = static_cast<std::size_t>(spec.n_etypes);

  // Modifier words: single stems first, then stem pairs as needed.
  std::vector<std::string> stems;
  for (const auto& c : vocabulary()) {
    for (const char* s : c.stems) stems.emplace_back(s);
  }
  std::vector<std::string> modifiers = stems;
  rng.shuffle(std::span(modifiers));
  if (modifiers.size() < n) {
    std::vector<std::string> pairs;
    for (const auto& a : stems) {
      for (const auto& b : stems) {
        if (a != b) pairs.push_back(a + " " + b);
      }
    }
    rng.shuffle(std::span(pairs));
    pairs.resize(n - modifiers.size());
    modifiers.insert(modifiers.end(), pairs.begin(), pairs.end());
  }

  auto camel = [](const std::string& words) {
    std::string out;
    std::istringstream ss(words);
    std::string w;
    while (ss >> w) out += capitalize(w);
    return out;
  };
  auto head_of = [](const std::string& words) {
    const auto pos = words.rfind(' ');
    return pos == std::string::npos ? words : words.substr(pos + 1);
  };

  // Layers: the first `depth` etypes form a chain so every layer is used;
  // the rest pick a random layer and a parent one layer up.
  std::vector<int> layer(n);
  std::vector<int> parent(n, -1);
  std::vector<std::vector<std::size_t>> by_layer(spec.depth + 1);
  for (std::size_t i = 0; i < n; ++i) {
    layer[i] = i < static_cast<std::size_t>(spec.depth)
                   ? static_cast<int>(i) + 1
                   : 1 + static_cast<int>(rng.below(spec.depth));
    if (layer[i] > 1) {
      const auto& ups = by_layer[layer[i] - 1];
      parent[i] = static_cast<int>(ups[rng.below(ups.size())]);
    }
    by_layer[layer[i]].push_back(i);
  }

  // Words of each etype label: modifier + parent's head word.
  std::vector<std::string> words(n);
  for (std::size_t i = 0; i < n; ++i) {
    words[i] = parent[i] < 0 ? modifiers[i]
                             : modifiers[i] + " " + head_of(words[parent[i]]);
  }

  Draft ref;
  auto etype_id = [](std::size_t i) { return fmt::format("E{:03d}", i + 1); };
  auto prop_id = [](std::size_t i) { return fmt::format("P{:03d}", i + 1); };
  const auto& nouns = property_nouns();
  std::vector<std::set<std::string>> props(n);
  std::size_t next_prop = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> noun_idx(nouns.size());
    std::iota(noun_idx.begin(), noun_idx.end(), 0);
    rng.shuffle(std::span(noun_idx));
    for (int k = 0; k < spec.properties_per_etype; ++k) {
      const std::string noun = nouns[noun_idx[k % noun_idx.size()]];
      std::string label = camel(modifiers[i]) + capitalize(noun);
      label[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(label[0])));
      if (k >= static_cast<int>(noun_idx.size())) label += std::to_string(k);
      const std::string id = prop_id(next_prop++);
      ref.properties.push_back({id, label});
      props[i].insert(id);
    }
  }
  for (int s = 0; s < spec.shared_properties; ++s) {
    const std::string id = prop_id(next_prop++);
    const std::string noun = nouns[rng.below(nouns.size())];
    const std::string& stem = stems[rng.below(stems.size())];
    ref.properties.push_back({id, "has" + capitalize(stem) + capitalize(noun)});
    const auto owners = 2 + rng.below(static_cast<std::uint64_t>(spec.max_shareability) - 1);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span(order));
    for (std::size_t k = 0; k < owners; ++k) props[order[k]].insert(id);
  }

  for (std::size_t i = 0; i < n; ++i) {
    Etype e;
    e.id = etype_id(i);
    e.label = camel(words[i]);
    e.property_ids.assign(props[i].begin(), props[i].end());
    if (parent[i] >= 0) e.parent_ids.push_back(etype_id(parent[i]));
    ref.etypes.push_back(std::move(e));
  }

  // Populations spread around the mean so informational specificity varies.
  std::size_t next_entity = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double factor = 1.0 + spec.population_skew * (2.0 * rng.uniform() - 1.0);
    const int count = std::max(
        1, static_cast<int>(std::floor(spec.entities_per_etype * factor + 0.5)));
    const auto& type_props = ref.etypes[i].property_ids;
    for (int k = 0; k < count; ++k) {
      Entity ent;
      ent.id = fmt::format("I{:04d}", ++next_entity);
      ent.label = fmt::format("{} {}", words[i], k + 1);
      ent.etype_ids = {ref.etypes[i].id};
      for (const auto& p : type_props) {
        if (rng.bernoulli(spec.entity_property_keep)) ent.property_ids.push_back(p);
      }
      if (ent.property_ids.empty()) {
        ent.property_ids.push_back(type_props[rng.below(type_props.size())]);
      }
      ref.entities.push_back(std::move(ent));
    }
  }

  // Candidate copy: new ids, noisy labels, subsampled property sets.
  auto cand_id = [](const std::string& id) { return "c." + id; };
  auto ref_id = [](const std::string& id) { return "r." + id; };
  Rng noise(spec.seed ^ fnv1a("synth/candidate"));
  std::vector<Property> cprops;
  std::vector<Property> rprops;
  for (const auto& p : ref.properties) {
    rprops.push_back({ref_id(p.id), p.label});
    cprops.push_back({cand_id(p.id), add_noise(p.label, spec.label_noise, noise)});
  }
  std::vector<Etype> retypes;
  std::vector<Etype> cetypes;
  SyntheticBenchmark bench;
  auto prefixed = [](const std::vector<std::string>& ids, auto&& fn) {
    std::vector<std::string> out;
    for (const auto& id : ids) out.push_back(fn(id));
    return out;
  };
  for (const auto& e : ref.etypes) {
    retypes.push_back({ref_id(e.id), e.label, prefixed(e.property_ids, ref_id),
                       prefixed(e.parent_ids, ref_id), 0});
    cetypes.push_back(
        {cand_id(e.id), add_noise(e.label, spec.label_noise, noise),
         subsample(prefixed(e.property_ids, cand_id), spec.property_subsample, noise),
         prefixed(e.parent_ids, cand_id), 0});
    bench.schema_truth.emplace(ref_id(e.id), cand_id(e.id));
  }
  std::vector<Entity> rents;
  std::vector<Entity> cents;
  for (const auto& ent : ref.entities) {
    rents.push_back({ref_id(ent.id), ent.label, prefixed(ent.etype_ids, ref_id),
                     prefixed(ent.property_ids, ref_id)});
    cents.push_back({cand_id(ent.id), add_noise(ent.label, spec.label_noise, noise),
                     prefixed(ent.etype_ids, cand_id),
                     subsample(prefixed(ent.property_ids, cand_id),
                               spec.property_subsample, noise)});
    for (const auto& t : ent.etype_ids) {
      bench.instance_truth.emplace(ref_id(t), cand_id(ent.id));
    }
  }
  bench.reference = Ontology::build("synthetic-reference", std::move(rprops),
                                    std::move(retypes), std::move(rents));
  bench.candidate = Ontology::build("synthetic-candidate", std::move(cprops),
                                    std::move(cetypes), std::move(cents));

  // Taxonomy: root -> category -> stem, one lemma per stem.
  std::string tax = "# synthetic taxonomy\n";
  for (const auto& c : vocabulary()) {
    tax += fmt::format("isa {} entity\n", c.name);
    for (const char* s : c.stems) {
      tax += fmt::format("isa {}.n {}\nlemma {} {}.n\n", s, c.name, s, s);
    }
  }
  bench.taxonomy_text = std::move(tax);

  // Embeddings: a category direction plus per-stem noise.
  constexpr int kDim = 16;
  Rng emb(spec.seed ^ fnv1a("synth/embeddings"));
  std::string vecs = fmt::format("{} {}\n", stems.size(), kDim);
  for (const auto& c : vocabulary()) {
    std::vector<double> base(kDim);
    for (double& b : base) b = emb.normal();
    for (const char* s : c.stems) {
      vecs += s;
      for (int d = 0; d < kDim; ++d) {
        vecs += fmt::format(" {:.6f}", base[d] + 0.6 * emb.normal());
      }
      vecs += '\n';
    }
  }
  bench.embeddings_text = std::move(vecs);
  return bench;
}

void write_synthetic(const SyntheticBenchmark& bench, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create '{}': {}", dir, ec.message()));
  auto write = [&](const std::string& name, auto&& fill) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path));
    fill(out);
  };
  save_ontology(bench.reference, (fs::path(dir) / "reference.json").string());
  save_ontology(bench.candidate, (fs::path(dir) / "candidate.json").string());
  write("truth_schema.tsv", [&](std::ostream& o) { write_alignment(bench.schema_truth, o); });
  write("truth_instance.tsv",
        [&](std::ostream& o) { write_alignment(bench.instance_truth, o); });
  write("taxonomy.txt", [&](std::ostream& o) { o << bench.taxonomy_text; });
  write("embeddings.txt", [&](std::ostream& o) { o << bench.embeddings_text; });
}

}  // namespace etr
