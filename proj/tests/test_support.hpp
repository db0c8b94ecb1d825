#pragma once
// Helpers shared by the unit and acceptance tests: compact ontology builders,
// random generators, and reference implementations written directly from
// the formulas without touching the library's own data structures.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "etr/ontology.hpp"
#include "etr/pipeline.hpp"
#include "etr/random.hpp"
#include "etr/similarity.hpp"
#include "etr/specificity.hpp"

namespace etr::testing {

struct EtypeSpec {
  std::string id;
  std::vector<std::string> props;
  std::vector<std::string> parents = {};
};

struct EntitySpec {
  std::string id;
  std::vector<std::string> types;
  std::vector<std::string> props = {};
};

inline Ontology make_ontology(const std::vector<std::string>& props,
                              const std::vector<EtypeSpec>& etypes,
                              const std::vector<EntitySpec>& entities = {}) {
  std::vector<Property> ps;
  for (const auto& p : props) ps.push_back({p, p});
  std::vector<Etype> es;
  for (const auto& e : etypes) es.push_back({e.id, e.id, e.props, e.parents, 0});
  std::vector<Entity> ents;
  for (const auto& e : entities) ents.push_back({e.id, e.id, e.types, e.props});
  return Ontology::build("test", ps, es, ents);
}

inline std::string random_string(Rng& rng, std::size_t max_len,
                                  std::string_view alphabet = "abcde") {
  const std::size_t len = rng.below(max_len + 1);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
  return s;
}

// Random DAG ontology: every etype has at least one property, parents have
// smaller indices, entities carry random types and properties.
inline Ontology random_ontology(Rng& rng, const std::string& prefix,
                                std::size_t max_etypes = 10,
                                std::size_t max_props = 10) {
  const std::size_t ne = 1 + rng.below(max_etypes);
  const std::size_t np = 1 + rng.below(max_props);
  static const std::vector<std::string> words = {
      "name", "title", "author", "date", "location", "locatedIn", "email",
      "paperTitle", "hasAuthor", "venue", "city", "year", "topic", "size"};
  std::vector<Property> props;
  for (std::size_t p = 0; p < np; ++p) {
    props.push_back({prefix + "p" + std::to_string(p), words[rng.below(words.size())]});
  }
  std::vector<Etype> etypes;
  for (std::size_t e = 0; e < ne; ++e) {
    Etype et;
    et.id = prefix + "e" + std::to_string(e);
    et.label = et.id;
    std::set<std::string> ps;
    ps.insert(props[rng.below(np)].id);
    for (const auto& p : props) {
      if (rng.bernoulli(0.3)) ps.insert(p.id);
    }
    et.property_ids.assign(ps.begin(), ps.end());
    if (e > 0 && rng.bernoulli(0.6)) et.parent_ids.push_back(prefix + "e" + std::to_string(rng.below(e)));
    if (e > 1 && rng.bernoulli(0.2)) {
      const std::string extra = prefix + "e" + std::to_string(rng.below(e));
      if (std::find(et.parent_ids.begin(), et.parent_ids.end(), extra) == et.parent_ids.end()) {
        et.parent_ids.push_back(extra);
      }
    }
    etypes.push_back(std::move(et));
  }
  std::vector<Entity> entities;
  const std::size_t nent = rng.below(3 * ne + 1);
  for (std::size_t i = 0; i < nent; ++i) {
    Entity en;
    en.id = prefix + "i" + std::to_string(i);
    en.label = en.id;
    std::set<std::string> types;
    const std::size_t nt = rng.below(3);
    for (std::size_t k = 0; k < nt; ++k) types.insert(etypes[rng.below(ne)].id);
    en.etype_ids.assign(types.begin(), types.end());
    std::set<std::string> ps;
    for (const auto& p : props) {
      if (rng.bernoulli(0.3)) ps.insert(p.id);
    }
    en.property_ids.assign(ps.begin(), ps.end());
    entities.push_back(std::move(en));
  }
  return Ontology::build(prefix + "onto", props, etypes, entities);
}

// Random 1:1 alignment between the declared properties of two ontologies.
inline PropertyAlignment random_alignment(Rng& rng, const Ontology& a,
                                          const Ontology& b) {
  std::vector<std::string> pa;
  std::vector<std::string> pb;
  for (const auto& p : a.properties()) pa.push_back(p.id);
  for (const auto& p : b.properties()) pb.push_back(p.id);
  rng.shuffle(std::span(pa));
  rng.shuffle(std::span(pb));
  PropertyAlignment al;
  const std::size_t n = std::min(pa.size(), pb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.bernoulli(0.7)) al.pairs.push_back({pa[i], pb[i], 1.0});
  }
  std::sort(al.pairs.begin(), al.pairs.end(), [](const auto& x, const auto& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return al;
}

// --- schema-level reference formulas, straight from an Ontology -----------

struct ReferenceSpecificity {
  const Ontology* onto;
  double lambda;
  std::vector<std::string> objects;  // etype ids
  std::vector<std::string> props;    // property ids
  std::vector<std::vector<bool>> inc;
  std::vector<int> layer;
  std::vector<double> population;
  int depth = 1;
  std::vector<double> scaled_gain;

  ReferenceSpecificity(const Ontology& o, double lam) : onto(&o), lambda(lam) {
    for (const auto& e : o.etypes()) objects.push_back(e.id);
    for (const auto& p : o.properties()) props.push_back(p.id);
    std::sort(objects.begin(), objects.end());
    std::sort(props.begin(), props.end());
    inc.assign(objects.size(), std::vector<bool>(props.size(), false));
    std::map<std::string, std::vector<std::string>> parents;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      const Etype* e = nullptr;
      for (const auto& x : o.etypes()) {
        if (x.id == objects[i]) e = &x;
      }
      parents[e->id] = e->parent_ids;
      for (std::size_t j = 0; j < props.size(); ++j) {
        inc[i][j] = std::count(e->property_ids.begin(), e->property_ids.end(), props[j]) > 0;
      }
      double f = 0;
      for (const auto& en : o.entities()) {
        f += static_cast<double>(std::count(en.etype_ids.begin(), en.etype_ids.end(), e->id));
      }
      population.push_back(f);
    }
    // Longest path from a root.
    std::function<int(const std::string&)> longest = [&](const std::string& id) {
      int best = 1;
      for (const auto& p : parents[id]) best = std::max(best, longest(p) + 1);
      return best;
    };
    for (const auto& id : objects) {
      layer.push_back(longest(id));
      depth = std::max(depth, layer.back());
    }
    std::vector<double> gains;
    double lo = 1e300;
    double hi = -1e300;
    for (std::size_t j = 0; j < props.size(); ++j) {
      gains.push_back(raw_gain(j));
      lo = std::min(lo, gains.back());
      hi = std::max(hi, gains.back());
    }
    for (std::size_t j = 0; j < props.size(); ++j) {
      double s = hi > lo ? (gains[j] - lo) / (hi - lo) : 0.5;
      if (extent_size(j) == 0) s = 0.0;
      scaled_gain.push_back(s);
    }
  }

  std::size_t extent_size(std::size_t j) const {
    std::size_t n = 0;
    for (const auto& row : inc) n += row[j] ? 1 : 0;
    return n;
  }

  // H(S) = -sum F ln(F/|S|) / |S|
  double entropy(const std::vector<std::size_t>& members) const {
    const double n = static_cast<double>(members.size());
    if (n == 0) return 0.0;
    double h = 0.0;
    for (std::size_t i : members) {
      if (population[i] > 0) h -= population[i] * std::log(population[i] / n);
    }
    return h / n;
  }

  double raw_gain(std::size_t j) const {
    std::vector<std::size_t> all;
    std::vector<std::size_t> plus;
    std::vector<std::size_t> minus;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      all.push_back(i);
      (inc[i][j] ? plus : minus).push_back(i);
    }
    const double n = static_cast<double>(all.size());
    return entropy(all) - plus.size() / n * entropy(plus) -
           minus.size() / n * entropy(minus);
  }

  double spc(SpecificityKind kind, std::size_t i, std::size_t j) const {
    const double w = inc[i][j] ? 1.0 : -1.0;
    const std::size_t k = extent_size(j);
    if (k == 0) return 0.0;
    switch (kind) {
      case SpecificityKind::kHorizontal:
        return w * std::exp(lambda * (1.0 - static_cast<double>(k)));
      case SpecificityKind::kVertical: {
        int m = 1 << 30;
        for (std::size_t r = 0; r < objects.size(); ++r) {
          if (inc[r][j]) m = std::min(m, layer[r]);
        }
        return w * m / static_cast<double>(depth);
      }
      case SpecificityKind::kInformational:
        return w * scaled_gain[j];
    }
    return 0.0;
  }

  std::size_t obj(const std::string& id) const {
    return static_cast<std::size_t>(std::find(objects.begin(), objects.end(), id) - objects.begin());
  }
  std::size_t prop(const std::string& id) const {
    return static_cast<std::size_t>(std::find(props.begin(), props.end(), id) - props.begin());
  }
};

// Direct double loop over the alignment for one object pair.
inline double reference_similarity(const ReferenceSpecificity& ra,
                                   const ReferenceSpecificity& rb,
                                   const std::string& a, const std::string& b,
                                   const PropertyAlignment& pm,
                                   SpecificityKind kind) {
  const std::size_t ia = ra.obj(a);
  const std::size_t ib = rb.obj(b);
  double na = 0;
  double nb = 0;
  for (bool x : ra.inc[ia]) na += x ? 1 : 0;
  for (bool x : rb.inc[ib]) nb += x ? 1 : 0;
  double sum = 0.0;
  for (const auto& pr : pm.pairs) {
    const std::size_t pa = ra.prop(pr.a);
    const std::size_t pb = rb.prop(pr.b);
    if (ra.inc[ia][pa] && rb.inc[ib][pb]) {
      sum += ra.spc(kind, ia, pa) / na + rb.spc(kind, ib, pb) / nb;
    }
  }
  return sum / 2.0;
}

// --- string metric oracles -------------------------------------------------

inline std::size_t naive_levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

inline std::size_t naive_lcs(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = a[i - 1] == b[j - 1] ? d[i - 1][j - 1] + 1
                                     : std::max(d[i - 1][j], d[i][j - 1]);
    }
  }
  return d[a.size()][b.size()];
}

// Schema-level corpus with a planted signal: a pair matches when all three
// property similarities exceed 0.35. The lexical columns carry a weak copy
// of the label buried in noise, so they help without replacing any sim.
inline FeatureCorpus planted_signal_corpus(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  FeatureCorpus c;
  c.level = Level::kSchema;
  c.manifest = FeatureManifest::for_level(Level::kSchema);
  c.manifest.unavailable.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const double h = rng.uniform();
    const double v = rng.uniform();
    const double inf = rng.uniform();
    const bool label = h > 0.35 && v > 0.35 && inf > 0.35;
    const double hint = label ? 0.3 : 0.0;
    FeatureVector fv;
    fv.pair = {"r" + std::to_string(i), "c" + std::to_string(i), Level::kSchema, label};
    fv.values = {h, v, inf};
    for (std::size_t k = 0; k < 5; ++k) fv.values.push_back(hint + 0.7 * rng.uniform());
    c.vectors.push_back(std::move(fv));
  }
  return c;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("etr-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static std::uint64_t& counter() {
    static std::uint64_t c = 0;
    return c;
  }
  std::filesystem::path path_;
};

}  // namespace etr::testing
