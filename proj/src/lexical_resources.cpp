#include "etr/lexical_resources.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "etr/errors.hpp"
#include "etr/string_metrics.hpp"

namespace etr {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

//---------------------------------------------------------------------------
// Taxonomy

std::size_t Taxonomy::intern(const std::string& id) {
  auto [it, inserted] = index_.emplace(id, ids_.size());
  if (inserted) {
    ids_.push_back(id);
    parents_.emplace_back();
  }
  return it->second;
}

Taxonomy Taxonomy::parse(std::istream& in) {
  Taxonomy tax;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 3) {
      throw ParseError("taxonomy: expected 3 fields", line_no, 1);
    }
    if (tok[0] == "isa") {
      const std::size_t child = tax.intern(tok[1]);
      const std::size_t parent = tax.intern(tok[2]);
      if (child == parent) {
        throw ParseError("taxonomy: self loop on " + tok[1], line_no, 1);
      }
      tax.parents_[child].push_back(parent);
    } else if (tok[0] == "lemma") {
      const std::size_t node = tax.intern(tok[2]);
      tax.lemmas_[case_fold(tok[1])].push_back(node);
    } else {
      throw ParseError("taxonomy: unknown directive '" + tok[0] + "'",
                       line_no, 1);
    }
  }
  tax.finalize();
  return tax;
}

Taxonomy Taxonomy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open taxonomy '{}'", path));
  return parse(in);
}

void Taxonomy::finalize() {
  const std::size_t n = ids_.size();
  for (auto& p : parents_) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  for (auto& [word, nodes] : lemmas_) {
    std::sort(nodes.begin(), nodes.end(), [this](std::size_t a, std::size_t b) {
      return ids_[a] < ids_[b];
    });
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  }
  // Topological check (Kahn on child -> parent edges) and shortest depth via
  // BFS from the roots.
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t p : parents_[c]) {
      children[p].push_back(c);
      ++indegree[c];
    }
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) order.push_back(i);
  }
  if (n > 0 && order.empty()) throw ParseError("taxonomy: no root node");
  depth_.assign(n, 0);
  for (std::size_t r : order) depth_[r] = 1;
  auto pending = indegree;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t c : children[order[k]]) {
      if (--pending[c] == 0) order.push_back(c);
    }
  }
  if (order.size() != n) throw ParseError("taxonomy: hypernym cycle");
  std::vector<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) frontier.push_back(i);
  }
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t u : frontier) {
      for (std::size_t c : children[u]) {
        if (depth_[c] == 0) {
          depth_[c] = depth_[u] + 1;
          next.push_back(c);
        }
      }
    }
    frontier = std::move(next);
  }
}

bool Taxonomy::has_node(std::string_view id) const {
  return index_.contains(std::string(id));
}

int Taxonomy::depth(std::string_view node_id) const {
  auto it = index_.find(std::string(node_id));
  if (it == index_.end()) {
    throw UnknownId(fmt::format("taxonomy node '{}'", node_id));
  }
  return depth_[it->second];
}

std::vector<std::string> Taxonomy::senses(std::string_view word) const {
  std::vector<std::string> out;
  auto it = lemmas_.find(case_fold(word));
  if (it == lemmas_.end()) return out;
  for (std::size_t n : it->second) out.push_back(ids_[n]);
  return out;
}

std::vector<std::size_t> Taxonomy::ancestors_or_self(std::size_t node) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{node};
  std::vector<bool> seen(ids_.size(), false);
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    if (seen[u]) continue;
    seen[u] = true;
    out.push_back(u);
    for (std::size_t p : parents_[u]) stack.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double Taxonomy::node_similarity(std::size_t a, std::size_t b) const {
  const auto anc_a = ancestors_or_self(a);
  const auto anc_b = ancestors_or_self(b);
  std::vector<std::size_t> common;
  std::set_intersection(anc_a.begin(), anc_a.end(), anc_b.begin(),
                        anc_b.end(), std::back_inserter(common));
  int lcs_depth = 0;
  for (std::size_t c : common) lcs_depth = std::max(lcs_depth, depth_[c]);
  if (lcs_depth == 0) return 0.0;
  return 2.0 * lcs_depth / static_cast<double>(depth_[a] + depth_[b]);
}

double Taxonomy::wu_palmer(std::string_view word_a,
                           std::string_view word_b) const {
  auto ia = lemmas_.find(case_fold(word_a));
  auto ib = lemmas_.find(case_fold(word_b));
  if (ia == lemmas_.end() || ib == lemmas_.end()) return 0.0;
  double best = 0.0;
  for (std::size_t a : ia->second) {
    for (std::size_t b : ib->second) {
      best = std::max(best, node_similarity(a, b));
    }
  }
  return best;
}

namespace {

std::string taxonomy_key(const Taxonomy& tax, std::string_view label) {
  const auto tokens = tokenize_label(label);
  if (tokens.empty()) return {};
  std::string joined;
  for (const auto& t : tokens) {
    if (!joined.empty()) joined.push_back('_');
    joined += t;
  }
  if (!tax.senses(joined).empty()) return joined;
  return tokens.back();
}

}  // namespace

double taxonomy_sim(const Taxonomy& taxonomy, std::string_view a,
                    std::string_view b) {
  return taxonomy.wu_palmer(taxonomy_key(taxonomy, a),
                            taxonomy_key(taxonomy, b));
}

//---------------------------------------------------------------------------
// Embeddings

EmbeddingTable EmbeddingTable::parse(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  // Header.
  while (std::getline(in, line)) {
    ++line_no;
    if (split_ws(line).empty()) continue;
    break;
  }
  const auto header = split_ws(line);
  if (header.empty()) return table;
  std::size_t count = 0;
  std::size_t dim = 0;
  auto parse_size = [&](const std::string& s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  if (header.size() != 2 || !parse_size(header[0], count) ||
      !parse_size(header[1], dim)) {
    throw ParseError("embeddings: header must be '<count> <dim>'", line_no, 1);
  }
  if (dim == 0 && count > 0) {
    throw ParseError("embeddings: dimension must be positive", line_no, 1);
  }
  table.dim_ = dim;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != dim + 1) {
      throw DimensionMismatch(fmt::format(
          "embeddings: line {} has {} components, expected {}", line_no,
          tok.size() - 1, dim));
    }
    std::vector<float> vec(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      const std::string& s = tok[k + 1];
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), vec[k]);
      if (ec != std::errc() || ptr != s.data() + s.size() ||
          !std::isfinite(vec[k])) {
        throw ParseError("embeddings: bad component '" + s + "'", line_no,
                         k + 2);
      }
    }
    ++rows;
    auto [it, inserted] =
        table.index_.emplace(case_fold(tok[0]), table.data_.size() / dim);
    if (inserted) table.data_.insert(table.data_.end(), vec.begin(), vec.end());
  }
  if (rows != count) {
    throw ParseError(fmt::format("embeddings: header announces {} rows, found {}",
                                 count, rows));
  }
  return table;
}

EmbeddingTable EmbeddingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open embeddings '{}'", path));
  return parse(in);
}

const float* EmbeddingTable::find(std::string_view word) const {
  auto it = index_.find(case_fold(word));
  if (it == index_.end()) return nullptr;
  return data_.data() + it->second * dim_;
}

std::vector<double> EmbeddingTable::mean_vector(
    const std::vector<std::string>& tokens) const {
  std::vector<double> sum;
  std::size_t hits = 0;
  for (const auto& t : tokens) {
    const float* v = find(t);
    if (v == nullptr) continue;
    if (sum.empty()) sum.assign(dim_, 0.0);
    for (std::size_t k = 0; k < dim_; ++k) sum[k] += v[k];
    ++hits;
  }
  for (double& x : sum) x /= static_cast<double>(hits);
  return sum;
}

double EmbeddingTable::cosine(const std::vector<double>& a,
                              const std::vector<double>& b) const {
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

double embedding_sim(const EmbeddingTable& table, std::string_view a,
                     std::string_view b) {
  return table.cosine(table.mean_vector(tokenize_label(a)),
                      table.mean_vector(tokenize_label(b)));
}

}  // namespace etr
