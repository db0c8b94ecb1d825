#pragma once
// Language resources for the taxonomy (Wu-Palmer) and embedding (cosine)
// label features.
//
// Taxonomy file, one directive per line, `#` starts a comment:
//   isa <child_node> <parent_node>
//   lemma <word> <node>
// Nodes are created on first mention. Lemmas are case-folded.
//
// Embedding file: first line `<count> <dim>`, then `count` lines of
// `<word> v1 ... v_dim`. Words are case-folded; the first occurrence wins.
// An empty file is a valid, empty table.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace etr {

class Taxonomy {
 public:
  static Taxonomy parse(std::istream& in);
  static Taxonomy load(const std::string& path);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t lemma_count() const { return lemmas_.size(); }
  bool has_node(std::string_view id) const;
  // Root depth is 1; otherwise 1 + shortest distance to a root.
  int depth(std::string_view node_id) const;
  // Node ids a word maps to (case-folded lookup), sorted.
  std::vector<std::string> senses(std::string_view word) const;
  // max over sense pairs of 2 depth(lcs) / (depth(a) + depth(b)); 0 when a
  // word has no sense or the senses share no ancestor.
  double wu_palmer(std::string_view word_a, std::string_view word_b) const;
  double node_similarity(std::size_t a, std::size_t b) const;

 private:
  std::size_t intern(const std::string& id);
  void finalize();
  std::vector<std::size_t> ancestors_or_self(std::size_t node) const;

  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<int> depth_;
  std::unordered_map<std::string, std::vector<std::size_t>> lemmas_;
};

class EmbeddingTable {
 public:
  static EmbeddingTable parse(std::istream& in);
  static EmbeddingTable load(const std::string& path);

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return index_.size(); }
  // nullptr when the (case-folded) word is absent.
  const float* find(std::string_view word) const;
  // Cosine of the two vectors, clamped to [0, 1]; 0 if either is zero.
  double cosine(const std::vector<double>& a, const std::vector<double>& b) const;
  // Mean vector of the in-vocabulary tokens; empty when none are present.
  std::vector<double> mean_vector(const std::vector<std::string>& tokens) const;

 private:
  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Label-level language features. Labels are tokenized first.
//
// Taxonomy lookup tries the whole label (tokens joined by '_') and falls
// back to its last token.
double taxonomy_sim(const Taxonomy& taxonomy, std::string_view a,
                    std::string_view b);
// Cosine of the mean token vectors; 0 if either side is fully
// out-of-vocabulary.
double embedding_sim(const EmbeddingTable& table, std::string_view a,
                     std::string_view b);

}  // namespace etr
