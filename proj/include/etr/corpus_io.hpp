#pragma once
// Text formats for feature corpora, similarity dumps and ground-truth
// alignments. Every file starts with a `# etr-<kind> format_version=1 ...`
// line; columns are tab separated and reals use the shortest representation
// that round-trips exactly.

#include <iosfwd>
#include <string>
#include <vector>

#include "etr/pipeline.hpp"
#include "etr/similarity.hpp"

namespace etr {

std::string format_real(double value);
double parse_real(std::string_view text);

// Header line: `ref_id cand_id <manifest...> label`; label is 1, 0 or `?`.
void write_feature_corpus(const FeatureCorpus& corpus, std::ostream& out);
FeatureCorpus read_feature_corpus(std::istream& in);
void save_feature_corpus(const FeatureCorpus& corpus, const std::string& path);
FeatureCorpus load_feature_corpus(const std::string& path);

// Columns: object_a object_b sim_h sim_v sim_i sim_h_n sim_v_n sim_i_n.
void write_similarity_dump(const std::vector<SimilarityRecord>& records,
                           std::ostream& out);

// One `ref_id<TAB>cand_id` pair per line; `#` lines are comments. A header
// line, when present, must announce format_version=1.
AlignmentTruth read_alignment(std::istream& in);
AlignmentTruth load_alignment(const std::string& path);
void write_alignment(const AlignmentTruth& truth, std::ostream& out);

}  // namespace etr
