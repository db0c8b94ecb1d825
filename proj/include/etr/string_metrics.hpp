#pragma once
// String similarity metrics on labels. All return values in [0, 1] and are
// symmetric in their arguments. Strings are handled as byte sequences; case
// folding is ASCII-only.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace etr {

std::string case_fold(std::string_view s);

// Splits a code-like label on camelCase humps, digit boundaries, underscores,
// hyphens, dots and whitespace; returns lower-cased tokens.
//   "locatedIn" -> {"located", "in"}, "has_ISBN10" -> {"has", "isbn", "10"}
std::vector<std::string> tokenize_label(std::string_view label);

// Tokens joined by single spaces.
std::string normalize_label(std::string_view label);

// Dice coefficient over the padded character n-gram bags of the case-folded
// inputs. Each side is padded with n-1 sentinel symbols. Both empty -> 1,
// exactly one empty -> 0. `n` must lie in [1, 7].
double ngram_sim(std::string_view a, std::string_view b, std::size_t n = 3);

// Bit-parallel when the shorter input has at most 64 bytes, row DP otherwise.
std::size_t levenshtein_distance(std::string_view a, std::string_view b);
std::size_t lcs_length(std::string_view a, std::string_view b);

// 1 - dist / max(|a|, |b|); both empty -> 1.
double levenshtein_sim(std::string_view a, std::string_view b);
// 2 |LCS| / (|a| + |b|); both empty -> 1.
double lcs_sim(std::string_view a, std::string_view b);

}  // namespace etr
