#include "etr/string_metrics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstdint>
#include <stdexcept>

namespace etr {

std::string case_fold(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<std::string> tokenize_label(std::string_view label) {
  enum class Cls { kSep, kLower, kUpper, kDigit, kOther };
  auto classify = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    if (std::islower(u)) return Cls::kLower;
    if (std::isupper(u)) return Cls::kUpper;
    if (std::isdigit(u)) return Cls::kDigit;
    if (c == '_' || c == '-' || c == '.' || std::isspace(u)) return Cls::kSep;
    return Cls::kOther;
  };
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(case_fold(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < label.size(); ++i) {
    const char c = label[i];
    const Cls cls = classify(c);
    if (cls == Cls::kSep) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      const Cls prev = classify(cur.back());
      const bool next_lower =
          i + 1 < label.size() && classify(label[i + 1]) == Cls::kLower;
      const bool boundary =
          (cls == Cls::kUpper && prev == Cls::kLower) ||
          (cls == Cls::kUpper && prev == Cls::kUpper && next_lower) ||
          (cls == Cls::kDigit) != (prev == Cls::kDigit);
      if (boundary) flush();
    }
    cur.push_back(c);
  }
  flush();
  return tokens;
}

std::string normalize_label(std::string_view label) {
  std::string out;
  for (const auto& t : tokenize_label(label)) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

double ngram_sim(std::string_view a, std::string_view b, std::size_t n) {
  if (n < 1 || n > 7) throw std::invalid_argument("ngram size must be in [1, 7]");
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  // 9 bits per symbol; 256 is the padding sentinel.
  auto grams = [n](std::string_view s) {
    std::vector<std::uint32_t> sym;
    sym.reserve(s.size() + 2 * (n - 1));
    sym.insert(sym.end(), n - 1, 256U);
    for (char c : s) {
      sym.push_back(static_cast<unsigned char>(
          std::tolower(static_cast<unsigned char>(c))));
    }
    sym.insert(sym.end(), n - 1, 256U);
    std::vector<std::uint64_t> out;
    out.reserve(sym.size() - n + 1);
    for (std::size_t i = 0; i + n <= sym.size(); ++i) {
      std::uint64_t code = 0;
      for (std::size_t k = 0; k < n; ++k) code = (code << 9) | sym[i + k];
      out.push_back(code);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto ga = grams(a);
  const auto gb = grams(b);
  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < ga.size() && j < gb.size();) {
    if (ga[i] == gb[j]) {
      ++common;
      ++i;
      ++j;
    } else if (ga[i] < gb[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return 2.0 * static_cast<double>(common) /
         static_cast<double>(ga.size() + gb.size());
}

namespace {

using PeqTable = std::array<std::uint64_t, 256>;

PeqTable build_peq(std::string_view pattern) {
  PeqTable peq{};
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    peq[static_cast<unsigned char>(pattern[i])] |= std::uint64_t{1} << i;
  }
  return peq;
}

// Myers/Hyyro bit-vector edit distance; |pattern| in [1, 64].
std::size_t levenshtein_bitparallel(std::string_view pattern,
                                    std::string_view text) {
  const std::size_t m = pattern.size();
  const PeqTable peq = build_peq(pattern);
  const std::uint64_t last = std::uint64_t{1} << (m - 1);
  std::uint64_t pv = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  std::uint64_t mv = 0;
  std::size_t score = m;
  for (char c : text) {
    const std::uint64_t eq = peq[static_cast<unsigned char>(c)];
    const std::uint64_t xv = eq | mv;
    const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
    std::uint64_t ph = mv | ~(xh | pv);
    std::uint64_t mh = pv & xh;
    if (ph & last) {
      ++score;
    } else if (mh & last) {
      --score;
    }
    ph = (ph << 1) | 1U;
    mh <<= 1;
    pv = mh | ~(xv | ph);
    mv = ph & xv;
  }
  return score;
}

std::size_t levenshtein_rows(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Allison-Dix / Hyyro bit-vector LCS; |pattern| in [1, 64].
std::size_t lcs_bitparallel(std::string_view pattern, std::string_view text) {
  const std::size_t m = pattern.size();
  const PeqTable peq = build_peq(pattern);
  const std::uint64_t mask =
      m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  std::uint64_t v = ~std::uint64_t{0};
  for (char c : text) {
    const std::uint64_t u = v & peq[static_cast<unsigned char>(c)];
    v = (v + u) | (v - u);
  }
  return m - static_cast<std::size_t>(std::popcount(v & mask));
}

std::size_t lcs_rows(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return b.size();
  if (a.size() <= 64) return levenshtein_bitparallel(a, b);
  return levenshtein_rows(a, b);
}

std::size_t lcs_length(std::string_view a, std::string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return 0;
  if (a.size() <= 64) return lcs_bitparallel(a, b);
  return lcs_rows(a, b);
}

double levenshtein_sim(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein_distance(a, b)) /
                   static_cast<double>(longest);
}

double lcs_sim(std::string_view a, std::string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(lcs_length(a, b)) /
         static_cast<double>(total);
}

}  // namespace etr
