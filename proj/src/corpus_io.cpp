#include "etr/corpus_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "etr/errors.hpp"

namespace etr {

namespace {

constexpr int kFormatVersion = 1;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

// Parses `# etr-<kind> key=value ...`. Returns the key/value pairs.
std::vector<std::pair<std::string, std::string>> parse_header(
    const std::string& line, std::string_view kind) {
  std::istringstream ss(line);
  std::string hash;
  std::string tag;
  ss >> hash >> tag;
  if (hash != "#" || tag != fmt::format("etr-{}", kind)) {
    throw ParseError(fmt::format("expected '# etr-{}' header", kind), 1, 1);
  }
  std::vector<std::pair<std::string, std::string>> kv;
  std::string item;
  bool versioned = false;
  while (ss >> item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    if (kv.back().first == "format_version") {
      versioned = true;
      if (kv.back().second != std::to_string(kFormatVersion)) {
        throw FormatVersionMismatch(fmt::format(
            "unsupported {} format_version {}", kind, kv.back().second));
      }
    }
  }
  if (!versioned) {
    throw FormatVersionMismatch(fmt::format("{} header lacks format_version", kind));
  }
  return kv;
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_real(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(fmt::format("bad number '{}'", text));
  }
  return v;
}

void write_feature_corpus(const FeatureCorpus& corpus, std::ostream& out) {
  out << "# etr-features format_version=" << kFormatVersion
      << " level=" << to_string(corpus.level);
  if (!corpus.manifest.unavailable.empty()) {
    out << " unavailable=" << fmt::format("{}", fmt::join(corpus.manifest.unavailable, ","));
  }
  out << "\nref_id\tcand_id";
  for (const auto& n : corpus.manifest.names) out << '\t' << n;
  out << "\tlabel\n";
  for (const auto& v : corpus.vectors) {
    out << v.pair.ref_id << '\t' << v.pair.cand_id;
    for (double x : v.values) out << '\t' << format_real(x);
    out << '\t' << (v.pair.label ? (*v.pair.label ? "1" : "0") : "?") << '\n';
  }
}

FeatureCorpus read_feature_corpus(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty feature corpus");
  FeatureCorpus corpus;
  for (const auto& [k, v] : parse_header(line, "features")) {
    if (k == "level") corpus.level = parse_level(v);
    if (k == "unavailable" && !v.empty()) corpus.manifest.unavailable = split(v, ',');
  }
  if (!std::getline(in, line)) throw ParseError("feature corpus lacks column header", 2, 1);
  const auto cols = split(line, '\t');
  if (cols.size() < 4 || cols[0] != "ref_id" || cols[1] != "cand_id" ||
      cols.back() != "label") {
    throw ParseError("bad feature corpus column header", 2, 1);
  }
  corpus.manifest.names.assign(cols.begin() + 2, cols.end() - 1);
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, '\t');
    if (cells.size() != cols.size()) {
      throw ParseError(fmt::format("expected {} columns, found {}", cols.size(),
                                   cells.size()),
                       line_no, 1);
    }
    FeatureVector fv;
    fv.pair.ref_id = cells[0];
    fv.pair.cand_id = cells[1];
    fv.pair.level = corpus.level;
    for (std::size_t k = 2; k + 1 < cells.size(); ++k) {
      try {
        fv.values.push_back(parse_real(cells[k]));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line_no, k + 1);
      }
    }
    const std::string& label = cells.back();
    if (label == "1") {
      fv.pair.label = true;
    } else if (label == "0") {
      fv.pair.label = false;
    } else if (label != "?") {
      throw ParseError("label must be 1, 0 or ?", line_no, cells.size());
    }
    corpus.vectors.push_back(std::move(fv));
  }
  return corpus;
}

void save_feature_corpus(const FeatureCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
  write_feature_corpus(corpus, out);
}

FeatureCorpus load_feature_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  return read_feature_corpus(in);
}

void write_similarity_dump(const std::vector<SimilarityRecord>& records,
                           std::ostream& out) {
  out << "# etr-similarities format_version=" << kFormatVersion << '\n'
      << "object_a\tobject_b\tsim_h\tsim_v\tsim_i\tsim_h_n\tsim_v_n\tsim_i_n\n";
  for (const auto& r : records) {
    out << r.object_a << '\t' << r.object_b << '\t' << format_real(r.sim_h)
        << '\t' << format_real(r.sim_v) << '\t' << format_real(r.sim_i) << '\t'
        << format_real(r.sim_h_n) << '\t' << format_real(r.sim_v_n) << '\t'
        << format_real(r.sim_i_n) << '\n';
  }
}

AlignmentTruth read_alignment(std::istream& in) {
  AlignmentTruth truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.starts_with("# etr-alignment")) parse_header(line, "alignment");
      continue;
    }
    const auto cells = split(line, '\t');
    if (cells.size() != 2 || cells[0].empty() || cells[1].empty()) {
      throw ParseError("alignment lines must be 'ref_id<TAB>cand_id'", line_no, 1);
    }
    truth.emplace(cells[0], cells[1]);
  }
  return truth;
}

AlignmentTruth load_alignment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open alignment '{}'", path));
  return read_alignment(in);
}

void write_alignment(const AlignmentTruth& truth, std::ostream& out) {
  out << "# etr-alignment format_version=" << kFormatVersion << '\n';
  for (const auto& [a, b] : truth) out << a << '\t' << b << '\n';
}

}  // namespace etr
