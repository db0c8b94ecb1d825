#include "etr/turtle.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "etr/errors.hpp"

namespace etr {

namespace {

constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

std::string vocab(std::string_view ns, std::string_view local) {
  return std::string(ns) + std::string(local);
}

//---------------------------------------------------------------------------
// Lexer

enum class Tok {
  kEof,
  kIri,
  kPname,
  kBlank,
  kString,
  kNumber,
  kBoolean,
  kLangTag,
  kA,
  kPrefixDirective,  // @prefix
  kBaseDirective,    // @base
  kSparqlPrefix,     // PREFIX
  kSparqlBase,       // BASE
  kDot,
  kSemicolon,
  kComma,
  kCaretCaret,
  kLBracket,
  kRBracket,
  kLParen,
  kRParen,
};

struct Token {
  Tok kind = Tok::kEof;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_name_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '-' || c == '.' || c == ':' ||
         c == '%' || c == '\\' || u >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    if (pos_ >= text_.size()) return tok;
    const char c = text_[pos_];
    switch (c) {
      case '.':
        advance();
        tok.kind = Tok::kDot;
        return tok;
      case ';':
        advance();
        tok.kind = Tok::kSemicolon;
        return tok;
      case ',':
        advance();
        tok.kind = Tok::kComma;
        return tok;
      case '[':
        advance();
        tok.kind = Tok::kLBracket;
        return tok;
      case ']':
        advance();
        tok.kind = Tok::kRBracket;
        return tok;
      case '(':
        advance();
        tok.kind = Tok::kLParen;
        return tok;
      case ')':
        advance();
        tok.kind = Tok::kRParen;
        return tok;
      case '<':
        return lex_iri(tok);
      case '"':
      case '\'':
        return lex_string(tok, c);
      case '@':
        return lex_at(tok);
      case '^':
        if (peek(1) == '^') {
          advance();
          advance();
          tok.kind = Tok::kCaretCaret;
          return tok;
        }
        break;
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '+' || c == '-' || c == '.') &&
         std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return lex_number(tok);
    }
    if (c == '_' && peek(1) == ':') return lex_blank(tok);
    if (is_name_char(c)) return lex_name(tok);
    fail(fmt::format("unexpected character '{}'", c));
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("turtle: " + what, line_, column_);
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token lex_iri(Token tok) {
    advance();  // <
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated IRI");
      const char c = peek();
      if (c == '>') break;
      if (c == '\n' || c == ' ') fail("whitespace inside IRI");
      if (c == '\\') {
        advance();
        tok.text += read_unicode_escape();
        continue;
      }
      tok.text.push_back(c);
      advance();
    }
    advance();  // >
    tok.kind = Tok::kIri;
    return tok;
  }

  std::string read_unicode_escape() {
    const char kind = peek();
    std::size_t digits = 0;
    if (kind == 'u') digits = 4;
    if (kind == 'U') digits = 8;
    if (digits == 0) fail("bad escape sequence");
    advance();
    char32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char h = peek();
      if (!std::isxdigit(static_cast<unsigned char>(h))) {
        fail("bad unicode escape");
      }
      cp = cp * 16 + static_cast<char32_t>(
                         std::isdigit(static_cast<unsigned char>(h))
                             ? h - '0'
                             : std::tolower(static_cast<unsigned char>(h)) -
                                   'a' + 10);
      advance();
    }
    std::string out;
    append_utf8(out, cp);
    return out;
  }

  Token lex_string(Token tok, char quote) {
    const bool long_form = peek(1) == quote && peek(2) == quote;
    advance();
    if (long_form) {
      advance();
      advance();
    }
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string literal");
      const char c = peek();
      if (long_form) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          advance();
          advance();
          advance();
          break;
        }
      } else {
        if (c == quote) {
          advance();
          break;
        }
        if (c == '\n') fail("newline in short string literal");
      }
      if (c == '\\') {
        advance();
        const char e = peek();
        switch (e) {
          case 't': tok.text.push_back('\t'); advance(); break;
          case 'n': tok.text.push_back('\n'); advance(); break;
          case 'r': tok.text.push_back('\r'); advance(); break;
          case 'b': tok.text.push_back('\b'); advance(); break;
          case 'f': tok.text.push_back('\f'); advance(); break;
          case '"': tok.text.push_back('"'); advance(); break;
          case '\'': tok.text.push_back('\''); advance(); break;
          case '\\': tok.text.push_back('\\'); advance(); break;
          default: tok.text += read_unicode_escape(); break;
        }
        continue;
      }
      tok.text.push_back(c);
      advance();
    }
    tok.kind = Tok::kString;
    return tok;
  }

  Token lex_at(Token tok) {
    advance();  // @
    std::string word;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') {
      word.push_back(peek());
      advance();
    }
    if (word.empty()) fail("empty language tag");
    if (word == "prefix") {
      tok.kind = Tok::kPrefixDirective;
    } else if (word == "base") {
      tok.kind = Tok::kBaseDirective;
    } else {
      tok.kind = Tok::kLangTag;
      tok.text = word;
    }
    return tok;
  }

  Token lex_number(Token tok) {
    auto take_digits = [&] {
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        tok.text.push_back(peek());
        advance();
      }
    };
    if (peek() == '+' || peek() == '-') {
      tok.text.push_back(peek());
      advance();
    }
    take_digits();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      tok.text.push_back('.');
      advance();
      take_digits();
    }
    if (peek() == 'e' || peek() == 'E') {
      tok.text.push_back(peek());
      advance();
      if (peek() == '+' || peek() == '-') {
        tok.text.push_back(peek());
        advance();
      }
      take_digits();
    }
    tok.kind = Tok::kNumber;
    return tok;
  }

  std::string read_name() {
    std::string word;
    while (pos_ < text_.size() && is_name_char(peek())) {
      if (peek() == '\\') {
        advance();
        if (pos_ >= text_.size()) fail("dangling escape in name");
      }
      word.push_back(peek());
      advance();
    }
    // A trailing dot terminates the statement instead.
    while (!word.empty() && word.back() == '.') {
      word.pop_back();
      --pos_;
      --column_;
    }
    return word;
  }

  Token lex_blank(Token tok) {
    advance();
    advance();
    std::string label = read_name();
    if (label.empty()) fail("empty blank node label");
    tok.kind = Tok::kBlank;
    tok.text = "_:" + label;
    return tok;
  }

  Token lex_name(Token tok) {
    std::string word = read_name();
    if (word.empty()) fail("empty name");
    auto upper = word;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char ch) { return std::toupper(ch); });
    if (word == "a") {
      tok.kind = Tok::kA;
    } else if (word == "true" || word == "false") {
      tok.kind = Tok::kBoolean;
      tok.text = word;
    } else if (upper == "PREFIX") {
      tok.kind = Tok::kSparqlPrefix;
    } else if (upper == "BASE") {
      tok.kind = Tok::kSparqlBase;
    } else if (word.find(':') != std::string::npos) {
      tok.kind = Tok::kPname;
      tok.text = word;
    } else {
      fail(fmt::format("unexpected bare word '{}'", word));
    }
    return tok;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

//---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  TurtleDocument run() {
    while (cur_.kind != Tok::kEof) statement();
    return std::move(doc_);
  }

 private:
  void shift() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("turtle: " + what, cur_.line, cur_.column);
  }

  void expect(Tok kind, std::string_view what) {
    if (cur_.kind != kind) fail(fmt::format("expected {}", what));
    shift();
  }

  void statement() {
    switch (cur_.kind) {
      case Tok::kPrefixDirective:
        shift();
        prefix_body();
        expect(Tok::kDot, "'.' after @prefix");
        return;
      case Tok::kSparqlPrefix:
        shift();
        prefix_body();
        return;
      case Tok::kBaseDirective:
        shift();
        expect(Tok::kIri, "IRI after @base");
        expect(Tok::kDot, "'.' after @base");
        return;
      case Tok::kSparqlBase:
        shift();
        expect(Tok::kIri, "IRI after BASE");
        return;
      default:
        break;
    }
    RdfTerm subject = subject_term();
    predicate_object_list(subject);
    expect(Tok::kDot, "'.' at end of statement");
  }

  void prefix_body() {
    if (cur_.kind != Tok::kPname || cur_.text.back() != ':') {
      fail("expected prefix name ending in ':'");
    }
    std::string name = cur_.text.substr(0, cur_.text.size() - 1);
    shift();
    if (cur_.kind != Tok::kIri) fail("expected namespace IRI");
    prefixes_[name] = cur_.text;
    auto it = std::find_if(doc_.prefixes.begin(), doc_.prefixes.end(),
                           [&](const auto& p) { return p.first == name; });
    if (it == doc_.prefixes.end()) {
      doc_.prefixes.emplace_back(name, cur_.text);
    } else {
      it->second = cur_.text;
    }
    shift();
  }

  std::string expand(const std::string& pname) const {
    const auto colon = pname.find(':');
    const std::string prefix = pname.substr(0, colon);
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) {
      fail(fmt::format("undeclared prefix '{}'", prefix));
    }
    return it->second + pname.substr(colon + 1);
  }

  RdfTerm iri_term() {
    RdfTerm t;
    if (cur_.kind == Tok::kIri) {
      t.value = cur_.text;
    } else if (cur_.kind == Tok::kPname) {
      t.value = expand(cur_.text);
    } else {
      fail("expected IRI");
    }
    shift();
    return t;
  }

  RdfTerm subject_term() {
    if (cur_.kind == Tok::kBlank) {
      RdfTerm t{RdfTerm::Kind::kBlank, cur_.text};
      shift();
      return t;
    }
    if (cur_.kind == Tok::kLBracket || cur_.kind == Tok::kLParen) {
      fail("anonymous blank nodes and collections are not supported");
    }
    return iri_term();
  }

  void predicate_object_list(const RdfTerm& subject) {
    while (true) {
      RdfTerm predicate;
      if (cur_.kind == Tok::kA) {
        predicate.value = vocab(kRdf, "type");
        shift();
      } else {
        predicate = iri_term();
      }
      while (true) {
        doc_.triples.push_back({subject, predicate, object_term()});
        if (cur_.kind != Tok::kComma) break;
        shift();
      }
      if (cur_.kind != Tok::kSemicolon) return;
      while (cur_.kind == Tok::kSemicolon) shift();
      if (cur_.kind == Tok::kDot) return;
    }
  }

  RdfTerm object_term() {
    switch (cur_.kind) {
      case Tok::kBlank:
        return subject_term();
      case Tok::kString: {
        RdfTerm t{RdfTerm::Kind::kLiteral, cur_.text};
        shift();
        if (cur_.kind == Tok::kLangTag) {
          shift();
        } else if (cur_.kind == Tok::kCaretCaret) {
          shift();
          iri_term();
        }
        return t;
      }
      case Tok::kNumber:
      case Tok::kBoolean: {
        RdfTerm t{RdfTerm::Kind::kLiteral, cur_.text};
        shift();
        return t;
      }
      case Tok::kLBracket:
      case Tok::kLParen:
        fail("anonymous blank nodes and collections are not supported");
      default:
        return iri_term();
    }
  }

  Lexer lexer_;
  Token cur_;
  std::map<std::string, std::string> prefixes_;
  TurtleDocument doc_;
};

std::string local_name(const std::string& iri) {
  const auto cut = iri.find_last_of("#/:");
  if (cut == std::string::npos || cut + 1 >= iri.size()) return iri;
  return iri.substr(cut + 1);
}

bool in_namespace(const std::string& iri) {
  return iri.starts_with(kRdf) || iri.starts_with(kRdfs) ||
         iri.starts_with(kOwl) || iri.starts_with(kXsd);
}

}  // namespace

TurtleDocument parse_turtle(std::string_view text) {
  return Parser(text).run();
}

std::string compact_iri(
    const std::string& iri,
    const std::vector<std::pair<std::string, std::string>>& prefixes) {
  const std::pair<std::string, std::string>* best = nullptr;
  for (const auto& p : prefixes) {
    if (p.second.empty() || !iri.starts_with(p.second)) continue;
    if (best == nullptr || p.second.size() > best->second.size()) best = &p;
  }
  if (best == nullptr) return iri;
  return best->first + ":" + iri.substr(best->second.size());
}

TurtleImport import_turtle(std::string_view text,
                           const TurtleOptions& options) {
  TurtleDocument doc = parse_turtle(text);

  const std::string rdf_type = vocab(kRdf, "type");
  const std::string sub_class_of = vocab(kRdfs, "subClassOf");
  const std::string domain = vocab(kRdfs, "domain");
  const std::string label = vocab(kRdfs, "label");
  const std::set<std::string> class_types = {vocab(kRdfs, "Class"),
                                             vocab(kOwl, "Class")};
  const std::set<std::string> property_types = {
      vocab(kRdf, "Property"),
      vocab(kOwl, "ObjectProperty"),
      vocab(kOwl, "DatatypeProperty"),
      vocab(kOwl, "FunctionalProperty"),
      vocab(kOwl, "InverseFunctionalProperty"),
      vocab(kOwl, "TransitiveProperty"),
      vocab(kOwl, "SymmetricProperty")};
  const std::string named_individual = vocab(kOwl, "NamedIndividual");

  // First pass: the schema vocabulary.
  std::set<std::string> classes;
  std::set<std::string> properties;
  std::map<std::string, std::set<std::string>> class_props;
  std::map<std::string, std::set<std::string>> class_parents;
  std::map<std::string, std::string> labels;
  for (const auto& t : doc.triples) {
    const std::string& s = t.subject.value;
    const std::string& p = t.predicate.value;
    const std::string& o = t.object.value;
    const bool object_iri = t.object.kind != RdfTerm::Kind::kLiteral;
    if (p == rdf_type && object_iri) {
      if (class_types.contains(o)) classes.insert(s);
      if (property_types.contains(o)) properties.insert(s);
    } else if (p == sub_class_of && object_iri) {
      classes.insert(s);
      classes.insert(o);
      class_parents[s].insert(o);
    } else if (p == domain && object_iri) {
      properties.insert(s);
      classes.insert(o);
      class_props[o].insert(s);
    } else if (p == label && !object_iri) {
      labels.emplace(s, o);
    }
  }

  // Second pass: instance data.
  TurtleImport result;
  result.report.triples = doc.triples.size();
  std::map<std::string, std::set<std::string>> entity_types;
  std::map<std::string, std::set<std::string>> entity_props;
  for (const auto& t : doc.triples) {
    const std::string& s = t.subject.value;
    const std::string& p = t.predicate.value;
    const std::string& o = t.object.value;
    const bool object_iri = t.object.kind != RdfTerm::Kind::kLiteral;
    if (p == sub_class_of || p == domain || p == label) {
      if (p == label || object_iri) continue;
      ++result.report.ignored_predicates;
      continue;
    }
    if (p == rdf_type) {
      if (!object_iri) {
        ++result.report.ignored_predicates;
      } else if (class_types.contains(o) || property_types.contains(o)) {
        // schema declaration, handled above
      } else if (o == named_individual) {
        if (!classes.contains(s) && !properties.contains(s)) {
          entity_types[s];
        }
      } else if (in_namespace(o) || classes.contains(s) ||
                 properties.contains(s)) {
        ++result.report.ignored_predicates;
      } else {
        classes.insert(o);
        entity_types[s].insert(o);
      }
      continue;
    }
    const bool known = properties.contains(p) ||
                       (options.accept_undeclared_predicates &&
                        !in_namespace(p));
    if (!known || classes.contains(s) || properties.contains(s)) {
      ++result.report.ignored_predicates;
      continue;
    }
    properties.insert(p);
    entity_props[s].insert(p);
    entity_types[s];
  }

  auto id_of = [&](const std::string& iri) {
    return compact_iri(iri, doc.prefixes);
  };
  auto label_of = [&](const std::string& iri) {
    auto it = labels.find(iri);
    return it != labels.end() ? it->second : local_name(iri);
  };
  auto ids_of = [&](const std::set<std::string>& iris) {
    std::vector<std::string> out;
    for (const auto& i : iris) out.push_back(id_of(i));
    return out;
  };

  std::vector<Property> props;
  for (const auto& p : properties) props.push_back({id_of(p), label_of(p)});
  std::vector<Etype> etypes;
  for (const auto& c : classes) {
    Etype e;
    e.id = id_of(c);
    e.label = label_of(c);
    if (auto it = class_props.find(c); it != class_props.end()) {
      e.property_ids = ids_of(it->second);
    }
    if (auto it = class_parents.find(c); it != class_parents.end()) {
      e.parent_ids = ids_of(it->second);
    }
    etypes.push_back(std::move(e));
  }
  std::vector<Entity> entities;
  for (const auto& [iri, types] : entity_types) {
    if (classes.contains(iri) || properties.contains(iri)) continue;
    Entity en;
    en.id = id_of(iri);
    en.label = label_of(iri);
    en.etype_ids = ids_of(types);
    if (auto it = entity_props.find(iri); it != entity_props.end()) {
      en.property_ids = ids_of(it->second);
    }
    entities.push_back(std::move(en));
  }
  std::string ontology_id;
  for (const auto& t : doc.triples) {
    if (t.predicate.value == rdf_type &&
        t.object.value == vocab(kOwl, "Ontology")) {
      ontology_id = id_of(t.subject.value);
      break;
    }
  }
  result.ontology = Ontology::build(std::move(ontology_id), std::move(props),
                                    std::move(etypes), std::move(entities));
  return result;
}

}  // namespace etr
