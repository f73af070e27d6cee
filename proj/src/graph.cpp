#include "graphmpc/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "graphmpc/errors.hpp"

namespace graphmpc {

namespace {

constexpr const char* kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Cuts a trailing comment, honoring quoted strings and <...> IRIs.
// A '<' opens an IRI only when glued to its body; standalone '<' and '<='
// are comparison operators in FILTER lines.
bool opens_iri(const std::string& line, std::size_t i) {
  return line[i] == '<' && i + 1 < line.size() && line[i + 1] != '=' &&
         !std::isspace(static_cast<unsigned char>(line[i + 1]));
}

std::string strip_comment(const std::string& line) {
  bool in_quote = false, in_iri = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quote) {
      if (c == '\\') ++i;
      else if (c == '"') in_quote = false;
    } else if (in_iri) {
      if (c == '>') in_iri = false;
    } else if (c == '"') {
      in_quote = true;
    } else if (opens_iri(line, i)) {
      in_iri = true;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::vector<std::string> tokenize(const std::string& line, int line_no) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (opens_iri(line, i)) {
      const std::size_t end = line.find('>', i);
      if (end == std::string::npos) fail(line_no, "unterminated IRI");
      i = end + 1;
    } else if (line[i] == '"') {
      ++i;
      while (i < line.size() && line[i] != '"') {
        if (line[i] == '\\') ++i;
        ++i;
      }
      if (i >= line.size()) fail(line_no, "unterminated string literal");
      ++i;
    }
    // Extend over any bare tail (unit suffix, prefixed-name body).
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_number(const std::string& lexical, double* out) {
  if (lexical.empty()) return false;
  const char* begin = lexical.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + lexical.size()) return false;
  *out = v;
  return true;
}

bool valid_unit(const std::string& u) {
  if (u.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(u[0]))) return false;
  return std::all_of(u.begin(), u.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

std::string unescape(const std::string& s, int line_no) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i >= s.size()) fail(line_no, "dangling escape in string literal");
    switch (s[i]) {
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      default: fail(line_no, "unsupported escape in string literal");
    }
  }
  return out;
}

struct TermParser {
  std::map<std::string, std::string> prefixes = builtin_prefixes();
  bool allow_variables = false;

  Term parse(const std::string& tok, int line_no, bool predicate_pos) const {
    if (tok.empty()) fail(line_no, "empty term");

    if (tok[0] == '<') {
      if (tok.back() != '>')
        fail(line_no, "junk after IRI: '" + tok + "'");
      return Term::iri(tok.substr(1, tok.size() - 2));
    }

    if (tok[0] == '?') {
      if (!allow_variables)
        fail(line_no, "variables are not allowed in data documents");
      const std::string name = tok.substr(1);
      if (name.empty()) fail(line_no, "variable needs a name");
      return Term::variable(name);
    }

    if (tok[0] == '"') {
      const std::size_t close = tok.rfind('"');
      if (close == 0) fail(line_no, "unterminated string literal");
      const std::string lexical = unescape(tok.substr(1, close - 1), line_no);
      std::string unit;
      const std::string tail = tok.substr(close + 1);
      if (!tail.empty()) {
        if (tail.rfind("^^", 0) != 0 || !valid_unit(tail.substr(2)))
          fail(line_no, "malformed unit annotation: '" + tok + "'");
        unit = tail.substr(2);
      }
      Term t = Term::literal(lexical, unit);
      double v;
      if (parse_number(lexical, &v)) t.number = v;
      return t;
    }

    if (tok == "a") {
      if (!predicate_pos)
        fail(line_no, "'a' is only valid as a predicate");
      return Term::iri(kRdfType);
    }

    // Numeric literal, optionally unit-annotated.
    std::string body = tok, unit;
    if (const std::size_t caret = tok.find("^^");
        caret != std::string::npos) {
      body = tok.substr(0, caret);
      unit = tok.substr(caret + 2);
      if (!valid_unit(unit))
        fail(line_no, "malformed unit annotation: '" + tok + "'");
    }
    double v;
    if (parse_number(body, &v)) {
      Term t = Term::literal(body, unit);
      t.number = v;
      return t;
    }
    if (!unit.empty())
      fail(line_no, "unit annotation on a non-numeric bare token: '" + tok +
                        "'");

    // Prefixed name.
    const std::size_t colon = tok.find(':');
    if (colon == std::string::npos)
      fail(line_no, "unrecognized token: '" + tok + "'");
    const std::string prefix = tok.substr(0, colon);
    const auto it = prefixes.find(prefix);
    if (it == prefixes.end())
      fail(line_no, "undeclared prefix: '" + prefix + ":'");
    return Term::iri(it->second + tok.substr(colon + 1));
  }

  void handle_prefix_line(const std::vector<std::string>& toks, int line_no) {
    if (toks.size() != 4 || toks[3] != "." || toks[1].empty() ||
        toks[1].back() != ':' || toks[2].size() < 2 || toks[2][0] != '<' ||
        toks[2].back() != '>')
      fail(line_no, "malformed @prefix declaration");
    prefixes[toks[1].substr(0, toks[1].size() - 1)] =
        toks[2].substr(1, toks[2].size() - 2);
  }
};

FilterOp parse_filter_op(const std::string& s, int line_no) {
  if (s == "=") return FilterOp::kEq;
  if (s == "!=") return FilterOp::kNe;
  if (s == "<") return FilterOp::kLt;
  if (s == "<=") return FilterOp::kLe;
  if (s == ">") return FilterOp::kGt;
  if (s == ">=") return FilterOp::kGe;
  fail(line_no, "unknown filter operator: '" + s + "'");
}

bool apply_filter_op(FilterOp op, double lhs, double rhs) {
  switch (op) {
    case FilterOp::kEq: return lhs == rhs;
    case FilterOp::kNe: return lhs != rhs;
    case FilterOp::kLt: return lhs < rhs;
    case FilterOp::kLe: return lhs <= rhs;
    case FilterOp::kGt: return lhs > rhs;
    case FilterOp::kGe: return lhs >= rhs;
  }
  return false;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Term Term::iri(std::string v) {
  Term t;
  t.kind = TermKind::kIri;
  t.value = std::move(v);
  return t;
}

Term Term::literal(std::string lexical, std::string unit) {
  Term t;
  t.kind = TermKind::kLiteral;
  t.value = std::move(lexical);
  t.unit = std::move(unit);
  return t;
}

Term Term::number_literal(double v, std::string unit) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  Term t = literal(buf, std::move(unit));
  t.number = v;
  return t;
}

Term Term::variable(std::string name) {
  Term t;
  t.kind = TermKind::kVariable;
  t.value = std::move(name);
  return t;
}

bool Graph::insert(Triple t) {
  if (t.s.is_variable() || t.p.is_variable() || t.o.is_variable())
    throw ValidationError("stored triples must be ground");
  if (t.s.kind != TermKind::kIri || t.p.kind != TermKind::kIri)
    throw ValidationError("triple subject and predicate must be IRIs");
  auto [it, fresh] = triples_.insert(std::move(t));
  if (fresh) by_predicate_.emplace(it->p.value, &*it);
  return fresh;
}

bool Graph::contains(const Triple& t) const { return triples_.count(t) > 0; }

std::vector<const Triple*> Graph::with_predicate(
    const std::string& iri) const {
  std::vector<const Triple*> out;
  auto [lo, hi] = by_predicate_.equal_range(iri);
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  return out;
}

void QueryPattern::require_valid() const {
  if (patterns.empty())
    throw ValidationError("query needs at least one triple pattern");
  std::set<std::string> vars;
  for (const TriplePattern& p : patterns)
    for (const Term* t : {&p.s, &p.p, &p.o})
      if (t->is_variable()) vars.insert(t->value);
  for (const Filter& f : filters)
    if (!vars.count(f.var))
      throw ValidationError("filter variable '?" + f.var +
                            "' appears in no pattern");
}

std::vector<Binding> match(const Graph& g, const QueryPattern& q) {
  q.require_valid();

  auto resolve = [](const Term& t, const Binding& b) {
    if (t.is_variable()) {
      const auto it = b.find(t.value);
      if (it != b.end()) return it->second;
    }
    return t;
  };
  auto unify = [](const Term& pat, const Term& fact, Binding* b) {
    if (!pat.is_variable()) return pat == fact;
    const auto it = b->find(pat.value);
    if (it != b->end()) return it->second == fact;
    (*b)[pat.value] = fact;
    return true;
  };

  std::vector<Binding> frontier{Binding{}};
  for (const TriplePattern& pat : q.patterns) {
    std::vector<Binding> next;
    for (const Binding& b : frontier) {
      const Term rs = resolve(pat.s, b);
      const Term rp = resolve(pat.p, b);
      const Term ro = resolve(pat.o, b);
      auto try_fact = [&](const Triple& fact) {
        Binding cand = b;
        if (unify(rs, fact.s, &cand) && unify(rp, fact.p, &cand) &&
            unify(ro, fact.o, &cand))
          next.push_back(std::move(cand));
      };
      if (!rp.is_variable()) {
        for (const Triple* t : g.with_predicate(rp.value)) try_fact(*t);
      } else {
        for (const Triple& t : g.triples()) try_fact(t);
      }
    }
    frontier = std::move(next);
  }

  std::vector<Binding> out;
  for (Binding& b : frontier) {
    bool ok = true;
    for (const Filter& f : q.filters) {
      const Term& t = b.at(f.var);
      if (!t.number || !apply_filter_op(f.op, *t.number, f.rhs)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(std::move(b));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Graph load_document(const std::string& text) {
  Graph g;
  TermParser parser;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const std::vector<std::string> toks = tokenize(line, line_no);
    if (toks.empty()) continue;
    if (toks[0] == "@prefix") {
      parser.handle_prefix_line(toks, line_no);
      continue;
    }
    if (toks.size() != 4 || toks[3] != ".")
      fail(line_no, "expected 'subject predicate object .'");
    Triple t;
    t.s = parser.parse(toks[0], line_no, false);
    t.p = parser.parse(toks[1], line_no, true);
    t.o = parser.parse(toks[2], line_no, false);
    if (t.s.kind != TermKind::kIri) fail(line_no, "subject must be an IRI");
    if (t.p.kind != TermKind::kIri) fail(line_no, "predicate must be an IRI");
    g.insert(std::move(t));
  }
  return g;
}

Graph load_document_file(const std::string& path) {
  return load_document(read_file(path));
}

QueryPattern parse_query(const std::string& text) {
  QueryPattern q;
  TermParser parser;
  parser.allow_variables = true;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const std::vector<std::string> toks = tokenize(line, line_no);
    if (toks.empty()) continue;
    if (toks[0] == "@prefix") {
      parser.handle_prefix_line(toks, line_no);
      continue;
    }
    if (toks[0] == "FILTER") {
      if (toks.size() != 4 || toks[1].empty() || toks[1][0] != '?')
        fail(line_no, "expected 'FILTER ?var OP value'");
      Filter f;
      f.var = toks[1].substr(1);
      f.op = parse_filter_op(toks[2], line_no);
      const Term rhs = parser.parse(toks[3], line_no, false);
      if (!rhs.number) fail(line_no, "filter value must be numeric");
      f.rhs = *rhs.number;
      q.filters.push_back(std::move(f));
      continue;
    }
    if (toks.size() != 4 || toks[3] != ".")
      fail(line_no, "expected 'subject predicate object .'");
    TriplePattern p;
    p.s = parser.parse(toks[0], line_no, false);
    p.p = parser.parse(toks[1], line_no, true);
    p.o = parser.parse(toks[2], line_no, false);
    q.patterns.push_back(std::move(p));
  }
  q.require_valid();
  return q;
}

QueryPattern parse_query_file(const std::string& path) {
  return parse_query(read_file(path));
}

const std::map<std::string, std::string>& builtin_prefixes() {
  static const std::map<std::string, std::string> kPrefixes = {
      {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
      {"bot", "https://w3id.org/bot#"},
      {"brick", "https://brickschema.org/schema/Brick#"},
      {"fso", "https://w3id.org/fso#"},
      {"props", "https://w3id.org/props#"},
      {"seas", "https://w3id.org/seas/"},
      {"sosa", "https://www.w3.org/ns/sosa/"},
      {"ssn", "https://www.w3.org/ns/ssn/"},
      {"time", "http://www.w3.org/2006/time#"},
  };
  return kPrefixes;
}

namespace {

bool bare_local_ok(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

std::string compact_iri(const std::string& iri, bool predicate_pos,
                        std::set<std::string>* used_prefixes) {
  if (predicate_pos && iri == kRdfType) return "a";
  const std::string* best_ns = nullptr;
  const std::string* best_prefix = nullptr;
  for (const auto& [prefix, ns] : builtin_prefixes()) {
    if (iri.size() > ns.size() && iri.rfind(ns, 0) == 0 &&
        (!best_ns || ns.size() > best_ns->size())) {
      best_ns = &ns;
      best_prefix = &prefix;
    }
  }
  if (best_ns && bare_local_ok(iri.substr(best_ns->size()))) {
    used_prefixes->insert(*best_prefix);
    return *best_prefix + ":" + iri.substr(best_ns->size());
  }
  return "<" + iri + ">";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

std::string term_to_string(const Term& t, bool predicate_pos,
                           std::set<std::string>* used) {
  switch (t.kind) {
    case TermKind::kIri:
      return compact_iri(t.value, predicate_pos, used);
    case TermKind::kVariable:
      return "?" + t.value;
    case TermKind::kLiteral: {
      double v;
      std::string body;
      if (t.number && parse_number(t.value, &v))
        body = t.value;  // bare numeric form survives round-trips
      else
        body = "\"" + escape(t.value) + "\"";
      if (!t.unit.empty()) body += "^^" + t.unit;
      return body;
    }
  }
  return "";
}

}  // namespace

std::string serialize(const Graph& g) {
  std::set<std::string> used;
  std::vector<std::string> lines;
  for (const Triple& t : g.triples()) {
    lines.push_back(term_to_string(t.s, false, &used) + " " +
                    term_to_string(t.p, true, &used) + " " +
                    term_to_string(t.o, false, &used) + " .");
  }
  std::string out;
  for (const std::string& p : used)
    out += "@prefix " + p + ": <" + builtin_prefixes().at(p) + "> .\n";
  if (!used.empty()) out += "\n";
  for (const std::string& l : lines) out += l + "\n";
  return out;
}

}  // namespace graphmpc
