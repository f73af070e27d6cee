#pragma once

// Minimal in-memory triple store with conjunctive basic-graph-pattern
// matching, plus a line-oriented serialization with prefix declarations and
// unit-annotated numeric literals.

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace graphmpc {

enum class TermKind { kIri, kLiteral, kVariable };

struct Term {
  TermKind kind = TermKind::kIri;
  std::string value;  // expanded IRI, literal lexical form, or variable name
  std::string unit;   // literal unit annotation, empty when absent
  std::optional<double> number;  // set for numeric literals

  static Term iri(std::string v);
  static Term literal(std::string lexical, std::string unit = "");
  static Term number_literal(double v, std::string unit = "");
  static Term variable(std::string name);  // without the '?' sigil

  bool is_variable() const { return kind == TermKind::kVariable; }
  auto operator<=>(const Term&) const = default;
};

struct Triple {
  Term s, p, o;
  auto operator<=>(const Triple&) const = default;
};

class Graph {
 public:
  // Inserting a duplicate is a no-op; returns whether the triple was new.
  bool insert(Triple t);
  bool contains(const Triple& t) const;
  std::size_t size() const { return triples_.size(); }
  const std::set<Triple>& triples() const { return triples_; }

  // All triples with the given predicate IRI.
  std::vector<const Triple*> with_predicate(const std::string& iri) const;

 private:
  std::set<Triple> triples_;
  std::multimap<std::string, const Triple*> by_predicate_;
};

struct TriplePattern {
  Term s, p, o;  // any position may be a variable
};

enum class FilterOp { kEq, kNe, kLt, kLe, kGt, kGe };

// Numeric comparison of a bound variable against a constant.
struct Filter {
  std::string var;
  FilterOp op = FilterOp::kEq;
  double rhs = 0.0;
};

struct QueryPattern {
  std::vector<TriplePattern> patterns;
  std::vector<Filter> filters;

  // Every filter variable must appear in some pattern.
  void require_valid() const;
};

// Variable name -> bound term. std::map keys keep bindings ordered.
using Binding = std::map<std::string, Term>;

// All solutions of the conjunctive pattern, deduplicated and in a
// deterministic sorted order.
std::vector<Binding> match(const Graph& g, const QueryPattern& q);

// Document parsing. Lines hold either a prefix declaration
//   @prefix brick: <https://brickschema.org/schema/Brick#> .
// or a triple
//   :zone a bot:Zone .
//   :window props:area 6.0^^m2 .
// Comments start with '#'. Throws ParseError with a line number.
Graph load_document(const std::string& text);
Graph load_document_file(const std::string& path);

// Query documents reuse the term syntax, allow ?variables, and add FILTER
// lines such as:  FILTER ?area > 5.0
QueryPattern parse_query(const std::string& text);
QueryPattern parse_query_file(const std::string& path);

// Canonical serialization: sorted prefix block, then sorted triples with
// IRIs compacted against the well-known prefixes. Parsing the output yields
// an equal graph.
std::string serialize(const Graph& g);

// Well-known namespace prefixes used by the serializer and available in
// every document without declaration.
const std::map<std::string, std::string>& builtin_prefixes();

}  // namespace graphmpc
