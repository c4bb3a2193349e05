#pragma once

// Concept/ontology/signature text formats.
//
//   concept  := top | bot | NAME | (not c) | (and c c+) | (or c c+)
//             | (some ROLE c) | (all ROLE c) | (atleast NAT ROLE c) | (atmost NAT ROLE c)
//   ontology := ((implies c c) | (role-implies ROLE ROLE))*
//   signature: whitespace-separated names
//
// DAG form: one definition per line, `nK := <shallow form>`, children
// referenced as nJ and defined earlier, closed by `root nK`.

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlinterp/terms.hpp"

namespace dlinterp {

enum class Dialect { ALCH, ALCQ };

const char* dialect_name(Dialect d);
Dialect parse_dialect(std::string_view text);

struct Inclusion {
  Concept lhs;
  Concept rhs;
};

struct RoleInclusion {
  Name sub;
  Name super;
};

// Reflexive-transitive closure of a set of role inclusions.
class RoleOrder {
 public:
  RoleOrder() = default;
  explicit RoleOrder(const std::vector<RoleInclusion>& ris);

  bool subsumes(Name sub, Name super) const;
  // All s with sub ⊑* s, sorted, including sub itself.
  std::vector<Name> supers(Name sub) const;
  // All roles mentioned by some inclusion.
  const std::set<Name>& roles() const { return roles_; }

 private:
  std::set<Name> roles_;
  std::map<Name, std::set<Name>> up_;
};

class Ontology {
 public:
  Ontology() = default;
  Ontology(Dialect dialect, std::vector<Inclusion> cis, std::vector<RoleInclusion> ris);

  Dialect dialect() const { return dialect_; }
  const std::vector<Inclusion>& cis() const { return cis_; }
  const std::vector<RoleInclusion>& ris() const { return ris_; }
  const RoleOrder& role_order() const { return order_; }

  // O ⊨ r ⊑ s. Only meaningful for ALCH ontologies.
  bool role_subsumes(Name r, Name s) const;
  // Super-roles of r (reflexive); works in both dialects.
  std::vector<Name> supers(Name r) const { return order_.supers(r); }

  NameSets names() const;

 private:
  Dialect dialect_ = Dialect::ALCH;
  std::vector<Inclusion> cis_;
  std::vector<RoleInclusion> ris_;
  RoleOrder order_;
};

class Signature {
 public:
  Signature() = default;
  explicit Signature(std::set<Name> names) : names_(std::move(names)) {}

  bool contains(Name n) const { return names_.count(n) != 0; }
  const std::set<Name>& names() const { return names_; }
  void insert(Name n) { names_.insert(n); }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::set<Name> names_;
};

// True iff every atom and role of c is in sigma.
bool within_signature(Concept c, const Signature& sigma);

Concept parse_concept(std::string_view text);
Concept parse_concept_dag(std::string_view text);
// Accepts either the tree or the DAG form.
Concept parse_concept_any(std::string_view text);
Ontology parse_ontology(std::string_view text, Dialect dialect);
Signature parse_signature(std::string_view text);

enum class PrintMode { Tree, Dag };

std::string print_concept(Concept c, PrintMode mode = PrintMode::Tree);
std::string print_ontology(const Ontology& o);
std::string print_signature(const Signature& s);

// Simple tokenizer shared by the concept, ontology and model readers.
struct Token {
  enum Kind { LParen, RParen, Word, End } kind;
  std::string_view text;
  std::size_t offset;
};

class SexpLexer {
 public:
  explicit SexpLexer(std::string_view src) : src_(src) {}
  Token peek();
  Token next();
  Token expect_word(const char* what);
  void expect(Token::Kind kind, const char* what);
  std::size_t offset() const { return pos_; }

 private:
  void skip_space();
  std::string_view src_;
  std::size_t pos_ = 0;
};

bool is_name(std::string_view w);
bool is_nat(std::string_view w);

}  // namespace dlinterp
