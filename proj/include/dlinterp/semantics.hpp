#pragma once

// Finite interpretations, concept evaluation and Σ-bisimulations.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlinterp/bitset.hpp"
#include "dlinterp/closure.hpp"
#include "dlinterp/syntax.hpp"
#include "dlinterp/terms.hpp"

namespace dlinterp {

using Element = std::uint32_t;

class FiniteInterpretation {
 public:
  FiniteInterpretation() = default;

  Element add_element(std::string label = {});
  std::size_t size() const { return labels_.size(); }
  const std::string& label(Element d) const { return labels_.at(d); }
  // Element with the given label, if any.
  std::optional<Element> find(std::string_view label) const;

  void set_atom(Name a, Element d);
  bool has_atom(Name a, Element d) const;
  void add_edge(Name r, Element d, Element e);
  bool has_edge(Name r, Element d, Element e) const;

  // Sorted, duplicate-free r-successors of d.
  const std::vector<Element>& successors(Name r, Element d) const;

  const std::map<Name, Bitset>& atom_ext() const { return atoms_; }
  std::vector<Name> role_names() const;
  std::vector<std::pair<Element, Element>> edges(Name r) const;

 private:
  std::vector<std::string> labels_;
  std::map<Name, Bitset> atoms_;
  std::map<Name, std::vector<std::vector<Element>>> succ_;
};

FiniteInterpretation parse_model(std::string_view text);
std::string print_model(const FiniteInterpretation& i);

// Set of elements satisfying c.
Bitset eval_concept(const FiniteInterpretation& i, Concept c);
bool satisfies(const FiniteInterpretation& i, Element d, Concept c);
bool is_model(const FiniteInterpretation& i, const Ontology& o);

// Relation between the domains of two interpretations, stored by rows.
class BisimRelation {
 public:
  BisimRelation() = default;
  BisimRelation(std::size_t left, std::size_t right);

  std::size_t left_size() const { return rows_.size(); }
  std::size_t right_size() const { return right_; }
  bool contains(Element d, Element e) const { return rows_[d].test(e); }
  void insert(Element d, Element e) { rows_[d].set(e); }
  void erase(Element d, Element e) { rows_[d].reset(e); }
  const Bitset& row(Element d) const { return rows_[d]; }
  std::size_t count() const;
  std::vector<std::pair<Element, Element>> pairs() const;
  friend bool operator==(const BisimRelation&, const BisimRelation&) = default;

 private:
  std::size_t right_ = 0;
  std::vector<Bitset> rows_;
};

// Greatest Σ-bisimulation between i and j (naive pair elimination).
BisimRelation max_sigma_bisimulation(const FiniteInterpretation& i, const FiniteInterpretation& j,
                                     const Signature& sigma);

// Direct Atom/Back/Forth check of every pair of z.
bool is_sigma_bisimulation(const FiniteInterpretation& i, const FiniteInterpretation& j,
                           const Signature& sigma, const BisimRelation& z);

bool check_joint_consistency_witness(const Ontology& o, Concept c0, Concept d0,
                                     const Signature& sigma, const FiniteInterpretation& i1,
                                     Element e1, const FiniteInterpretation& i2, Element e2);

// Closure members true at d.
Bitset type_of(const FiniteInterpretation& i, Element d, const ClosureIndex& cx);

}  // namespace dlinterp
