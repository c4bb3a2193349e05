#pragma once

// Subconcept closure of (O, C0, D0), closed under single negation.
//
// Only non-negated concepts are indexed; a negated member ¬E is represented by
// the absence of E from a type. Index 0 is always Top and entries appear in
// post-order of first occurrence, so children precede parents.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dlinterp/bitset.hpp"
#include "dlinterp/syntax.hpp"
#include "dlinterp/terms.hpp"

namespace dlinterp {

// A closure member: entry `idx`, asserted (pos) or denied.
struct Lit {
  std::uint32_t idx = 0;
  bool pos = true;
  friend bool operator==(Lit, Lit) = default;
  friend auto operator<=>(Lit, Lit) = default;
};

struct ClosureEntry {
  Concept term;
  Kind kind = Kind::Top;
  Name name = 0;            // atom name or role
  std::uint32_t count = 0;  // AtLeast threshold
  std::vector<Lit> kids;    // And operands, or the single AtLeast operand
};

class ClosureIndex {
 public:
  ClosureIndex() = default;
  // Indexes every subterm of the roots, in the given order.
  explicit ClosureIndex(const std::vector<Concept>& roots);
  // sub(O, C0, D0) plus the subterms of ¬D0.
  static ClosureIndex build(const Ontology& o, Concept c0, Concept d0);

  std::size_t size() const { return entries_.size(); }
  const ClosureEntry& entry(std::size_t i) const { return entries_[i]; }
  const std::vector<ClosureEntry>& entries() const { return entries_; }

  std::optional<std::uint32_t> find(Concept c) const;
  bool contains(Concept c) const;
  // Literal for any member of the closure (negated or not). Throws
  // std::out_of_range for concepts outside the closure.
  Lit lit(Concept c) const;
  Concept concept_of(Lit l) const;

  // Largest AtLeast threshold, or 1 when there is none.
  std::uint32_t m_star() const { return m_star_; }
  // Roles / atoms occurring in the closure, sorted.
  const std::vector<Name>& roles() const { return roles_; }
  const std::vector<Name>& atoms() const { return atoms_; }
  // Indices of AtLeast entries with the given role.
  std::vector<std::uint32_t> at_least_entries(Name role) const;

  static bool holds(const Bitset& t, Lit l) { return t.test(l.idx) == l.pos; }

 private:
  void add_tree(Concept root);

  std::vector<ClosureEntry> entries_;
  std::unordered_map<std::uint32_t, std::uint32_t> lookup_;
  std::uint32_t m_star_ = 1;
  std::vector<Name> roles_;
  std::vector<Name> atoms_;
};

// A conjunctive set of closure literals: pos must hold, neg must fail.
struct LitSet {
  Bitset pos;
  Bitset neg;

  explicit LitSet(std::size_t n = 0) : pos(n), neg(n) {}
  void add(Lit l) { l.pos ? pos.set(l.idx) : neg.set(l.idx); }
  bool consistent() const { return !pos.intersects(neg); }
  // True iff type t extends this set.
  bool completed_by(const Bitset& t) const {
    return pos.is_subset_of(t) && !neg.intersects(t);
  }
  friend bool operator==(const LitSet&, const LitSet&) = default;
  friend bool operator<(const LitSet& a, const LitSet& b) {
    if (!(a.pos == b.pos)) return a.pos < b.pos;
    return a.neg < b.neg;
  }
};

struct LitSetHash {
  std::size_t operator()(const LitSet& s) const { return s.pos.hash() * 31 + s.neg.hash(); }
};

// Conjunction of the literals of a set, as a concept.
Concept lit_set_concept(const ClosureIndex& cx, const LitSet& s);
// Conjunction describing a type: the atom and AtLeast literals fix the rest.
Concept type_concept(const ClosureIndex& cx, const Bitset& t);

}  // namespace dlinterp
