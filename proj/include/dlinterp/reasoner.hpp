#pragma once

// Types, realizability, witnessing functions, and concept satisfiability.
//
// Two independent routes decide satisfiability. `realizable_types` works over
// a fixed closure by candidate enumeration and greatest-fixpoint elimination.
// `Reasoner` runs an on-the-fly variant of the same elimination over Hintikka
// sets generated from the query itself, so it copes with concepts whose
// closure is far too large to enumerate (the separators built later).

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dlinterp/bitset.hpp"
#include "dlinterp/closure.hpp"
#include "dlinterp/semantics.hpp"
#include "dlinterp/syntax.hpp"
#include "dlinterp/terms.hpp"

namespace dlinterp {

// Value ∞ of N•.
inline constexpr std::uint32_t kInfinity = std::numeric_limits<std::uint32_t>::max();

// Boolean-saturated bitsets over the closure that respect the ontology's CIs.
std::vector<Bitset> candidate_types(const ClosureIndex& cx, const Ontology& o);

// Candidates that survive greatest-fixpoint elimination. `scan_order`, if
// given, permutes the elimination scan (the result does not depend on it).
std::vector<Bitset> realizable_types(const ClosureIndex& cx, const Ontology& o,
                                     const std::vector<std::size_t>* scan_order = nullptr);

// {C | ∀s.C ∈ t, O ⊨ r ⊑ s}, as literals. ALCH only.
LitSet succ_alch(const ClosureIndex& cx, const Ontology& o, const Bitset& t, Name r);

// Threshold bounds a type imposes on the r-successors satisfying each counted
// child: lo ≤ #successors in C ≤ hi (hi may be kInfinity).
struct CountConstraint {
  Lit child;
  std::uint32_t lo = 0;
  std::uint32_t hi = kInfinity;
};
std::vector<CountConstraint> count_constraints(const ClosureIndex& cx, const Bitset& t, Name r);

struct WitnessingFunction {
  Name role = 0;
  Bitset source;
  // Types with a nonzero value; absent types map to 0.
  std::vector<std::pair<Bitset, std::uint32_t>> values;

  std::uint32_t value(const Bitset& t) const;
};

// True iff w satisfies the threshold iff-conditions of its source type.
bool is_witnessing_function(const ClosureIndex& cx, const WitnessingFunction& w);

std::optional<WitnessingFunction> find_witnessing_function(const ClosureIndex& cx,
                                                           const Bitset& t, Name r,
                                                           const std::vector<Bitset>& support,
                                                           std::uint32_t m_star);

WitnessingFunction witness_from_model(const FiniteInterpretation& i, Element d, Name r,
                                      const ClosureIndex& cx, std::uint32_t m_star);

struct ReasonerBudget {
  std::uint64_t max_nodes = 4'000'000;      // Hintikka nodes kept at once
  std::uint64_t max_sat_calls = 50'000'000;  // non-memoized sat queries
  std::uint64_t max_search = 20'000'000;     // counting feasibility search steps
};

class Engine;

// Satisfiability and entailment under a fixed ontology, memoized per concept.
class Reasoner {
 public:
  explicit Reasoner(Ontology o, ReasonerBudget budget = {});
  ~Reasoner();
  Reasoner(const Reasoner&) = delete;
  Reasoner& operator=(const Reasoner&) = delete;

  const Ontology& ontology() const { return o_; }

  bool sat(Concept c);
  bool entails(Concept c, Concept d) { return !sat(conj({c, neg(d)})); }

  // A finite model of the ontology with an element satisfying c, if c is
  // satisfiable.
  std::optional<std::pair<FiniteInterpretation, Element>> model(Concept c);

  std::uint64_t sat_calls() const { return sat_calls_; }
  std::uint64_t nodes() const;

 private:
  void check_dialect(Concept c) const;

  Ontology o_;
  ReasonerBudget budget_;
  std::unique_ptr<Engine> engine_;
  std::unordered_map<std::uint32_t, bool> memo_;
  std::uint64_t sat_calls_ = 0;
};

// Satisfiability via realizable_types over the closure of (O, c); exponential
// in the closure size. Used as an independent cross-check.
bool sat_by_types(const Ontology& o, Concept c);

}  // namespace dlinterp
