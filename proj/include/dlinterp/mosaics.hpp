#pragma once

// Mosaics: sets of realizable types meant to be realized at mutually
// Σ-bisimilar elements. Bad mosaics are eliminated to a greatest fixpoint.
//
// The surviving family is downward closed in every round, so it is kept as
// its antichain of maximal members. A round computes the maximal good
// subsets of the previous maxima; the minimal newly eliminated mosaics
// ("cores") go to the trace with the reason they are bad. Exhaustive mode
// materializes the powerset instead and records every eliminated mosaic.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dlinterp/bitset.hpp"
#include "dlinterp/closure.hpp"
#include "dlinterp/reasoner.hpp"
#include "dlinterp/semantics.hpp"
#include "dlinterp/syntax.hpp"

namespace dlinterp {

using Mosaic = Bitset;  // over type ids

// Realizable types of sub(O, c0, n0) with the per-type data the elimination
// and the separators need.
class TypeUniverse {
 public:
  TypeUniverse(Ontology o, Concept c0, Concept n0, Signature sigma);

  const Ontology& ontology() const { return o_; }
  const ClosureIndex& closure() const { return cx_; }
  const Signature& sigma() const { return sigma_; }
  Concept c0() const { return c0_; }
  Concept n0() const { return n0_; }
  Dialect dialect() const { return o_.dialect(); }

  std::size_t size() const { return types_.size(); }
  const Bitset& type(std::size_t id) const { return types_[id]; }
  const std::vector<Bitset>& types() const { return types_; }
  Mosaic empty_mosaic() const { return Mosaic(types_.size()); }
  Mosaic all_types() const;

  // Σ-atoms of the closure, sorted by name text.
  const std::vector<Name>& sigma_atoms() const { return sigma_atoms_; }
  // Σ-roles of the closure, sorted by name text.
  const std::vector<Name>& sigma_roles() const { return sigma_roles_; }
  // Σ ∩ {s | O ⊨ r ⊑ s}, sorted by name text.
  std::vector<Name> sigma_supers(Name r) const;
  // Class of the Σ-atom valuation of a type.
  std::uint32_t atom_class(std::size_t id) const { return atom_class_[id]; }

  // succ(t, r): the literals every r-successor of t satisfies (ALCH).
  const LitSet& succ(std::size_t id, Name r) const;
  // Types extending a literal set.
  Mosaic completions(const LitSet& x) const;
  // Types containing a closure member.
  Mosaic holding(Concept c) const;

 private:
  Ontology o_;
  Signature sigma_;
  Concept c0_, n0_;
  ClosureIndex cx_;
  std::vector<Bitset> types_;
  std::vector<Name> sigma_atoms_, sigma_roles_;
  std::vector<std::uint32_t> atom_class_;
  mutable std::vector<std::vector<std::pair<Name, LitSet>>> succ_cache_;
};

enum class EliminationMode { Antichain, Exhaustive };

struct MosaicBudget {
  std::size_t max_exhaustive_types = 16;      // powerset cap 2^16
  std::uint64_t max_search_nodes = 4'000'000;  // maximal-good-subset search
  std::uint64_t max_partition_nodes = 20'000'000;
  std::size_t max_partition_family = 20;  // |Max| for the S ⊆ Max scan
};

struct EliminationRecord {
  enum class Reason { BaseAtomic, StepALCH, StepALCQ };
  Reason reason = Reason::BaseAtomic;
  Mosaic mosaic;
  std::uint32_t round = 0;
  Name atom = 0;              // BaseAtomic
  std::uint32_t type = 0;     // StepALCH: the type t
  std::uint32_t existential = 0;  // StepALCH: closure index of ∃r.C
  Name role = 0;              // StepALCH / StepALCQ
};

struct Elimination {
  EliminationMode mode = EliminationMode::Antichain;
  // max[i]: maximal surviving mosaics after round i. Round 0 removes the
  // atomically inconsistent mosaics; later rounds apply saturation.
  std::vector<std::vector<Mosaic>> max;
  std::vector<EliminationRecord> trace;
  std::vector<std::size_t> round_begin;  // first trace index of each round
  std::uint64_t materialized = 0;        // mosaics examined
  std::uint64_t eliminated = 0;          // mosaics removed

  std::size_t rounds() const { return max.size(); }
  const std::vector<Mosaic>& final_max() const { return max.back(); }
  // Maxima the round's badness checks read (all types before round 0).
  std::vector<Mosaic> before(const TypeUniverse& u, std::size_t round) const;
  bool survives(const Mosaic& m) const;
  std::pair<std::size_t, std::size_t> round_records(std::size_t round) const;
};

// Badness of a single mosaic against a family given by its maxima. The
// record's `round` is left 0.
std::optional<EliminationRecord> is_bad_alch(const TypeUniverse& u, const Mosaic& t,
                                             const std::vector<Mosaic>& family);
std::optional<EliminationRecord> is_bad_alcq(const TypeUniverse& u, const Mosaic& t,
                                             const std::vector<Mosaic>& family,
                                             const MosaicBudget& budget = {});

// The full powerset as an explicit family (exhaustive mode only).
std::vector<Mosaic> enumerate_mosaics(const TypeUniverse& u, const MosaicBudget& budget = {});

// Greatest fixpoint. `seed` permutes the scan order; the result must not
// depend on it.
Elimination eliminate(const TypeUniverse& u, EliminationMode mode = EliminationMode::Antichain,
                      const MosaicBudget& budget = {}, std::uint64_t seed = 0);

// Exhaustive elimination one mosaic at a time against the current family,
// in the order given by `seed`. Returns the surviving maxima. Test support
// for order independence of the fixpoint; small universes only.
std::vector<Mosaic> eliminate_sequential(const TypeUniverse& u, std::uint64_t seed,
                                         const MosaicBudget& budget = {});

// ALCQ mosaic partition certificate for one mosaic and one role.
struct PartitionCertificate {
  Name role = 0;
  std::vector<Mosaic> s;
  struct Row {
    std::uint32_t type = 0;
    WitnessingFunction w;
    // a_r(t, t') as indices into s, one entry per t' with w(t') > 0
    std::vector<std::pair<Bitset, std::vector<std::size_t>>> assign;
  };
  std::vector<Row> rows;
};

// Literal check of the partition conditions against a family of maxima.
bool check_partition(const TypeUniverse& u, const Mosaic& t, const PartitionCertificate& cert,
                     const std::vector<Mosaic>& family);

struct JointConsistency {
  bool consistent = false;
  Mosaic witness;  // surviving maximal mosaic with completions of c0 and n0
  std::uint32_t t1 = 0, t2 = 0;
  std::vector<PartitionCertificate> partitions;  // ALCQ only
};

JointConsistency decide_joint_consistency(const TypeUniverse& u, const Elimination& e,
                                          const MosaicBudget& budget = {});

struct ExtractedModel {
  FiniteInterpretation model;
  // element -> (type id, index into the final maxima)
  std::vector<std::pair<std::uint32_t, std::size_t>> cells;
  BisimRelation z;
  Element find(std::uint32_t type, std::size_t mosaic) const;
};

// Model over the surviving (type, mosaic) pairs with Z relating pairs that
// share a mosaic (ALCH).
ExtractedModel extract_model(const TypeUniverse& u, const Elimination& e);

// One line per record.
std::string export_trace(const TypeUniverse& u, const Elimination& e);

}  // namespace dlinterp
