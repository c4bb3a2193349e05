#pragma once

// Polyadic separators for eliminated mosaics.
//
// A separator for a set of separands X1..Xn maps each Xi to an ALC(Σ)
// concept Ei with O ⊨ Xi ⊑ Ei and O ⊨ E1 ⊓ ... ⊓ En ⊑ ⊥. Separators are
// kept round by round as general separators: one concept per type whose
// restriction to any mosaic eliminated so far is a separator for it.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlinterp/mosaics.hpp"
#include "dlinterp/reasoner.hpp"

namespace dlinterp {

// A conjunctive set of closure literals; a type is the complete case.
using Separand = LitSet;

Separand type_separand(const TypeUniverse& u, std::uint32_t t);
Separand concept_separand(const TypeUniverse& u, Concept c);
Concept separand_concept(const TypeUniverse& u, const Separand& s);

struct SeparatorMap {
  enum class Status { Unchecked, Certified, Failed };
  std::vector<std::pair<Separand, Concept>> entries;
  Status status = Status::Unchecked;
  std::string failure;  // set when Failed

  // Entry of a separand; throws out_of_range if absent.
  Concept entry(const Separand& s) const;
  // Adds or conjoins; duplicate separands collapse to one key.
  void put(const Separand& s, Concept c);
};

struct GeneralSeparator {
  std::vector<Concept> per_type;  // ⊤ for types in no eliminated mosaic
  Concept at(std::uint32_t t) const { return per_type.at(t); }
  // The restriction to a mosaic, as a map over its types.
  SeparatorMap restrict_to(const TypeUniverse& u, const Mosaic& m) const;
};

// Sep(t) = A if A ∈ t and ¬A otherwise.
SeparatorMap base_separator(const TypeUniverse& u, const Mosaic& m, Name atom);

// ⊓ of the base separators of the given atomically inconsistent mosaics,
// each split on its least disagreeing Σ-atom.
GeneralSeparator general_separator_base(const TypeUniverse& u, const std::vector<Mosaic>& e0);
// The same over all atomically inconsistent mosaics, without listing them.
GeneralSeparator general_separator_base(const TypeUniverse& u);

// Separator for arbitrary separands from separators of their completion
// mosaics:
//   Sep(X) = ⊔_{t completes X} ⊓_{f ∈ cp(C), f(X) = t} Sep_f(X)
// where cp(C) picks a completion for every member of C and Sep_f is the
// separator of the mosaic f[C]. `eliminated` says whether a mosaic was
// eliminated; a surviving f[C] raises NoSeparator.
using SepFor = std::function<Concept(const Mosaic& image, std::uint32_t type)>;
SeparatorMap complete_separator(const TypeUniverse& u, const std::vector<Separand>& c, const SepFor& sep_for,
                                const std::function<bool(const Mosaic&)>& eliminated,
                                std::uint64_t max_choices = 1'000'000);

// ⊔_{t completes X} sep(t): the completion combinator when every Sep_f is a
// restriction of one general separator.
Concept complete_from_general(const TypeUniverse& u, const GeneralSeparator& sep, const Separand& x);

struct SeparatorBudget {
  std::size_t max_patterns = 14;  // satisfiable sign patterns in V+
  std::uint64_t max_delta_sets = 200'000;
};

// Separator for one saturation record of round i, built from Sep_{i-1}.
// `family` is the maxima the round read.
class StepBuilder {
 public:
  StepBuilder(const TypeUniverse& u, const GeneralSeparator& prev, const std::vector<Mosaic>& family,
              Reasoner& reasoner, SeparatorBudget budget = {});

  // D = {t'/s | t' ∈ T, s ∈ Σ, r ⊑ s} ∪ {{C} ∪ t/r};
  // Sep(t') = ⊓_s ∀s.Sep_D(t'/s) for t' ≠ t, Sep(t) = ¬⊓_{t'≠t} Sep(t').
  SeparatorMap alch(const EliminationRecord& rec);
  // Sep(t0) = ¬⊓_{t ≠ t0} δ_r(t), Sep(t) = δ_r(t), t0 the least type.
  SeparatorMap alcq(const EliminationRecord& rec);

  // Sign patterns over the distinct values of Sep_{i-1} that are
  // satisfiable under O.
  const std::vector<Concept>& v_plus();
  // ⊔ of ∇_r(B) over B ⊆ V+ (B = ∅ included) with t ⊓ ∇_r(B) satisfiable.
  Concept delta(std::uint32_t t, Name r);
  static Concept nabla(Name r, const std::vector<Concept>& b);

 private:
  Concept sep_d(const Separand& x);
  const TypeUniverse& u_;
  const GeneralSeparator& prev_;
  const std::vector<Mosaic>& family_;
  Reasoner& rs_;
  SeparatorBudget budget_;
  std::vector<std::pair<Separand, Concept>> sep_d_memo_;
  std::optional<std::vector<Concept>> v_plus_;
  std::vector<std::pair<std::pair<std::uint32_t, Name>, Concept>> delta_memo_;
};

struct SeparatorRun {
  // by_round[i] is a general separator for every mosaic eliminated in
  // rounds 0..i.
  std::vector<GeneralSeparator> by_round;
  // Per trace record, when requested.
  std::vector<SeparatorMap> per_record;
  const GeneralSeparator& final() const { return by_round.back(); }
};

SeparatorRun build_separators(const TypeUniverse& u, const Elimination& e, Reasoner& reasoner,
                              bool keep_records = false, SeparatorBudget budget = {});

// Checks both separator conditions with the reasoner; sets status.
SeparatorMap::Status certify(SeparatorMap& sep, const TypeUniverse& u, Reasoner& reasoner);

}  // namespace dlinterp
