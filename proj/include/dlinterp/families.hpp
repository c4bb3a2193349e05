#pragma once

// Generators for the parametric example families.

#include <string>

#include "dlinterp/syntax.hpp"
#include "dlinterp/terms.hpp"

namespace dlinterp {

struct Instance {
  Ontology ontology;
  Concept c0;
  Concept d0;
  Signature sigma;
};

// Role-hierarchy family for k >= 1: interpolate
//   ∃r.B ⊓ ∀r.(B → ⊔ Ai)  ⊑  ¬⊓ ∀si.¬Ai
// over Σ = {sip_i, A_i}. The default chain is r ⊑ sip_i ⊑ si; `literal`
// orders it r ⊑ si ⊑ sip_i instead.
Instance alch_k(int k, bool literal = false);
// ⊔ ∃sip_i.A_i, an interpolant of the default family.
Concept alch_k_reference(int k);

// O = {r ⊑ s, r ⊑ sp}, C0 = ∃r.⊤, Σ = {s, sp}.
Instance alch_tower();
// O = ∅, C0 = (≤1 r.⊤), Σ = {r, s, sp}.
Instance alcq_tower();

}  // namespace dlinterp
