#pragma once

// Interpolant existence and construction for O ⊨ C0 ⊑ D0 over Σ.
//
// The pipeline tests joint consistency of (C0, ¬D0): an ALC(Σ) interpolant
// exists iff no surviving mosaic holds completions of both. On existence the
// interpolant is the C0 entry of the separator for {C0, ¬D0}.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlinterp/mosaics.hpp"
#include "dlinterp/reasoner.hpp"
#include "dlinterp/semantics.hpp"
#include "dlinterp/separators.hpp"

namespace dlinterp {

struct InterpolationProblem {
  Ontology ontology;
  Concept c0;
  Concept d0;
  Signature sigma;
  Dialect dialect() const { return ontology.dialect(); }
};

struct InterpolationOptions {
  EliminationMode mode = EliminationMode::Antichain;
  std::uint64_t seed = 0;
  bool verify = true;
  bool emit_trace = false;
  MosaicBudget mosaic_budget;
  SeparatorBudget separator_budget;
  ReasonerBudget reasoner_budget;
};

struct InterpolationStats {
  std::size_t types = 0;
  std::uint64_t mosaics = 0;  // search nodes materialized by elimination
  std::size_t rounds = 0;
  std::uint64_t eliminated = 0;  // elimination records
  std::size_t interpolant_dag_size = 0;
  std::uint64_t sat_calls = 0;
  std::uint64_t wall_ms = 0;
};

// Why no interpolant exists.
struct NonexistenceWitness {
  // Surviving mosaic with completions t1 of C0 and t2 of ¬D0.
  Mosaic mosaic;
  std::uint32_t t1 = 0, t2 = 0;
  // ALCH: a model pair with Σ-bisimilar elements e1 ∈ C0 and e2 ∈ ¬D0
  // (both in `model`).
  std::optional<FiniteInterpretation> model;
  Element e1 = 0, e2 = 0;
  // ALCQ: partition certificates of the surviving mosaic.
  std::vector<PartitionCertificate> partitions;
};

struct InterpolationResult {
  enum class Verdict { Interpolant, None, NotEntailed };
  enum class Verification { NotRun, Passed, Failed };

  Verdict verdict = Verdict::None;
  std::optional<Concept> interpolant;
  std::optional<NonexistenceWitness> witness;
  // NotEntailed: a model of O with an element in C0 ⊓ ¬D0.
  std::optional<std::pair<FiniteInterpretation, Element>> countermodel;
  Verification verification = Verification::NotRun;
  InterpolationStats stats;
  std::string trace;  // when requested
};

// Throws DialectError when C0 or D0 uses counting in ALCH mode.
void validate_problem(const InterpolationProblem& p);

bool interpolant_exists(const InterpolationProblem& p, const InterpolationOptions& opt = {});

// Throws InternalError if a constructed interpolant fails verification.
InterpolationResult compute_interpolant(const InterpolationProblem& p, const InterpolationOptions& opt = {});

// Names of e within Σ, O ⊨ C0 ⊑ E and O ⊨ E ⊑ D0.
bool verify_interpolant(const Ontology& o, Concept c0, Concept d0, const Signature& sigma, Concept e);
bool verify_interpolant(Reasoner& rs, Concept c0, Concept d0, const Signature& sigma, Concept e);

}  // namespace dlinterp
