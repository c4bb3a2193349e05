// Existence decision, interpolant construction and verification.

#include "dlinterp/interpolate.hpp"

#include <chrono>

#include "dlinterp/errors.hpp"

namespace dlinterp {

void validate_problem(const InterpolationProblem& p) {
  if (p.dialect() == Dialect::ALCH && (!is_alc(p.c0) || !is_alc(p.d0)))
    throw DialectError("ALCH mode takes ALC concepts for C0 and D0");
}

bool verify_interpolant(Reasoner& rs, Concept c0, Concept d0, const Signature& sigma, Concept e) {
  if (!within_signature(e, sigma) || !is_alc(e)) return false;
  return rs.entails(c0, e) && rs.entails(e, d0);
}

bool verify_interpolant(const Ontology& o, Concept c0, Concept d0, const Signature& sigma, Concept e) {
  Reasoner rs(o);
  return verify_interpolant(rs, c0, d0, sigma, e);
}

namespace {

struct Pipeline {
  TypeUniverse u;
  Elimination e;
  JointConsistency j;
};

Pipeline decide(const InterpolationProblem& p, const InterpolationOptions& opt) {
  validate_problem(p);
  Pipeline run{TypeUniverse(p.ontology, p.c0, neg(p.d0), p.sigma), {}, {}};
  run.e = eliminate(run.u, opt.mode, opt.mosaic_budget, opt.seed);
  run.j = decide_joint_consistency(run.u, run.e, opt.mosaic_budget);
  return run;
}

NonexistenceWitness witness_of(const InterpolationProblem& p, const Pipeline& run) {
  NonexistenceWitness w;
  w.mosaic = run.j.witness;
  w.t1 = run.j.t1;
  w.t2 = run.j.t2;
  w.partitions = run.j.partitions;
  if (p.dialect() != Dialect::ALCH) return w;
  ExtractedModel x = extract_model(run.u, run.e);
  const auto& fm = run.e.final_max();
  std::size_t k = 0;
  while (k < fm.size() && !(fm[k] == run.j.witness)) ++k;
  if (k == fm.size()) throw InternalError("joint consistency witness is not a final maximal mosaic");
  w.e1 = x.find(w.t1, k);
  w.e2 = x.find(w.t2, k);
  if (!check_joint_consistency_witness(p.ontology, p.c0, neg(p.d0), p.sigma, x.model, w.e1, x.model, w.e2))
    throw InternalError("extracted model pair fails the joint consistency check");
  w.model = std::move(x.model);
  return w;
}

}  // namespace

bool interpolant_exists(const InterpolationProblem& p, const InterpolationOptions& opt) {
  return !decide(p, opt).j.consistent;
}

InterpolationResult compute_interpolant(const InterpolationProblem& p, const InterpolationOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  validate_problem(p);
  InterpolationResult res;
  Reasoner rs(p.ontology, opt.reasoner_budget);
  auto finish = [&](std::size_t types) {
    res.stats.types = types;
    res.stats.sat_calls = rs.sat_calls();
    res.stats.wall_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
  };

  if (auto cm = rs.model(conj({p.c0, neg(p.d0)}))) {
    res.verdict = InterpolationResult::Verdict::NotEntailed;
    res.countermodel = std::move(cm);
    finish(0);
    return res;
  }

  Pipeline run = decide(p, opt);
  res.stats.mosaics = run.e.materialized;
  res.stats.rounds = run.e.rounds();
  res.stats.eliminated = run.e.eliminated;
  if (opt.emit_trace) res.trace = export_trace(run.u, run.e);

  if (run.j.consistent) {
    res.verdict = InterpolationResult::Verdict::None;
    res.witness = witness_of(p, run);
    finish(run.u.size());
    return res;
  }

  SeparatorRun seps = build_separators(run.u, run.e, rs, false, opt.separator_budget);
  const GeneralSeparator& g = seps.final();
  std::vector<Separand> members{concept_separand(run.u, run.u.c0()), concept_separand(run.u, run.u.n0())};
  SeparatorMap m = complete_separator(
      run.u, members, [&](const Mosaic&, std::uint32_t t) { return g.at(t); },
      [&](const Mosaic& x) { return !run.e.survives(x); });
  Concept ev = m.entry(members[0]);
  res.verdict = InterpolationResult::Verdict::Interpolant;
  res.interpolant = ev;
  res.stats.interpolant_dag_size = dag_size(ev);
  if (opt.verify) {
    if (!verify_interpolant(rs, p.c0, p.d0, p.sigma, ev))
      throw InternalError("constructed interpolant fails verification");
    res.verification = InterpolationResult::Verification::Passed;
  }
  finish(run.u.size());
  return res;
}

}  // namespace dlinterp
