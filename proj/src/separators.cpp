// Separator synthesis: atomic base, ALCH and ALCQ steps, completion.

#include "dlinterp/separators.hpp"

#include <algorithm>
#include <map>

#include "dlinterp/errors.hpp"
#include "mosaic_rounds.hpp"

namespace dlinterp {

Separand type_separand(const TypeUniverse& u, std::uint32_t t) {
  const ClosureIndex& cx = u.closure();
  const Bitset& tt = u.type(t);
  Separand s(cx.size());
  for (std::size_t i = 0; i < cx.size(); ++i) {
    Kind k = cx.entry(i).kind;
    if (k == Kind::Atom || k == Kind::AtLeast) s.add({static_cast<std::uint32_t>(i), tt.test(i)});
  }
  return s;
}

Separand concept_separand(const TypeUniverse& u, Concept c) {
  Separand s(u.closure().size());
  s.add(u.closure().lit(c));
  return s;
}

Concept separand_concept(const TypeUniverse& u, const Separand& s) { return lit_set_concept(u.closure(), s); }

Concept SeparatorMap::entry(const Separand& s) const {
  for (const auto& [k, v] : entries)
    if (k == s) return v;
  throw std::out_of_range("separand not in the separator's scope");
}

void SeparatorMap::put(const Separand& s, Concept c) {
  for (auto& [k, v] : entries)
    if (k == s) {
      v = conj({v, c});
      return;
    }
  entries.emplace_back(s, c);
}

SeparatorMap GeneralSeparator::restrict_to(const TypeUniverse& u, const Mosaic& m) const {
  SeparatorMap out;
  m.for_each([&](std::size_t t) {
    auto id = static_cast<std::uint32_t>(t);
    out.put(type_separand(u, id), at(id));
  });
  return out;
}

namespace {

Concept atom_literal(const TypeUniverse& u, std::uint32_t t, Name a) {
  bool pos = u.type(t).test(*u.closure().find(atom(a)));
  return pos ? atom(a) : neg(atom(a));
}

}  // namespace

SeparatorMap base_separator(const TypeUniverse& u, const Mosaic& m, Name a) {
  std::size_t idx = *u.closure().find(atom(a));
  bool pos = false, negative = false;
  m.for_each([&](std::size_t t) { (u.type(t).test(idx) ? pos : negative) = true; });
  if (!pos || !negative) throw std::invalid_argument("atom " + name_str(a) + " does not split the mosaic");
  SeparatorMap out;
  m.for_each([&](std::size_t t) {
    auto id = static_cast<std::uint32_t>(t);
    out.put(type_separand(u, id), atom_literal(u, id, a));
  });
  return out;
}

GeneralSeparator general_separator_base(const TypeUniverse& u, const std::vector<Mosaic>& e0) {
  GeneralSeparator g;
  g.per_type.assign(u.size(), top());
  for (const Mosaic& m : e0) {
    auto a = detail::atomic_split(u, m);
    if (!a) throw std::invalid_argument("mosaic is atomically consistent");
    m.for_each([&](std::size_t t) {
      auto id = static_cast<std::uint32_t>(t);
      g.per_type[id] = conj({g.per_type[id], atom_literal(u, id, *a)});
    });
  }
  return g;
}

GeneralSeparator general_separator_base(const TypeUniverse& u) {
  GeneralSeparator g;
  g.per_type.assign(u.size(), top());
  // One representative per Σ-atom class; a pair from two classes splits on
  // their least disagreeing atom, and so does every larger mosaic.
  std::map<std::uint32_t, std::uint32_t> rep;
  for (std::uint32_t t = 0; t < u.size(); ++t) rep.emplace(u.atom_class(t), t);
  const ClosureIndex& cx = u.closure();
  for (std::uint32_t t = 0; t < u.size(); ++t) {
    std::vector<Concept> parts;
    for (const auto& [cls, r] : rep) {
      if (cls == u.atom_class(t)) continue;
      for (Name a : u.sigma_atoms()) {
        std::size_t idx = *cx.find(atom(a));
        if (u.type(t).test(idx) != u.type(r).test(idx)) {
          parts.push_back(atom_literal(u, t, a));
          break;
        }
      }
    }
    g.per_type[t] = conj(std::move(parts));
  }
  return g;
}

SeparatorMap complete_separator(const TypeUniverse& u, const std::vector<Separand>& c, const SepFor& sep_for,
                                const std::function<bool(const Mosaic&)>& eliminated, std::uint64_t max_choices) {
  std::vector<std::vector<std::uint32_t>> comps(c.size());
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    u.completions(c[i]).for_each([&](std::size_t t) { comps[i].push_back(static_cast<std::uint32_t>(t)); });
    if (comps[i].empty()) total = 0;
    if (total > max_choices / std::max<std::size_t>(comps[i].size(), 1))
      throw BudgetExceeded("completion choices exceed " + std::to_string(max_choices));
    total *= comps[i].size();
  }
  if (total == 0) {
    // cp(C) is empty: the unsatisfiable members take ⊥, the rest ⊤.
    SeparatorMap out;
    for (std::size_t i = 0; i < c.size(); ++i) out.put(c[i], comps[i].empty() ? bot() : top());
    return out;
  }
  // acc[i][k]: ⊓ of Sep_f(Xi) over the choices f with f(Xi) = comps[i][k]
  std::vector<std::vector<std::optional<Concept>>> acc(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) acc[i].resize(comps[i].size());
  std::vector<std::size_t> digit(c.size(), 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    Mosaic image = u.empty_mosaic();
    for (std::size_t i = 0; i < c.size(); ++i) image.set(comps[i][digit[i]]);
    if (!eliminated(image)) throw NoSeparator("a completion mosaic survives elimination");
    for (std::size_t i = 0; i < c.size(); ++i) {
      Concept s = sep_for(image, comps[i][digit[i]]);
      auto& slot = acc[i][digit[i]];
      slot = slot ? conj({*slot, s}) : s;
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (++digit[i] < comps[i].size()) break;
      digit[i] = 0;
    }
  }
  SeparatorMap out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<Concept> parts;
    for (const auto& slot : acc[i])
      if (slot) parts.push_back(*slot);
    out.put(c[i], disj(std::move(parts)));
  }
  return out;
}

Concept complete_from_general(const TypeUniverse& u, const GeneralSeparator& sep, const Separand& x) {
  std::vector<Concept> parts;
  u.completions(x).for_each([&](std::size_t t) { parts.push_back(sep.at(static_cast<std::uint32_t>(t))); });
  return disj(std::move(parts));
}

// ---------------------------------------------------------------------------
// Steps

StepBuilder::StepBuilder(const TypeUniverse& u, const GeneralSeparator& prev, const std::vector<Mosaic>& family,
                         Reasoner& reasoner, SeparatorBudget budget)
    : u_(u), prev_(prev), family_(family), rs_(reasoner), budget_(budget) {}

Concept StepBuilder::sep_d(const Separand& x) {
  for (const auto& [k, v] : sep_d_memo_)
    if (k == x) return v;
  Concept c = complete_from_general(u_, prev_, x);
  sep_d_memo_.emplace_back(x, c);
  return c;
}

SeparatorMap StepBuilder::alch(const EliminationRecord& rec) {
  if (rec.reason != EliminationRecord::Reason::StepALCH) throw std::invalid_argument("not an ALCH step record");
  const Mosaic& tm = rec.mosaic;
  if (tm.count() < 2) throw InternalError("ALCH step on a singleton mosaic");
  const ClosureEntry& ex = u_.closure().entry(rec.existential);
  std::vector<Name> ss = u_.sigma_supers(rec.role);

  Separand own = u_.succ(rec.type, rec.role);
  own.add(ex.kids[0]);
  std::vector<Separand> d{own};
  tm.for_each([&](std::size_t t) {
    for (Name s : ss) d.push_back(u_.succ(t, s));
  });
  // Every completion mosaic of D must already be gone.
  for (const Mosaic& m : family_) {
    bool all = std::all_of(d.begin(), d.end(), [&](const Separand& x) { return u_.completions(x).intersects(m); });
    if (all) throw InternalError("ALCH step record is not bad against its round: trace corrupted");
  }

  SeparatorMap out;
  std::vector<Concept> others;
  std::vector<std::pair<std::uint32_t, Concept>> entries;
  tm.for_each([&](std::size_t t) {
    if (t == rec.type) return;
    std::vector<Concept> parts;
    for (Name s : ss) parts.push_back(all(s, sep_d(u_.succ(t, s))));
    Concept c = conj(std::move(parts));
    others.push_back(c);
    entries.emplace_back(static_cast<std::uint32_t>(t), c);
  });
  entries.emplace_back(rec.type, neg(conj(others)));
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [t, c] : entries) {
    if (c.is_bot()) throw InternalError("ALCH step produced ⊥ for realizable type t" + std::to_string(t));
    out.put(type_separand(u_, t), c);
  }
  return out;
}

Concept StepBuilder::nabla(Name r, const std::vector<Concept>& b) {
  std::vector<Concept> parts;
  for (Concept c : b) parts.push_back(some(r, c));
  parts.push_back(all(r, disj(b)));
  return conj(std::move(parts));
}

const std::vector<Concept>& StepBuilder::v_plus() {
  if (v_plus_) return *v_plus_;
  std::vector<Concept> values;
  for (Concept c : prev_.per_type)
    if (!c.is_top()) values.push_back(c);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<Concept> out;
  std::vector<Concept> lits;
  auto dfs = [&](auto&& self, std::size_t k) -> void {
    Concept partial = conj(lits);
    if (!rs_.sat(partial)) return;
    if (k == values.size()) {
      if (out.size() >= budget_.max_patterns)
        throw BudgetExceeded("more than " + std::to_string(budget_.max_patterns) +
                             " satisfiable sign patterns over the previous separators");
      out.push_back(partial);
      return;
    }
    for (bool pos : {true, false}) {
      lits.push_back(pos ? values[k] : neg(values[k]));
      self(self, k + 1);
      lits.pop_back();
    }
  };
  dfs(dfs, 0);
  v_plus_ = std::move(out);
  return *v_plus_;
}

Concept StepBuilder::delta(std::uint32_t t, Name r) {
  for (const auto& [k, v] : delta_memo_)
    if (k.first == t && k.second == r) return v;
  const std::vector<Concept>& vp = v_plus();
  Concept tc = type_concept(u_.closure(), u_.type(t));
  std::vector<Concept> disjuncts;
  std::vector<Concept> b, exists;
  std::uint64_t visited = 0;
  auto dfs = [&](auto&& self, std::size_t start) -> void {
    if (++visited > budget_.max_delta_sets)
      throw BudgetExceeded("δ construction visited more than " + std::to_string(budget_.max_delta_sets) + " sets");
    Concept nb = nabla(r, b);
    if (rs_.sat(conj({tc, nb}))) disjuncts.push_back(nb);
    for (std::size_t j = start; j < vp.size(); ++j) {
      b.push_back(vp[j]);
      exists.push_back(some(r, vp[j]));
      // t ⊓ ⊓∃r.C is monotone in B: prune every superset once it fails.
      if (rs_.sat(conj({tc, conj(exists)}))) self(self, j + 1);
      b.pop_back();
      exists.pop_back();
    }
  };
  dfs(dfs, 0);
  Concept d = disj(std::move(disjuncts));
  delta_memo_.emplace_back(std::make_pair(t, r), d);
  return d;
}

SeparatorMap StepBuilder::alcq(const EliminationRecord& rec) {
  if (rec.reason != EliminationRecord::Reason::StepALCQ) throw std::invalid_argument("not an ALCQ step record");
  const Mosaic& tm = rec.mosaic;
  if (tm.count() < 2) throw InternalError("ALCQ step on a singleton mosaic");
  auto t0 = static_cast<std::uint32_t>(tm.first());
  std::vector<std::pair<std::uint32_t, Concept>> entries;
  std::vector<Concept> others;
  tm.for_each([&](std::size_t t) {
    if (t == t0) return;
    Concept d = delta(static_cast<std::uint32_t>(t), rec.role);
    others.push_back(d);
    entries.emplace_back(static_cast<std::uint32_t>(t), d);
  });
  entries.insert(entries.begin(), {t0, neg(conj(others))});
  SeparatorMap out;
  for (const auto& [t, c] : entries) out.put(type_separand(u_, t), c);
  return out;
}

// ---------------------------------------------------------------------------

SeparatorRun build_separators(const TypeUniverse& u, const Elimination& e, Reasoner& reasoner, bool keep_records,
                              SeparatorBudget budget) {
  SeparatorRun run;
  run.by_round.push_back(general_separator_base(u));
  if (keep_records) {
    auto [b, end] = e.round_records(0);
    for (std::size_t k = b; k < end; ++k)
      run.per_record.push_back(base_separator(u, e.trace[k].mosaic, e.trace[k].atom));
  }
  for (std::size_t round = 1; round < e.rounds(); ++round) {
    const GeneralSeparator& prev = run.by_round.back();
    std::vector<Mosaic> family = e.before(u, round);
    StepBuilder sb(u, prev, family, reasoner, budget);
    GeneralSeparator next = prev;
    auto [b, end] = e.round_records(round);
    for (std::size_t k = b; k < end; ++k) {
      const EliminationRecord& rec = e.trace[k];
      SeparatorMap m = rec.reason == EliminationRecord::Reason::StepALCH ? sb.alch(rec) : sb.alcq(rec);
      std::size_t j = 0;
      rec.mosaic.for_each([&](std::size_t t) {
        next.per_type[t] = conj({next.per_type[t], m.entries.at(j++).second});
      });
      if (keep_records) run.per_record.push_back(std::move(m));
    }
    run.by_round.push_back(std::move(next));
  }
  return run;
}

SeparatorMap::Status certify(SeparatorMap& sep, const TypeUniverse& u, Reasoner& reasoner) {
  std::vector<Concept> all_entries;
  for (std::size_t k = 0; k < sep.entries.size(); ++k) {
    const auto& [x, c] = sep.entries[k];
    all_entries.push_back(c);
    if (!within_signature(c, u.sigma()) || !is_alc(c)) {
      sep.status = SeparatorMap::Status::Failed;
      sep.failure = "entry " + std::to_string(k) + " is not an ALC(Σ) concept";
      return sep.status;
    }
    if (!reasoner.entails(separand_concept(u, x), c)) {
      sep.status = SeparatorMap::Status::Failed;
      sep.failure = "entry " + std::to_string(k) + " is not entailed by its separand";
      return sep.status;
    }
  }
  if (reasoner.sat(conj(all_entries))) {
    sep.status = SeparatorMap::Status::Failed;
    sep.failure = "conjunction of the entries is satisfiable (not ⊑ ⊥)";
    return sep.status;
  }
  sep.status = SeparatorMap::Status::Certified;
  return sep.status;
}

}  // namespace dlinterp
