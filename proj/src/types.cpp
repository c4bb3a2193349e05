// Closure-level type operations: candidates, realizability, witnessing
// functions.

#include <algorithm>
#include <map>
#include <numeric>

#include "dlinterp/errors.hpp"
#include "dlinterp/reasoner.hpp"

namespace dlinterp {

namespace {

constexpr std::size_t kMaxFreeBits = 26;

std::uint32_t add_sat(std::uint32_t a, std::uint32_t b) {
  if (a == kInfinity || b == kInfinity) return kInfinity;
  std::uint64_t s = std::uint64_t{a} + b;
  return s >= kInfinity ? kInfinity : static_cast<std::uint32_t>(s);
}

bool ci_ok(const ClosureIndex& cx, const Ontology& o, const Bitset& t) {
  for (const auto& ci : o.cis())
    if (ClosureIndex::holds(t, cx.lit(ci.lhs)) && !ClosureIndex::holds(t, cx.lit(ci.rhs)))
      return false;
  return true;
}

// Patterns of the counted children over a support, each with the least type
// realizing it.
struct PatternGroup {
  std::vector<bool> has;  // per constraint
  std::size_t rep = 0;    // index into support
};

std::vector<PatternGroup> group_by_pattern(const std::vector<CountConstraint>& cons,
                                           const std::vector<Bitset>& support) {
  std::map<std::vector<bool>, std::size_t> seen;
  std::vector<PatternGroup> out;
  for (std::size_t k = 0; k < support.size(); ++k) {
    std::vector<bool> has(cons.size());
    for (std::size_t c = 0; c < cons.size(); ++c)
      has[c] = ClosureIndex::holds(support[k], cons[c].child);
    if (seen.emplace(has, k).second) out.push_back({std::move(has), k});
  }
  return out;
}

// DFS over group totals in {0..m*-1, ∞} satisfying every constraint.
bool search_totals(const std::vector<CountConstraint>& cons, const std::vector<PatternGroup>& groups,
                   std::uint32_t m_star, std::size_t g, std::vector<std::uint32_t>& sums,
                   std::vector<std::uint32_t>& chosen) {
  if (g == groups.size()) {
    for (std::size_t c = 0; c < cons.size(); ++c)
      if (sums[c] < cons[c].lo) return false;
    return true;
  }
  std::vector<std::uint32_t> options;
  for (std::uint32_t v = 0; v < m_star; ++v) options.push_back(v);
  options.push_back(kInfinity);
  for (std::uint32_t v : options) {
    bool ok = true;
    std::vector<std::uint32_t> saved = sums;
    for (std::size_t c = 0; c < cons.size() && ok; ++c) {
      if (!groups[g].has[c]) continue;
      sums[c] = add_sat(sums[c], v);
      if (cons[c].hi != kInfinity && sums[c] > cons[c].hi) ok = false;
    }
    if (ok) {
      chosen[g] = v;
      if (search_totals(cons, groups, m_star, g + 1, sums, chosen)) return true;
    }
    sums = std::move(saved);
    if (!ok && v != kInfinity) {
      // Larger finite values only overshoot further; ∞ overshoots too.
      break;
    }
  }
  return false;
}

}  // namespace

std::vector<Bitset> candidate_types(const ClosureIndex& cx, const Ontology& o) {
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < cx.size(); ++i) {
    Kind k = cx.entry(i).kind;
    if (k == Kind::Atom || k == Kind::AtLeast) free.push_back(i);
  }
  if (free.size() > kMaxFreeBits)
    throw BudgetExceeded("candidate_types: " + std::to_string(free.size()) +
                         " free closure members exceed the enumeration limit of " +
                         std::to_string(kMaxFreeBits));
  std::vector<Bitset> out;
  const std::uint64_t total = std::uint64_t{1} << free.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Bitset t(cx.size());
    t.set(0);
    for (std::size_t b = 0; b < free.size(); ++b)
      if ((mask >> b) & 1U) t.set(free[b]);
    for (std::size_t i = 0; i < cx.size(); ++i) {
      const ClosureEntry& e = cx.entry(i);
      if (e.kind != Kind::And) continue;
      bool all = std::all_of(e.kids.begin(), e.kids.end(),
                             [&](Lit l) { return ClosureIndex::holds(t, l); });
      t.assign(i, all);
    }
    if (ci_ok(cx, o, t)) out.push_back(std::move(t));
  }
  return out;
}

LitSet succ_alch(const ClosureIndex& cx, const Ontology& o, const Bitset& t, Name r) {
  LitSet out(cx.size());
  for (std::size_t i = 0; i < cx.size(); ++i) {
    const ClosureEntry& e = cx.entry(i);
    if (e.kind != Kind::AtLeast || e.count != 1 || t.test(i)) continue;
    if (!o.role_order().subsumes(r, e.name)) continue;
    // ¬∃s.X ∈ t, i.e. ∀s.¬X ∈ t
    Lit x = e.kids[0];
    out.add({x.idx, !x.pos});
  }
  return out;
}

std::vector<CountConstraint> count_constraints(const ClosureIndex& cx, const Bitset& t, Name r) {
  std::vector<CountConstraint> out;
  for (std::size_t i = 0; i < cx.size(); ++i) {
    const ClosureEntry& e = cx.entry(i);
    if (e.kind != Kind::AtLeast || e.name != r) continue;
    Lit child = e.kids[0];
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& c) { return c.child == child; });
    if (it == out.end()) {
      out.push_back({child, 0, kInfinity});
      it = out.end() - 1;
    }
    if (t.test(i)) {
      it->lo = std::max(it->lo, e.count);
    } else {
      it->hi = std::min(it->hi, e.count - 1);
    }
  }
  return out;
}

std::uint32_t WitnessingFunction::value(const Bitset& t) const {
  for (const auto& [type, v] : values)
    if (type == t) return v;
  return 0;
}

bool is_witnessing_function(const ClosureIndex& cx, const WitnessingFunction& w) {
  for (std::size_t i = 0; i < cx.size(); ++i) {
    const ClosureEntry& e = cx.entry(i);
    if (e.kind != Kind::AtLeast || e.name != w.role) continue;
    std::uint32_t sum = 0;
    for (const auto& [type, v] : w.values)
      if (ClosureIndex::holds(type, e.kids[0])) sum = add_sat(sum, v);
    if (w.source.test(i) != (sum >= e.count)) return false;
  }
  return true;
}

std::optional<WitnessingFunction> find_witnessing_function(const ClosureIndex& cx,
                                                           const Bitset& t, Name r,
                                                           const std::vector<Bitset>& support,
                                                           std::uint32_t m_star) {
  WitnessingFunction w;
  w.role = r;
  w.source = t;
  auto cons = count_constraints(cx, t, r);
  for (const auto& c : cons)
    if (c.hi != kInfinity && c.lo > c.hi) return std::nullopt;
  auto groups = group_by_pattern(cons, support);
  std::vector<std::uint32_t> sums(cons.size(), 0), chosen(groups.size(), 0);
  if (!search_totals(cons, groups, m_star, 0, sums, chosen)) return std::nullopt;
  for (std::size_t g = 0; g < groups.size(); ++g)
    if (chosen[g] != 0) w.values.emplace_back(support[groups[g].rep], chosen[g]);
  return w;
}

WitnessingFunction witness_from_model(const FiniteInterpretation& i, Element d, Name r,
                                      const ClosureIndex& cx, std::uint32_t m_star) {
  WitnessingFunction w;
  w.role = r;
  w.source = type_of(i, d, cx);
  std::map<Bitset, std::uint32_t> counts;
  for (Element e : i.successors(r, d)) ++counts[type_of(i, e, cx)];
  for (const auto& [type, n] : counts) w.values.emplace_back(type, n <= m_star ? n : kInfinity);
  return w;
}

std::vector<Bitset> realizable_types(const ClosureIndex& cx, const Ontology& o,
                                     const std::vector<std::size_t>* scan_order) {
  std::vector<Bitset> cand = candidate_types(cx, o);
  std::vector<std::size_t> order(cand.size());
  if (scan_order) {
    order = *scan_order;
    if (order.size() != cand.size()) throw std::invalid_argument("scan order size mismatch");
  } else {
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  std::vector<bool> alive(cand.size(), true);

  auto good_alch = [&](std::size_t k) {
    const Bitset& t = cand[k];
    for (std::size_t i = 0; i < cx.size(); ++i) {
      const ClosureEntry& e = cx.entry(i);
      if (e.kind != Kind::AtLeast || !t.test(i)) continue;
      LitSet need = succ_alch(cx, o, t, e.name);
      need.add(e.kids[0]);
      bool found = false;
      for (std::size_t j = 0; j < cand.size() && !found; ++j)
        found = alive[j] && need.completed_by(cand[j]);
      if (!found) return false;
    }
    return true;
  };
  auto good_alcq = [&](std::size_t k) {
    std::vector<Bitset> support;
    for (std::size_t j = 0; j < cand.size(); ++j)
      if (alive[j]) support.push_back(cand[j]);
    for (Name r : cx.roles())
      if (!find_witnessing_function(cx, cand[k], r, support, cx.m_star())) return false;
    return true;
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k : order) {
      if (!alive[k]) continue;
      bool good = o.dialect() == Dialect::ALCH ? good_alch(k) : good_alcq(k);
      if (!good) {
        alive[k] = false;
        changed = true;
      }
    }
  }
  std::vector<Bitset> out;
  for (std::size_t k = 0; k < cand.size(); ++k)
    if (alive[k]) out.push_back(cand[k]);
  return out;
}

bool sat_by_types(const Ontology& o, Concept c) {
  std::vector<Concept> roots;
  for (const auto& ci : o.cis()) {
    roots.push_back(ci.lhs);
    roots.push_back(ci.rhs);
  }
  roots.push_back(c);
  ClosureIndex cx(roots);
  Lit l = cx.lit(c);
  for (const Bitset& t : realizable_types(cx, o))
    if (ClosureIndex::holds(t, l)) return true;
  return false;
}

}  // namespace dlinterp
