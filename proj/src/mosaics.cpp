// Type universes, bad-mosaic detection and the elimination fixpoint.

#include "dlinterp/mosaics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dlinterp/errors.hpp"
#include "mosaic_rounds.hpp"
#include "partition.hpp"

namespace dlinterp {

namespace {

std::vector<Name> sorted_by_text(std::vector<Name> v) {
  std::sort(v.begin(), v.end(), [](Name a, Name b) { return name_str(a) < name_str(b); });
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// TypeUniverse

TypeUniverse::TypeUniverse(Ontology o, Concept c0, Concept n0, Signature sigma)
    : o_(std::move(o)), sigma_(std::move(sigma)), c0_(c0), n0_(n0),
      cx_(ClosureIndex::build(o_, c0, n0)), types_(realizable_types(cx_, o_)) {
  std::vector<Name> atoms, roles;
  for (Name a : cx_.atoms())
    if (sigma_.contains(a)) atoms.push_back(a);
  for (Name r : cx_.roles())
    if (sigma_.contains(r)) roles.push_back(r);
  sigma_atoms_ = sorted_by_text(std::move(atoms));
  sigma_roles_ = sorted_by_text(std::move(roles));
  std::map<std::vector<bool>, std::uint32_t> classes;
  for (const Bitset& t : types_) {
    std::vector<bool> val;
    for (Name a : sigma_atoms_) val.push_back(t.test(*cx_.find(atom(a))));
    auto [it, fresh] = classes.emplace(val, static_cast<std::uint32_t>(classes.size()));
    atom_class_.push_back(it->second);
  }
  succ_cache_.resize(types_.size());
}

Mosaic TypeUniverse::all_types() const {
  Mosaic m(types_.size());
  for (std::size_t k = 0; k < types_.size(); ++k) m.set(k);
  return m;
}

std::vector<Name> TypeUniverse::sigma_supers(Name r) const {
  std::vector<Name> out;
  for (Name s : o_.supers(r))
    if (sigma_.contains(s)) out.push_back(s);
  return sorted_by_text(std::move(out));
}

const LitSet& TypeUniverse::succ(std::size_t id, Name r) const {
  auto& row = succ_cache_[id];
  for (const auto& [role, set] : row)
    if (role == r) return set;
  row.emplace_back(r, succ_alch(cx_, o_, types_[id], r));
  return row.back().second;
}

Mosaic TypeUniverse::completions(const LitSet& x) const {
  Mosaic m(types_.size());
  for (std::size_t k = 0; k < types_.size(); ++k)
    if (x.completed_by(types_[k])) m.set(k);
  return m;
}

Mosaic TypeUniverse::holding(Concept c) const {
  Lit l = cx_.lit(c);
  Mosaic m(types_.size());
  for (std::size_t k = 0; k < types_.size(); ++k)
    if (ClosureIndex::holds(types_[k], l)) m.set(k);
  return m;
}

// ---------------------------------------------------------------------------
// Elimination bookkeeping

std::vector<Mosaic> Elimination::before(const TypeUniverse& u, std::size_t round) const {
  if (round == 0) {
    if (u.size() == 0) return {};
    return {u.all_types()};
  }
  return max.at(round - 1);
}

bool Elimination::survives(const Mosaic& m) const {
  for (const Mosaic& x : final_max())
    if (m.is_subset_of(x)) return true;
  return false;
}

std::pair<std::size_t, std::size_t> Elimination::round_records(std::size_t round) const {
  std::size_t b = round_begin.at(round);
  std::size_t e = round + 1 < round_begin.size() ? round_begin[round + 1] : trace.size();
  return {b, e};
}

// ---------------------------------------------------------------------------
// Literal badness checks

namespace detail {

std::optional<Name> atomic_split(const TypeUniverse& u, const Mosaic& t) {
  const ClosureIndex& cx = u.closure();
  for (Name a : u.sigma_atoms()) {
    std::size_t idx = *cx.find(atom(a));
    bool pos = false, neg = false;
    t.for_each([&](std::size_t id) { (u.type(id).test(idx) ? pos : neg) = true; });
    if (pos && neg) return a;
  }
  return std::nullopt;
}

}  // namespace detail

std::optional<EliminationRecord> is_bad_alch(const TypeUniverse& u, const Mosaic& t,
                                             const std::vector<Mosaic>& family) {
  if (auto a = detail::atomic_split(u, t)) {
    EliminationRecord rec;
    rec.reason = EliminationRecord::Reason::BaseAtomic;
    rec.mosaic = t;
    rec.atom = *a;
    return rec;
  }
  const ClosureIndex& cx = u.closure();
  for (std::size_t id = t.first(); id < t.size(); id = t.next(id + 1)) {
    const Bitset& tt = u.type(id);
    for (std::size_t i = 0; i < cx.size(); ++i) {
      const ClosureEntry& e = cx.entry(i);
      if (e.kind != Kind::AtLeast || !tt.test(i)) continue;
      LitSet need = u.succ(id, e.name);
      need.add(e.kids[0]);
      std::vector<Name> ss = u.sigma_supers(e.name);
      bool found = false;
      for (const Mosaic& m : family) {
        // (a) some member of m realizes the existential compatibly
        bool a = false;
        m.for_each([&](std::size_t k) { a = a || need.completed_by(u.type(k)); });
        if (!a) continue;
        // (b) t ⤳_s m for every Σ-super-role s
        bool b = true;
        for (Name s : ss) {
          for (std::size_t v = t.first(); v < t.size() && b; v = t.next(v + 1)) {
            const LitSet& sv = u.succ(v, s);
            bool hit = false;
            m.for_each([&](std::size_t k) { hit = hit || sv.completed_by(u.type(k)); });
            b = hit;
          }
          if (!b) break;
        }
        if (b) {
          found = true;
          break;
        }
      }
      if (!found) {
        EliminationRecord rec;
        rec.reason = EliminationRecord::Reason::StepALCH;
        rec.mosaic = t;
        rec.type = static_cast<std::uint32_t>(id);
        rec.existential = static_cast<std::uint32_t>(i);
        rec.role = e.name;
        return rec;
      }
    }
  }
  return std::nullopt;
}

std::optional<EliminationRecord> is_bad_alcq(const TypeUniverse& u, const Mosaic& t,
                                             const std::vector<Mosaic>& family,
                                             const MosaicBudget& budget) {
  if (auto a = detail::atomic_split(u, t)) {
    EliminationRecord rec;
    rec.reason = EliminationRecord::Reason::BaseAtomic;
    rec.mosaic = t;
    rec.atom = *a;
    return rec;
  }
  if (family.size() > budget.max_partition_family)
    throw BudgetExceeded("partition family of " + std::to_string(family.size()) +
                         " maximal mosaics exceeds the limit of " +
                         std::to_string(budget.max_partition_family));
  detail::PartitionSearch search{0, budget.max_partition_nodes};
  for (Name r : u.sigma_roles()) {
    bool found = false;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << family.size()) && !found; ++mask) {
      std::vector<Mosaic> s;
      for (std::size_t k = 0; k < family.size(); ++k)
        if ((mask >> k) & 1U) s.push_back(family[k]);
      bool all = true;
      for (std::size_t id = t.first(); id < t.size() && all; id = t.next(id + 1))
        all = detail::find_partition_row(u, static_cast<std::uint32_t>(id), r, s, search).has_value();
      found = all;
    }
    if (!found) {
      EliminationRecord rec;
      rec.reason = EliminationRecord::Reason::StepALCQ;
      rec.mosaic = t;
      rec.role = r;
      return rec;
    }
  }
  return std::nullopt;
}

bool check_partition(const TypeUniverse& u, const Mosaic& t, const PartitionCertificate& cert,
                     const std::vector<Mosaic>& family) {
  for (const Mosaic& m : cert.s) {
    bool in = std::any_of(family.begin(), family.end(), [&](const Mosaic& f) { return m.is_subset_of(f); });
    if (!in || m.none()) return false;
  }
  std::vector<bool> covered_row;
  for (std::size_t id = t.first(); id < t.size(); id = t.next(id + 1)) {
    auto it = std::find_if(cert.rows.begin(), cert.rows.end(), [&](const auto& row) { return row.type == id; });
    if (it == cert.rows.end()) return false;
    const auto& row = *it;
    if (row.w.role != cert.role || !(row.w.source == u.type(id))) return false;
    if (!is_witnessing_function(u.closure(), row.w)) return false;
    std::vector<bool> covered(cert.s.size(), false);
    for (const auto& [tp, v] : row.w.values) {
      if (v == 0) continue;
      auto at = std::find_if(row.assign.begin(), row.assign.end(), [&](const auto& a) { return a.first == tp; });
      if (at == row.assign.end() || at->second.empty()) return false;
      if (v != kInfinity && at->second.size() > v) return false;
      auto tid = std::find(u.types().begin(), u.types().end(), tp);
      if (tid == u.types().end()) return false;
      std::size_t tix = static_cast<std::size_t>(tid - u.types().begin());
      for (std::size_t k : at->second) {
        if (k >= cert.s.size() || !cert.s[k].test(tix)) return false;
        covered[k] = true;
      }
    }
    if (std::find(covered.begin(), covered.end(), false) != covered.end()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Round contexts

namespace detail {

AlchRound::AlchRound(const TypeUniverse& u, const std::vector<Mosaic>& family)
    : u_(u), family_(family) {}

const Mosaic& AlchRound::pre(std::size_t m, Name s) {
  auto key = std::make_pair(m, s);
  auto it = pre_.find(key);
  if (it != pre_.end()) return it->second;
  Mosaic out(u_.size());
  for (std::size_t v = 0; v < u_.size(); ++v) {
    const LitSet& sv = u_.succ(v, s);
    bool hit = false;
    family_[m].for_each([&](std::size_t k) { hit = hit || sv.completed_by(u_.type(k)); });
    if (hit) out.set(v);
  }
  return pre_.emplace(key, std::move(out)).first->second;
}

const std::vector<Mosaic>& AlchRound::opt(std::uint32_t t, std::uint32_t e) {
  std::uint64_t key = (std::uint64_t{t} << 32) | e;
  auto it = opt_.find(key);
  if (it != opt_.end()) return it->second;
  const ClosureEntry& entry = u_.closure().entry(e);
  LitSet need = u_.succ(t, entry.name);
  need.add(entry.kids[0]);
  Mosaic cand = u_.completions(need);
  std::vector<Name> ss = u_.sigma_supers(entry.name);
  std::vector<Mosaic> ps;
  for (std::size_t m = 0; m < family_.size(); ++m) {
    if (!family_[m].intersects(cand)) continue;
    Mosaic p = u_.all_types();
    for (Name s : ss) p &= pre(m, s);
    ps.push_back(std::move(p));
  }
  return opt_.emplace(key, maximal_sets(std::move(ps))).first->second;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> AlchRound::violation(
    const Mosaic& t, const std::vector<std::uint32_t>* order) {
  const ClosureIndex& cx = u_.closure();
  auto check = [&](std::uint32_t id) -> std::optional<std::uint32_t> {
    const Bitset& tt = u_.type(id);
    for (std::size_t i = 0; i < cx.size(); ++i) {
      if (cx.entry(i).kind != Kind::AtLeast || !tt.test(i)) continue;
      const auto& ps = opt(id, static_cast<std::uint32_t>(i));
      if (std::none_of(ps.begin(), ps.end(), [&](const Mosaic& p) { return t.is_subset_of(p); }))
        return static_cast<std::uint32_t>(i);
    }
    return std::nullopt;
  };
  if (order) {
    for (std::uint32_t id : *order)
      if (t.test(id))
        if (auto e = check(id)) return std::make_pair(id, *e);
    return std::nullopt;
  }
  for (std::size_t id = t.first(); id < t.size(); id = t.next(id + 1))
    if (auto e = check(static_cast<std::uint32_t>(id))) return std::make_pair(static_cast<std::uint32_t>(id), *e);
  return std::nullopt;
}

AlcqRound::AlcqRound(const TypeUniverse& u, const std::vector<Mosaic>& family, const MosaicBudget& budget)
    : u_(u), family_(family), search_{0, budget.max_partition_nodes} {
  if (family.size() > budget.max_partition_family)
    throw BudgetExceeded("partition family of " + std::to_string(family.size()) +
                         " maximal mosaics exceeds the limit of " +
                         std::to_string(budget.max_partition_family));
  for (const Mosaic& m : family_) {
    if (support_.size() == 0) support_ = Mosaic(m.size());
    support_ |= m;
  }
}

const std::vector<std::pair<std::uint64_t, Mosaic>>& AlcqRound::table(Name r) {
  auto it = table_.find(r);
  if (it != table_.end()) return it->second;
  // A row depends on the type only through its counting constraints on r.
  struct Class {
    std::uint32_t rep = 0;
    bool never = false;           // some lower bound can never be met
    bool free = true;             // no usable successor sits under a finite bound
    std::uint64_t usable = 0;     // members holding a successor with nonzero bound
    std::vector<std::uint64_t> need;  // per positive lower bound: members that help
  };
  std::map<std::vector<std::uint32_t>, std::size_t> index;
  std::vector<Class> classes;
  std::vector<std::size_t> cls_of(u_.size(), 0);
  std::vector<std::uint64_t> fam(u_.size(), 0);
  for (std::size_t id = 0; id < u_.size(); ++id)
    for (std::size_t k = 0; k < family_.size(); ++k)
      if (family_[k].test(id)) fam[id] |= std::uint64_t{1} << k;
  for (std::size_t id = support_.first(); id < support_.size(); id = support_.next(id + 1)) {
    auto cons = count_constraints(u_.closure(), u_.type(id), r);
    std::vector<std::uint32_t> key;
    for (const auto& c : cons) key.insert(key.end(), {c.child.idx, c.child.pos ? 1U : 0U, c.lo, c.hi});
    auto [it, fresh] = index.emplace(std::move(key), classes.size());
    cls_of[id] = it->second;
    if (!fresh) continue;
    Class cl;
    cl.rep = static_cast<std::uint32_t>(id);
    std::vector<std::uint64_t> need(cons.size(), 0);
    for (std::size_t v = 0; v < u_.size(); ++v) {
      if (fam[v] == 0) continue;
      std::uint32_t bound = kInfinity;
      for (const auto& c : cons)
        if (ClosureIndex::holds(u_.type(v), c.child)) bound = std::min(bound, c.hi);
      if (bound == 0) continue;
      if (bound != kInfinity) cl.free = false;
      cl.usable |= fam[v];
      for (std::size_t c = 0; c < cons.size(); ++c)
        if (ClosureIndex::holds(u_.type(v), cons[c].child)) need[c] |= fam[v];
    }
    for (std::size_t c = 0; c < cons.size(); ++c) {
      if (cons[c].hi != kInfinity && cons[c].lo > cons[c].hi) cl.never = true;
      if (cons[c].lo == 0) continue;
      if (need[c] == 0) cl.never = true;
      cl.need.push_back(need[c]);
    }
    classes.push_back(std::move(cl));
  }
  std::vector<std::pair<std::uint64_t, Mosaic>> rows;
  std::set<Mosaic> seen;
  std::vector<char> ok(classes.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << family_.size()); ++mask) {
    std::vector<Mosaic> s;
    for (std::size_t k = 0; k < classes.size(); ++k) {
      const Class& cl = classes[k];
      // Every member must be covered by a usable successor, every lower
      // bound met inside ∪S; for free classes that is also sufficient.
      ok[k] = !cl.never && (mask & ~cl.usable) == 0 &&
              std::all_of(cl.need.begin(), cl.need.end(), [&](std::uint64_t n) { return (mask & n) != 0; });
      if (!ok[k] || cl.free) continue;
      if (s.empty() && mask != 0)
        for (std::size_t j = 0; j < family_.size(); ++j)
          if ((mask >> j) & 1U) s.push_back(family_[j]);
      ok[k] = find_partition_row(u_, cl.rep, r, s, search_).has_value();
    }
    Mosaic g(u_.size());
    for (std::size_t id = support_.first(); id < support_.size(); id = support_.next(id + 1))
      if (ok[cls_of[id]]) g.set(id);
    if (g.any() && seen.insert(g).second) rows.emplace_back(mask, std::move(g));
  }
  return table_.emplace(r, std::move(rows)).first->second;
}

const std::vector<Mosaic>& AlcqRound::opts(Name r) {
  auto it = opts_.find(r);
  if (it != opts_.end()) return it->second;
  std::vector<Mosaic> gs;
  for (const auto& [mask, g] : table(r)) gs.push_back(g);
  return opts_.emplace(r, maximal_sets(std::move(gs))).first->second;
}

std::optional<Name> AlcqRound::violation(const Mosaic& t) {
  for (Name r : u_.sigma_roles()) {
    const auto& ps = opts(r);
    if (std::none_of(ps.begin(), ps.end(), [&](const Mosaic& p) { return t.is_subset_of(p); })) return r;
  }
  return std::nullopt;
}

std::optional<PartitionCertificate> AlcqRound::certificate(const Mosaic& t, Name r) {
  for (const auto& [mask, g] : table(r)) {
    if (!t.is_subset_of(g)) continue;
    PartitionCertificate cert;
    cert.role = r;
    for (std::size_t k = 0; k < family_.size(); ++k)
      if ((mask >> k) & 1U) cert.s.push_back(family_[k]);
    for (std::size_t id = t.first(); id < t.size(); id = t.next(id + 1))
      cert.rows.push_back(*find_partition_row(u_, static_cast<std::uint32_t>(id), r, cert.s, search_));
    return cert;
  }
  return std::nullopt;
}

std::vector<Mosaic> maximal_sets(std::vector<Mosaic> sets) {
  std::sort(sets.begin(), sets.end(), [](const Mosaic& a, const Mosaic& b) {
    std::size_t ca = a.count(), cb = b.count();
    return ca != cb ? ca > cb : a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<Mosaic> out;
  for (auto& s : sets) {
    if (s.none()) continue;
    if (std::any_of(out.begin(), out.end(), [&](const Mosaic& o) { return s.is_subset_of(o); })) continue;
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Mosaic> minimal_transversals(std::vector<Mosaic> edges, std::size_t n) {
  // Drop edges that contain another edge.
  std::sort(edges.begin(), edges.end(), [](const Mosaic& a, const Mosaic& b) {
    std::size_t ca = a.count(), cb = b.count();
    return ca != cb ? ca < cb : a < b;
  });
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<Mosaic> kept;
  for (auto& e : edges)
    if (std::none_of(kept.begin(), kept.end(), [&](const Mosaic& k) { return k.is_subset_of(e); }))
      kept.push_back(std::move(e));
  std::vector<Mosaic> tr{Mosaic(n)};
  for (const Mosaic& e : kept) {
    std::vector<Mosaic> next;
    for (const Mosaic& x : tr) {
      if (x.intersects(e)) {
        next.push_back(x);
        continue;
      }
      e.for_each([&](std::size_t v) {
        Mosaic y = x;
        y.set(v);
        next.push_back(std::move(y));
      });
    }
    std::sort(next.begin(), next.end(), [](const Mosaic& a, const Mosaic& b) {
      std::size_t ca = a.count(), cb = b.count();
      return ca != cb ? ca < cb : a < b;
    });
    next.erase(std::unique(next.begin(), next.end()), next.end());
    tr.clear();
    for (auto& x : next)
      if (std::none_of(tr.begin(), tr.end(), [&](const Mosaic& k) { return k.is_subset_of(x); }))
        tr.push_back(std::move(x));
  }
  std::sort(tr.begin(), tr.end());
  return tr;
}

}  // namespace detail

}  // namespace dlinterp
