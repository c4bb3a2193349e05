// Elimination fixpoints, joint consistency, model extraction, trace export.

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "dlinterp/errors.hpp"
#include "dlinterp/mosaics.hpp"
#include "mosaic_rounds.hpp"

namespace dlinterp {

namespace {

using Branches = std::function<std::optional<std::vector<Mosaic>>(const Mosaic&)>;

// Maximal subsets of the seeds that are good, by splitting on a violation:
// every good subset of T lies in one of the branches.
std::vector<Mosaic> maximal_good(const std::vector<Mosaic>& seeds, const Branches& branches,
                                 const MosaicBudget& budget, std::uint64_t& materialized) {
  std::vector<Mosaic> found;
  std::unordered_set<Mosaic, BitsetHash> visited;
  std::uint64_t nodes = 0;
  std::function<void(const Mosaic&)> visit = [&](const Mosaic& t) {
    if (t.none() || !visited.insert(t).second) return;
    if (++nodes > budget.max_search_nodes)
      throw BudgetExceeded("mosaic search exceeded " + std::to_string(budget.max_search_nodes) + " nodes");
    ++materialized;
    for (const Mosaic& f : found)
      if (t.is_subset_of(f)) return;
    auto br = branches(t);
    if (!br) {
      found.push_back(t);
      return;
    }
    for (const Mosaic& b : *br) visit(b);
  };
  for (const Mosaic& s : seeds) visit(s);
  return detail::maximal_sets(std::move(found));
}

Mosaic pair_of(std::size_t n, std::size_t a, std::size_t b) {
  Mosaic m(n);
  m.set(a);
  m.set(b);
  return m;
}

std::vector<Mosaic> atom_classes(const TypeUniverse& u) {
  std::vector<Mosaic> classes;
  for (std::size_t id = 0; id < u.size(); ++id) {
    std::uint32_t c = u.atom_class(id);
    if (classes.size() <= c) classes.resize(c + 1, u.empty_mosaic());
    classes[c].set(id);
  }
  return detail::maximal_sets(std::move(classes));
}

EliminationRecord alch_record(const TypeUniverse& u, const Mosaic& t, std::uint32_t id, std::uint32_t e) {
  EliminationRecord rec;
  rec.reason = EliminationRecord::Reason::StepALCH;
  rec.mosaic = t;
  rec.type = id;
  rec.existential = e;
  rec.role = u.closure().entry(e).name;
  return rec;
}

EliminationRecord alcq_record(const Mosaic& t, Name r) {
  EliminationRecord rec;
  rec.reason = EliminationRecord::Reason::StepALCQ;
  rec.mosaic = t;
  rec.role = r;
  return rec;
}

void add_atomic_records(const TypeUniverse& u, Elimination& el) {
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = a + 1; b < u.size(); ++b) {
      if (u.atom_class(a) == u.atom_class(b)) continue;
      EliminationRecord rec;
      rec.reason = EliminationRecord::Reason::BaseAtomic;
      rec.mosaic = pair_of(u.size(), a, b);
      rec.atom = *detail::atomic_split(u, rec.mosaic);
      el.trace.push_back(std::move(rec));
    }
}

std::vector<std::uint32_t> type_order(const TypeUniverse& u, std::mt19937_64* rng) {
  std::vector<std::uint32_t> order(u.size());
  std::iota(order.begin(), order.end(), 0U);
  if (rng) std::shuffle(order.begin(), order.end(), *rng);
  return order;
}

Elimination eliminate_antichain(const TypeUniverse& u, const MosaicBudget& budget, std::uint64_t seed) {
  Elimination el;
  el.mode = EliminationMode::Antichain;
  std::mt19937_64 rng(seed);
  std::mt19937_64* shuffle = seed ? &rng : nullptr;
  const std::size_t n = u.size();

  el.round_begin.push_back(0);
  el.max.push_back(atom_classes(u));
  el.materialized += el.max.back().size();
  add_atomic_records(u, el);
  if (n == 0) return el;

  const std::vector<std::uint32_t> order = type_order(u, shuffle);
  for (std::uint32_t round = 1;; ++round) {
    const std::vector<Mosaic> prev = el.max.back();
    std::vector<Mosaic> seeds = prev;
    if (shuffle) std::shuffle(seeds.begin(), seeds.end(), rng);

    std::vector<Mosaic> good;
    std::function<std::optional<EliminationRecord>(const Mosaic&)> reason;
    std::optional<detail::AlchRound> alch;
    std::optional<detail::AlcqRound> alcq;
    if (u.dialect() == Dialect::ALCH) {
      alch.emplace(u, prev);
      good = maximal_good(
          seeds,
          [&](const Mosaic& t) -> std::optional<std::vector<Mosaic>> {
            auto v = alch->violation(t, &order);
            if (!v) return std::nullopt;
            std::vector<Mosaic> out;
            for (const Mosaic& p : alch->opt(v->first, v->second)) out.push_back(t & p);
            Mosaic rest = t;
            rest.reset(v->first);
            out.push_back(std::move(rest));
            return out;
          },
          budget, el.materialized);
      reason = [&](const Mosaic& t) -> std::optional<EliminationRecord> {
        auto v = alch->violation(t);
        if (!v) return std::nullopt;
        return alch_record(u, t, v->first, v->second);
      };
    } else {
      alcq.emplace(u, prev, budget);
      good = maximal_good(
          seeds,
          [&](const Mosaic& t) -> std::optional<std::vector<Mosaic>> {
            auto r = alcq->violation(t);
            if (!r) return std::nullopt;
            std::vector<Mosaic> out;
            for (const Mosaic& p : alcq->opts(*r)) out.push_back(t & p);
            return out;
          },
          budget, el.materialized);
      reason = [&](const Mosaic& t) -> std::optional<EliminationRecord> {
        auto r = alcq->violation(t);
        if (!r) return std::nullopt;
        return alcq_record(t, *r);
      };
    }
    if (good == prev) break;

    std::set<Mosaic> cores;
    for (const Mosaic& m : prev) {
      if (std::any_of(good.begin(), good.end(), [&](const Mosaic& g) { return m.is_subset_of(g); })) continue;
      std::vector<Mosaic> edges;
      for (const Mosaic& g : good) edges.push_back(m - g);
      for (Mosaic& c : detail::minimal_transversals(std::move(edges), n)) cores.insert(std::move(c));
    }
    el.round_begin.push_back(el.trace.size());
    for (const Mosaic& c : cores) {
      if (c.count() < 2)
        throw InternalError("singleton mosaic {t" + std::to_string(c.first()) +
                            "} eliminated although its type is realizable");
      auto rec = reason(c);
      if (!rec) throw InternalError("eliminated mosaic has no recorded reason");
      rec->round = round;
      el.trace.push_back(std::move(*rec));
    }
    el.max.push_back(std::move(good));
  }
  el.eliminated = el.trace.size();
  return el;
}

Mosaic from_mask(std::size_t n, std::uint64_t mask) {
  Mosaic m(n);
  for (std::size_t k = 0; k < n; ++k)
    if ((mask >> k) & 1U) m.set(k);
  return m;
}

std::vector<Mosaic> max_of_alive(std::size_t n, const std::vector<char>& alive) {
  std::vector<Mosaic> out;
  for (std::uint64_t mask = 1; mask < alive.size(); ++mask) {
    if (!alive[mask]) continue;
    bool maximal = true;
    for (std::size_t k = 0; k < n && maximal; ++k)
      if (!((mask >> k) & 1U) && alive[mask | (std::uint64_t{1} << k)]) maximal = false;
    if (maximal) out.push_back(from_mask(n, mask));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t check_exhaustive_size(const TypeUniverse& u, const MosaicBudget& budget) {
  const std::size_t n = u.size();
  if (n > budget.max_exhaustive_types || n > 30)
    throw BudgetExceeded("exhaustive mosaic enumeration over " + std::to_string(n) + " types needs 2^" +
                         std::to_string(n) + " mosaics, above the cap of 2^" +
                         std::to_string(budget.max_exhaustive_types));
  return n;
}

Elimination eliminate_exhaustive(const TypeUniverse& u, const MosaicBudget& budget, std::uint64_t seed) {
  const std::size_t n = check_exhaustive_size(u, budget);
  Elimination el;
  el.mode = EliminationMode::Exhaustive;
  if (n == 0) {
    el.round_begin.push_back(0);
    el.max.emplace_back();
    return el;
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<char> alive(total, 1);
  alive[0] = 0;
  std::vector<std::uint64_t> order(total - 1);
  std::iota(order.begin(), order.end(), std::uint64_t{1});
  if (seed) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  el.materialized = total - 1;

  el.round_begin.push_back(0);
  std::vector<std::uint64_t> kill;
  for (std::uint64_t mask : order) {
    Mosaic m = from_mask(n, mask);
    if (auto a = detail::atomic_split(u, m)) {
      EliminationRecord rec;
      rec.reason = EliminationRecord::Reason::BaseAtomic;
      rec.mosaic = std::move(m);
      rec.atom = *a;
      el.trace.push_back(std::move(rec));
      kill.push_back(mask);
    }
  }
  for (auto k : kill) alive[k] = 0;
  el.max.push_back(max_of_alive(n, alive));

  for (std::uint32_t round = 1;; ++round) {
    std::vector<Mosaic> prev = el.max.back();
    std::optional<detail::AlchRound> alch;
    std::optional<detail::AlcqRound> alcq;
    if (u.dialect() == Dialect::ALCH)
      alch.emplace(u, prev);
    else
      alcq.emplace(u, prev, budget);
    std::vector<EliminationRecord> recs;
    kill.clear();
    for (std::uint64_t mask : order) {
      if (!alive[mask]) continue;
      Mosaic m = from_mask(n, mask);
      std::optional<EliminationRecord> rec;
      if (alch) {
        if (auto v = alch->violation(m)) rec = alch_record(u, m, v->first, v->second);
      } else if (auto r = alcq->violation(m)) {
        rec = alcq_record(m, *r);
      }
      if (rec) {
        rec->round = round;
        recs.push_back(std::move(*rec));
        kill.push_back(mask);
      }
    }
    if (kill.empty()) break;
    for (auto k : kill) alive[k] = 0;
    el.round_begin.push_back(el.trace.size());
    for (auto& r : recs) el.trace.push_back(std::move(r));
    el.max.push_back(max_of_alive(n, alive));
    for (std::size_t id = 0; id < n; ++id)
      if (!alive[std::uint64_t{1} << id])
        throw InternalError("singleton mosaic {t" + std::to_string(id) +
                            "} eliminated although its type is realizable");
  }
  el.eliminated = el.trace.size();
  return el;
}

}  // namespace

std::vector<Mosaic> enumerate_mosaics(const TypeUniverse& u, const MosaicBudget& budget) {
  const std::size_t n = check_exhaustive_size(u, budget);
  if (n == 0) throw InternalError("no realizable types: the ontology is inconsistent");
  std::vector<Mosaic> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) out.push_back(from_mask(n, mask));
  return out;
}

Elimination eliminate(const TypeUniverse& u, EliminationMode mode, const MosaicBudget& budget,
                      std::uint64_t seed) {
  return mode == EliminationMode::Antichain ? eliminate_antichain(u, budget, seed)
                                            : eliminate_exhaustive(u, budget, seed);
}

std::vector<Mosaic> eliminate_sequential(const TypeUniverse& u, std::uint64_t seed, const MosaicBudget& budget) {
  const std::size_t n = check_exhaustive_size(u, budget);
  if (n > 10) throw BudgetExceeded("sequential elimination is limited to 10 types");
  if (n == 0) return {};
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<char> alive(total, 1);
  alive[0] = 0;
  std::vector<std::uint64_t> order(total - 1);
  std::iota(order.begin(), order.end(), std::uint64_t{1});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::uint64_t mask : order) {
      if (!alive[mask]) continue;
      std::vector<Mosaic> family = max_of_alive(n, alive);
      Mosaic m = from_mask(n, mask);
      bool bad = u.dialect() == Dialect::ALCH ? is_bad_alch(u, m, family).has_value()
                                              : is_bad_alcq(u, m, family, budget).has_value();
      if (bad) {
        alive[mask] = 0;
        changed = true;
      }
    }
  }
  return max_of_alive(n, alive);
}

JointConsistency decide_joint_consistency(const TypeUniverse& u, const Elimination& e,
                                          const MosaicBudget& budget) {
  JointConsistency out;
  if (u.size() == 0) return out;
  Mosaic h1 = u.holding(u.c0()), h2 = u.holding(u.n0());
  for (const Mosaic& m : e.final_max()) {
    if (!m.intersects(h1) || !m.intersects(h2)) continue;
    out.consistent = true;
    out.witness = m;
    out.t1 = static_cast<std::uint32_t>((m & h1).first());
    out.t2 = static_cast<std::uint32_t>((m & h2).first());
    break;
  }
  if (out.consistent && u.dialect() == Dialect::ALCQ) {
    detail::AlcqRound ctx(u, e.final_max(), budget);
    for (Name r : u.sigma_roles()) {
      auto cert = ctx.certificate(out.witness, r);
      if (!cert) throw InternalError("surviving mosaic has no partition for role " + name_str(r));
      out.partitions.push_back(std::move(*cert));
    }
  }
  return out;
}

Element ExtractedModel::find(std::uint32_t type, std::size_t mosaic) const {
  for (std::size_t k = 0; k < cells.size(); ++k)
    if (cells[k].first == type && cells[k].second == mosaic) return static_cast<Element>(k);
  throw std::out_of_range("no such cell");
}

ExtractedModel extract_model(const TypeUniverse& u, const Elimination& e) {
  if (u.dialect() != Dialect::ALCH) throw DialectError("model extraction needs an ALCH universe");
  const auto& maxima = e.final_max();
  if (maxima.empty()) throw InternalError("no surviving mosaic");
  ExtractedModel out;
  for (std::size_t k = 0; k < maxima.size(); ++k)
    maxima[k].for_each([&](std::size_t id) {
      out.cells.emplace_back(static_cast<std::uint32_t>(id), k);
      out.model.add_element("t" + std::to_string(id) + "_m" + std::to_string(k));
    });
  const ClosureIndex& cx = u.closure();
  for (Element d = 0; d < out.cells.size(); ++d) {
    const Bitset& t = u.type(out.cells[d].first);
    for (Name a : cx.atoms())
      if (t.test(*cx.find(atom(a)))) out.model.set_atom(a, d);
  }

  std::set<Name> roles(cx.roles().begin(), cx.roles().end());
  for (Name s : u.sigma().names())
    if (!cx.contains(atom(s))) roles.insert(s);
  for (const auto& ri : u.ontology().ris()) {
    roles.insert(ri.sub);
    roles.insert(ri.super);
  }

  auto reaches = [&](const Mosaic& from, const Mosaic& to, Name s) {
    bool all = true;
    from.for_each([&](std::size_t v) {
      if (!all) return;
      const LitSet& sv = u.succ(v, s);
      bool hit = false;
      to.for_each([&](std::size_t k) { hit = hit || sv.completed_by(u.type(k)); });
      all = hit;
    });
    return all;
  };
  for (Name r : roles) {
    std::vector<Name> ss = u.sigma_supers(r);
    std::vector<std::vector<bool>> ok(maxima.size(), std::vector<bool>(maxima.size(), true));
    for (std::size_t a = 0; a < maxima.size(); ++a)
      for (std::size_t b = 0; b < maxima.size(); ++b)
        for (Name s : ss)
          if (ok[a][b] && !reaches(maxima[a], maxima[b], s)) ok[a][b] = false;
    for (Element d = 0; d < out.cells.size(); ++d) {
      const LitSet& need = u.succ(out.cells[d].first, r);
      for (Element f = 0; f < out.cells.size(); ++f) {
        if (!ok[out.cells[d].second][out.cells[f].second]) continue;
        if (!need.completed_by(u.type(out.cells[f].first))) continue;
        for (Name s : u.ontology().supers(r)) out.model.add_edge(s, d, f);
      }
    }
  }

  out.z = BisimRelation(out.cells.size(), out.cells.size());
  for (Element d = 0; d < out.cells.size(); ++d)
    for (Element f = 0; f < out.cells.size(); ++f)
      if (out.cells[d].second == out.cells[f].second) out.z.insert(d, f);
  return out;
}

std::string export_trace(const TypeUniverse& u, const Elimination& e) {
  std::ostringstream os;
  auto mosaic = [&](const Mosaic& m) {
    std::string s = "{";
    bool first = true;
    m.for_each([&](std::size_t id) {
      s += (first ? "t" : " t") + std::to_string(id);
      first = false;
    });
    return s + "}";
  };
  for (const auto& rec : e.trace) {
    os << "round " << rec.round << ' ';
    switch (rec.reason) {
      case EliminationRecord::Reason::BaseAtomic:
        os << "base-atomic " << mosaic(rec.mosaic) << " atom " << name_str(rec.atom);
        break;
      case EliminationRecord::Reason::StepALCH:
        os << "step-alch " << mosaic(rec.mosaic) << " type t" << rec.type << " exists "
           << print_concept(u.closure().entry(rec.existential).term) << " role " << name_str(rec.role);
        break;
      case EliminationRecord::Reason::StepALCQ:
        os << "step-alcq " << mosaic(rec.mosaic) << " role " << name_str(rec.role);
        break;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace dlinterp
