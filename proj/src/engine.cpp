// On-the-fly Hintikka-set elimination.
//
// OR-nodes are keyed by an initial label (a set of signed concepts) and
// lazily enumerate its saturated expansions by DFS with semantic branching.
// AND-nodes are keyed by the modal/atomic literals of one expansion and
// require successor OR-nodes. Unsatisfiability is propagated through a
// worklist; anything not refuted at quiescence is satisfiable (greatest
// fixpoint), so the node graph is a shared cache across queries.
//
// TBox: CIs with an atomic left-hand side are unfolded lazily, the rest are
// internalized into every label.

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "dlinterp/errors.hpp"
#include "dlinterp/reasoner.hpp"

namespace dlinterp {

namespace {

// A signed concept: `base` is never a negation.
using Item = std::uint64_t;
Item make_item(Concept c, bool pos) {
  if (c.kind() == Kind::Not) return (std::uint64_t{c.child().id()} << 1) | (pos ? 0U : 1U);
  return (std::uint64_t{c.id()} << 1) | (pos ? 1U : 0U);
}
Concept item_base(Item i) { return Concept(static_cast<std::uint32_t>(i >> 1)); }
bool item_pos(Item i) { return (i & 1U) != 0; }
Item item_neg(Item i) { return i ^ 1U; }

using Label = std::vector<Item>;  // sorted, unique

struct LabelHash {
  std::size_t operator()(const Label& l) const {
    std::size_t h = l.size();
    for (Item i : l) h = (h ^ i) * 0x100000001B3ULL + (h >> 29);
    return h;
  }
};

void normalize(Label& l) {
  std::sort(l.begin(), l.end());
  l.erase(std::unique(l.begin(), l.end()), l.end());
}

enum class Status : std::uint8_t { Open, Unsat };

// DFS state of one branch of an expansion.
struct Branch {
  std::vector<Item> todo;
  std::unordered_map<std::uint32_t, bool> truth;  // base id -> polarity
  std::vector<std::uint32_t> disj;                // And bases asserted false
};

// Per-role requirement of an ALCQ AND-node.
struct CountReq {
  Name role = 0;
  std::vector<Concept> kids;  // free counted children
  std::vector<std::uint32_t> lo, hi;
  std::vector<std::uint32_t> pattern_mask;  // per pattern: bit k = kid k true
  std::vector<std::uint32_t> pattern_or;    // per pattern: OR-node id
  std::vector<std::uint32_t> solution;      // multiplicity per pattern
};

struct AndNode {
  Label lits;
  Status status = Status::Open;
  bool explored = false;
  std::vector<std::uint32_t> parents;  // OR-nodes that selected this node
  // ALCH: (role, OR-node) per existential.
  std::vector<std::pair<Name, std::uint32_t>> reqs;
  // ALCQ
  std::vector<CountReq> counts;
};

struct OrNode {
  Label label;
  Status status = Status::Open;
  bool started = false;
  std::int64_t current = -1;
  std::vector<Branch> stack;
  std::vector<std::uint32_t> parents;  // AND-nodes requiring this node
};

}  // namespace

class Engine {
 public:
  Engine(const Ontology& o, const ReasonerBudget& budget) : o_(o), budget_(budget) {
    for (const auto& ci : o.cis()) {
      if (ci.lhs.kind() == Kind::Atom) {
        unfold_[ci.lhs.id()].push_back(make_item(ci.rhs, true));
      } else {
        internal_.push_back(make_item(conj({ci.lhs, neg(ci.rhs)}), false));
      }
    }
    normalize(internal_);
  }

  bool sat(Concept c) {
    Label l{make_item(c, true)};
    std::uint32_t o = or_node(std::move(l));
    run();
    return ors_[o].status != Status::Unsat;
  }

  std::optional<std::pair<FiniteInterpretation, Element>> model(Concept c);

  std::uint64_t nodes() const { return ands_.size() + ors_.size(); }

 private:
  enum class Ev : std::uint8_t { AdvanceOr, ExploreAnd, RecheckAnd };

  std::uint32_t or_node(Label label);
  std::uint32_t and_node(Label lits);
  void run();
  void advance(std::uint32_t o);
  void explore(std::uint32_t a);
  void recheck(std::uint32_t a);
  void kill_and(std::uint32_t a);
  void kill_or(std::uint32_t o);
  std::optional<Label> next_expansion(OrNode& node);
  bool saturate(Branch& b);
  bool feasible(CountReq& req);
  void check_budget() {
    if (nodes() > budget_.max_nodes)
      throw BudgetExceeded("reasoner node budget exceeded (" + std::to_string(budget_.max_nodes) +
                           " nodes)");
  }

  const Ontology& o_;
  ReasonerBudget budget_;
  Label internal_;
  std::unordered_map<std::uint32_t, std::vector<Item>> unfold_;
  std::vector<OrNode> ors_;
  std::vector<AndNode> ands_;
  std::unordered_map<Label, std::uint32_t, LabelHash> or_index_, and_index_;
  std::deque<std::pair<Ev, std::uint32_t>> queue_;
  std::uint64_t search_steps_ = 0;
};

std::uint32_t Engine::or_node(Label label) {
  normalize(label);
  auto it = or_index_.find(label);
  if (it != or_index_.end()) return it->second;
  check_budget();
  auto id = static_cast<std::uint32_t>(ors_.size());
  OrNode n;
  n.label = label;
  ors_.push_back(std::move(n));
  or_index_.emplace(std::move(label), id);
  queue_.emplace_back(Ev::AdvanceOr, id);
  return id;
}

std::uint32_t Engine::and_node(Label lits) {
  auto it = and_index_.find(lits);
  if (it != and_index_.end()) return it->second;
  check_budget();
  auto id = static_cast<std::uint32_t>(ands_.size());
  AndNode n;
  n.lits = lits;
  ands_.push_back(std::move(n));
  and_index_.emplace(std::move(lits), id);
  return id;
}

void Engine::run() {
  while (!queue_.empty()) {
    auto [ev, id] = queue_.front();
    queue_.pop_front();
    switch (ev) {
      case Ev::AdvanceOr: {
        OrNode& o = ors_[id];
        if (o.status == Status::Unsat) break;
        if (o.current >= 0 && ands_[o.current].status != Status::Unsat) break;
        advance(id);
        break;
      }
      case Ev::ExploreAnd:
        if (!ands_[id].explored && ands_[id].status != Status::Unsat) explore(id);
        break;
      case Ev::RecheckAnd:
        recheck(id);
        break;
    }
  }
}

void Engine::advance(std::uint32_t o) {
  while (true) {
    auto exp = next_expansion(ors_[o]);
    if (!exp) {
      kill_or(o);
      return;
    }
    std::uint32_t a = and_node(std::move(*exp));
    if (ands_[a].status == Status::Unsat) continue;
    ors_[o].current = a;
    ands_[a].parents.push_back(o);
    if (!ands_[a].explored) queue_.emplace_back(Ev::ExploreAnd, a);
    return;
  }
}

void Engine::kill_or(std::uint32_t o) {
  OrNode& n = ors_[o];
  n.status = Status::Unsat;
  n.current = -1;
  n.stack.clear();
  n.stack.shrink_to_fit();
  for (std::uint32_t p : n.parents) queue_.emplace_back(Ev::RecheckAnd, p);
}

void Engine::kill_and(std::uint32_t a) {
  AndNode& n = ands_[a];
  n.status = Status::Unsat;
  for (std::uint32_t p : n.parents)
    if (ors_[p].current == static_cast<std::int64_t>(a)) queue_.emplace_back(Ev::AdvanceOr, p);
  n.parents.clear();
}

void Engine::recheck(std::uint32_t a) {
  if (ands_[a].status == Status::Unsat || !ands_[a].explored) return;
  for (const auto& [role, o] : ands_[a].reqs) {
    (void)role;
    if (ors_[o].status == Status::Unsat) {
      kill_and(a);
      return;
    }
  }
  for (std::size_t k = 0; k < ands_[a].counts.size(); ++k) {
    if (!feasible(ands_[a].counts[k])) {
      kill_and(a);
      return;
    }
  }
}

void Engine::explore(std::uint32_t a) {
  ands_[a].explored = true;
  const Label lits = ands_[a].lits;
  // Collect modal literals.
  std::vector<Concept> pos_mod, neg_mod;
  for (Item i : lits) {
    Concept b = item_base(i);
    if (b.kind() != Kind::AtLeast) continue;
    (item_pos(i) ? pos_mod : neg_mod).push_back(b);
  }
  if (o_.dialect() == Dialect::ALCH) {
    for (Concept ex : pos_mod) {
      Name r = ex.name();
      Label l;
      l.push_back(make_item(ex.child(), true));
      for (Concept u : neg_mod)
        if (o_.role_order().subsumes(r, u.name())) l.push_back(make_item(u.child(), false));
      std::uint32_t o = or_node(std::move(l));
      ors_[o].parents.push_back(a);
      ands_[a].reqs.emplace_back(r, o);
    }
  } else {
    std::vector<Name> roles;
    for (Concept ex : pos_mod) roles.push_back(ex.name());
    std::sort(roles.begin(), roles.end());
    roles.erase(std::unique(roles.begin(), roles.end()), roles.end());
    for (Name r : roles) {
      // Bounds per counted child.
      std::vector<Concept> kids;
      std::vector<std::uint32_t> lo, hi;
      auto slot = [&](Concept c) {
        auto it = std::find(kids.begin(), kids.end(), c);
        if (it != kids.end()) return static_cast<std::size_t>(it - kids.begin());
        kids.push_back(c);
        lo.push_back(0);
        hi.push_back(kInfinity);
        return kids.size() - 1;
      };
      for (Concept ex : pos_mod)
        if (ex.name() == r) {
          std::size_t k = slot(ex.child());
          lo[k] = std::max(lo[k], ex.count());
        }
      for (Concept u : neg_mod)
        if (u.name() == r) {
          std::size_t k = slot(u.child());
          hi[k] = std::min(hi[k], u.count() - 1);
        }
      CountReq req;
      req.role = r;
      Label forced;
      for (std::size_t k = 0; k < kids.size(); ++k) {
        if (lo[k] > hi[k]) {
          kill_and(a);
          return;
        }
        if (hi[k] == 0) {
          forced.push_back(make_item(kids[k], false));
        } else {
          req.kids.push_back(kids[k]);
          req.lo.push_back(lo[k]);
          req.hi.push_back(hi[k]);
        }
      }
      if (req.kids.size() > 16)
        throw BudgetExceeded("reasoner: too many counted successors for one role");
      const std::uint32_t npat = std::uint32_t{1} << req.kids.size();
      for (std::uint32_t mask = 0; mask < npat; ++mask) {
        // Patterns that cannot help meet a lower bound are never needed.
        bool useful = false;
        for (std::size_t k = 0; k < req.kids.size(); ++k)
          if (((mask >> k) & 1U) && req.lo[k] > 0) useful = true;
        if (!useful) continue;
        Label l = forced;
        for (std::size_t k = 0; k < req.kids.size(); ++k)
          l.push_back(make_item(req.kids[k], ((mask >> k) & 1U) != 0));
        std::uint32_t o = or_node(std::move(l));
        ors_[o].parents.push_back(a);
        req.pattern_mask.push_back(mask);
        req.pattern_or.push_back(o);
      }
      ands_[a].counts.push_back(std::move(req));
    }
  }
  queue_.emplace_back(Ev::RecheckAnd, a);
}

// Integer multiplicities per live pattern meeting every bound.
bool Engine::feasible(CountReq& req) {
  const std::size_t nk = req.kids.size();
  const std::size_t np = req.pattern_mask.size();
  std::uint32_t max_lo = 0;
  for (auto v : req.lo) max_lo = std::max(max_lo, v);
  std::vector<std::uint32_t> cap(np, 0);
  for (std::size_t p = 0; p < np; ++p) {
    if (ors_[req.pattern_or[p]].status == Status::Unsat) continue;
    std::uint32_t c = max_lo;
    for (std::size_t k = 0; k < nk; ++k)
      if ((req.pattern_mask[p] >> k) & 1U) c = std::min(c, req.hi[k]);
    cap[p] = c;
  }
  std::vector<std::uint32_t> sums(nk, 0), m(np, 0);
  // Remaining capacity per kid from patterns p.. onwards, for pruning.
  std::vector<std::vector<std::uint64_t>> rest(np + 1, std::vector<std::uint64_t>(nk, 0));
  for (std::size_t p = np; p-- > 0;)
    for (std::size_t k = 0; k < nk; ++k)
      rest[p][k] = rest[p + 1][k] + (((req.pattern_mask[p] >> k) & 1U) ? cap[p] : 0);
  std::function<bool(std::size_t)> dfs = [&](std::size_t p) -> bool {
    if (++search_steps_ > budget_.max_search)
      throw BudgetExceeded("reasoner counting search budget exceeded");
    for (std::size_t k = 0; k < nk; ++k)
      if (sums[k] + rest[p][k] < req.lo[k]) return false;
    if (p == np) return true;
    for (std::uint32_t v = cap[p] + 1; v-- > 0;) {
      bool ok = true;
      for (std::size_t k = 0; k < nk; ++k)
        if (((req.pattern_mask[p] >> k) & 1U) && sums[k] + v > req.hi[k]) ok = false;
      if (!ok) continue;
      for (std::size_t k = 0; k < nk; ++k)
        if ((req.pattern_mask[p] >> k) & 1U) sums[k] += v;
      m[p] = v;
      bool found = dfs(p + 1);
      for (std::size_t k = 0; k < nk; ++k)
        if ((req.pattern_mask[p] >> k) & 1U) sums[k] -= v;
      if (found) return true;
    }
    m[p] = 0;
    return false;
  };
  if (!dfs(0)) return false;
  req.solution = m;
  return true;
}

// ---------------------------------------------------------------------------
// Expansion

bool Engine::saturate(Branch& b) {
  while (true) {
    while (!b.todo.empty()) {
      Item it = b.todo.back();
      b.todo.pop_back();
      Concept c = item_base(it);
      bool pos = item_pos(it);
      auto [slot, fresh] = b.truth.try_emplace(c.id(), pos);
      if (!fresh) {
        if (slot->second != pos) return false;
        continue;
      }
      switch (c.kind()) {
        case Kind::Top:
          if (!pos) return false;
          break;
        case Kind::Atom:
          if (pos) {
            auto u = unfold_.find(c.id());
            if (u != unfold_.end()) b.todo.insert(b.todo.end(), u->second.begin(), u->second.end());
          }
          break;
        case Kind::And:
          if (pos) {
            for (Concept k : c.children()) b.todo.push_back(make_item(k, true));
          } else {
            b.disj.push_back(c.id());
          }
          break;
        default:
          break;
      }
    }
    // Unit propagation over pending disjunctions.
    bool progress = false;
    for (std::uint32_t d : b.disj) {
      Concept c(d);
      std::size_t open = 0;
      Item last = 0;
      bool satisfied = false;
      for (Concept k : c.children()) {
        Item ki = make_item(k, true);
        auto f = b.truth.find(item_base(ki).id());
        if (f == b.truth.end()) {
          ++open;
          last = ki;
        } else if (f->second != item_pos(ki)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      if (open == 0) return false;
      if (open == 1) {
        b.todo.push_back(item_neg(last));
        progress = true;
      }
    }
    if (!progress) return true;
  }
}

std::optional<Label> Engine::next_expansion(OrNode& node) {
  if (!node.started) {
    node.started = true;
    Branch b;
    b.todo = node.label;
    b.todo.insert(b.todo.end(), internal_.begin(), internal_.end());
    node.stack.push_back(std::move(b));
  }
  while (!node.stack.empty()) {
    Branch b = std::move(node.stack.back());
    node.stack.pop_back();
    if (!saturate(b)) continue;
    // Pick the open disjunction with the fewest open disjuncts.
    std::int64_t best = -1;
    std::size_t best_open = 0;
    std::vector<Item> best_items;
    for (std::uint32_t d : b.disj) {
      Concept c(d);
      std::vector<Item> open;
      bool satisfied = false;
      for (Concept k : c.children()) {
        Item ki = make_item(k, true);
        auto f = b.truth.find(item_base(ki).id());
        if (f == b.truth.end()) {
          open.push_back(ki);
        } else if (f->second != item_pos(ki)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      if (best < 0 || open.size() < best_open) {
        best = d;
        best_open = open.size();
        best_items = std::move(open);
      }
    }
    if (best < 0) {
      Label lits;
      for (const auto& [id, pos] : b.truth) {
        Kind k = Concept(id).kind();
        if (k == Kind::Atom || k == Kind::AtLeast) lits.push_back(make_item(Concept(id), pos));
      }
      normalize(lits);
      return lits;
    }
    // Semantic branching: ¬k1 | k1 ⊓ ¬k2 | ... ; pushed so ¬k1 is tried first.
    for (std::size_t j = best_items.size(); j-- > 0;) {
      Branch child = b;
      child.todo.push_back(item_neg(best_items[j]));
      for (std::size_t i = 0; i < j; ++i) child.todo.push_back(best_items[i]);
      node.stack.push_back(std::move(child));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Model extraction

std::optional<std::pair<FiniteInterpretation, Element>> Engine::model(Concept c) {
  if (!sat(c)) return std::nullopt;
  std::uint32_t root_or = or_index_.at(Label{make_item(c, true)});
  auto root = static_cast<std::uint32_t>(ors_[root_or].current);

  // Reachable AND-nodes via current selections.
  std::vector<std::uint32_t> order{root};
  std::unordered_map<std::uint32_t, std::size_t> pos{{root, 0}};
  auto visit = [&](std::uint32_t o) {
    auto a = static_cast<std::uint32_t>(ors_[o].current);
    if (pos.emplace(a, order.size()).second) order.push_back(a);
    return a;
  };
  std::uint32_t copies = 1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    AndNode& n = ands_[order[k]];
    for (const auto& [r, o] : n.reqs) {
      (void)r;
      visit(o);
    }
    for (auto& req : n.counts) {
      if (!feasible(req)) throw InternalError("model extraction: infeasible counting node");
      for (std::size_t p = 0; p < req.solution.size(); ++p) {
        if (req.solution[p] == 0) continue;
        visit(req.pattern_or[p]);
        copies = std::max(copies, req.solution[p]);
      }
    }
  }

  FiniteInterpretation m;
  auto elem = [&](std::uint32_t a, std::uint32_t copy) {
    return static_cast<Element>(pos.at(a) * copies + copy);
  };
  for (std::size_t k = 0; k < order.size(); ++k)
    for (std::uint32_t j = 0; j < copies; ++j)
      m.add_element("e" + std::to_string(k) + (copies > 1 ? "_" + std::to_string(j) : ""));
  for (std::uint32_t a : order) {
    const AndNode& n = ands_[a];
    for (std::uint32_t j = 0; j < copies; ++j) {
      for (Item i : n.lits)
        if (item_pos(i) && item_base(i).kind() == Kind::Atom)
          m.set_atom(item_base(i).name(), elem(a, j));
      for (const auto& [r, o] : n.reqs) {
        auto b = static_cast<std::uint32_t>(ors_[o].current);
        for (Name s : o_.role_order().supers(r)) m.add_edge(s, elem(a, j), elem(b, j));
      }
      for (const auto& req : n.counts)
        for (std::size_t p = 0; p < req.solution.size(); ++p) {
          auto b = static_cast<std::uint32_t>(ors_[req.pattern_or[p]].current);
          for (std::uint32_t x = 0; x < req.solution[p]; ++x)
            m.add_edge(req.role, elem(a, j), elem(b, (j + x) % copies));
        }
    }
  }
  return std::make_pair(std::move(m), elem(root, 0));
}

// ---------------------------------------------------------------------------

Reasoner::Reasoner(Ontology o, ReasonerBudget budget)
    : o_(std::move(o)), budget_(budget), engine_(std::make_unique<Engine>(o_, budget_)) {}

Reasoner::~Reasoner() = default;

void Reasoner::check_dialect(Concept c) const {
  if (o_.dialect() == Dialect::ALCH && !is_alc(c))
    throw DialectError("counting restriction in ALCH mode");
}

bool Reasoner::sat(Concept c) {
  auto it = memo_.find(c.id());
  if (it != memo_.end()) return it->second;
  check_dialect(c);
  if (++sat_calls_ > budget_.max_sat_calls)
    throw BudgetExceeded("satisfiability call budget exceeded (" +
                         std::to_string(budget_.max_sat_calls) + " calls)");
  bool result;
  try {
    result = engine_->sat(c);
  } catch (const BudgetExceeded&) {
    // Partially explored nodes would read as satisfiable; start over.
    engine_ = std::make_unique<Engine>(o_, budget_);
    throw;
  }
  memo_.emplace(c.id(), result);
  return result;
}

std::optional<std::pair<FiniteInterpretation, Element>> Reasoner::model(Concept c) {
  check_dialect(c);
  try {
    return engine_->model(c);
  } catch (const BudgetExceeded&) {
    engine_ = std::make_unique<Engine>(o_, budget_);
    throw;
  }
}

std::uint64_t Reasoner::nodes() const { return engine_->nodes(); }

}  // namespace dlinterp
