#include "dlinterp/closure.hpp"

#include <algorithm>
#include <stdexcept>

namespace dlinterp {

ClosureIndex::ClosureIndex(const std::vector<Concept>& roots) {
  add_tree(top());
  for (Concept r : roots) add_tree(r);
  std::sort(roles_.begin(), roles_.end());
  roles_.erase(std::unique(roles_.begin(), roles_.end()), roles_.end());
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

ClosureIndex ClosureIndex::build(const Ontology& o, Concept c0, Concept d0) {
  std::vector<Concept> roots;
  for (const auto& ci : o.cis()) {
    roots.push_back(ci.lhs);
    roots.push_back(ci.rhs);
  }
  roots.push_back(c0);
  roots.push_back(d0);
  roots.push_back(neg(d0));
  return ClosureIndex(roots);
}

void ClosureIndex::add_tree(Concept root) {
  for (Concept s : subterms(root)) {
    if (s.kind() == Kind::Not) continue;  // implicit
    if (lookup_.count(s.id())) continue;
    ClosureEntry e;
    e.term = s;
    e.kind = s.kind();
    switch (s.kind()) {
      case Kind::Atom:
        e.name = s.name();
        atoms_.push_back(s.name());
        break;
      case Kind::And:
        for (Concept k : s.children()) e.kids.push_back(lit(k));
        break;
      case Kind::AtLeast:
        e.name = s.name();
        e.count = s.count();
        e.kids.push_back(lit(s.child()));
        roles_.push_back(s.name());
        m_star_ = std::max(m_star_, s.count());
        break;
      default:
        break;
    }
    auto idx = static_cast<std::uint32_t>(entries_.size());
    lookup_.emplace(s.id(), idx);
    entries_.push_back(std::move(e));
  }
}

std::optional<std::uint32_t> ClosureIndex::find(Concept c) const {
  auto it = lookup_.find(c.id());
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

bool ClosureIndex::contains(Concept c) const {
  if (c.kind() == Kind::Not) return find(c.child()).has_value();
  return find(c).has_value();
}

Lit ClosureIndex::lit(Concept c) const {
  bool pos = true;
  if (c.kind() == Kind::Not) {
    c = c.child();
    pos = false;
  }
  auto idx = find(c);
  if (!idx) throw std::out_of_range("concept not in closure");
  return {*idx, pos};
}

Concept ClosureIndex::concept_of(Lit l) const {
  Concept c = entries_.at(l.idx).term;
  return l.pos ? c : neg(c);
}

std::vector<std::uint32_t> ClosureIndex::at_least_entries(Name role) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].kind == Kind::AtLeast && entries_[i].name == role) out.push_back(i);
  return out;
}

Concept lit_set_concept(const ClosureIndex& cx, const LitSet& s) {
  std::vector<Concept> parts;
  s.pos.for_each([&](std::size_t i) { parts.push_back(cx.entry(i).term); });
  s.neg.for_each([&](std::size_t i) { parts.push_back(neg(cx.entry(i).term)); });
  return conj(std::move(parts));
}

Concept type_concept(const ClosureIndex& cx, const Bitset& t) {
  std::vector<Concept> parts;
  for (std::size_t i = 0; i < cx.size(); ++i) {
    Kind k = cx.entry(i).kind;
    if (k != Kind::Atom && k != Kind::AtLeast) continue;
    parts.push_back(t.test(i) ? cx.entry(i).term : neg(cx.entry(i).term));
  }
  return conj(std::move(parts));
}

}  // namespace dlinterp
