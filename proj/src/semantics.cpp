#include "dlinterp/semantics.hpp"

#include <algorithm>
#include <unordered_map>

#include "dlinterp/errors.hpp"

namespace dlinterp {

namespace {
const std::vector<Element> kNoSuccessors;
}

Element FiniteInterpretation::add_element(std::string label) {
  auto d = static_cast<Element>(labels_.size());
  labels_.push_back(label.empty() ? "d" + std::to_string(d) : std::move(label));
  for (auto& [_, ext] : atoms_) {
    Bitset grown(labels_.size());
    ext.for_each([&](std::size_t k) { grown.set(k); });
    ext = std::move(grown);
  }
  for (auto& [_, rows] : succ_) rows.resize(labels_.size());
  return d;
}

std::optional<Element> FiniteInterpretation::find(std::string_view label) const {
  for (std::size_t k = 0; k < labels_.size(); ++k)
    if (labels_[k] == label) return static_cast<Element>(k);
  return std::nullopt;
}

void FiniteInterpretation::set_atom(Name a, Element d) {
  auto [it, _] = atoms_.try_emplace(a, Bitset(labels_.size()));
  it->second.set(d);
}

bool FiniteInterpretation::has_atom(Name a, Element d) const {
  auto it = atoms_.find(a);
  return it != atoms_.end() && it->second.test(d);
}

void FiniteInterpretation::add_edge(Name r, Element d, Element e) {
  auto [it, _] = succ_.try_emplace(r, std::vector<std::vector<Element>>(labels_.size()));
  auto& row = it->second.at(d);
  auto pos = std::lower_bound(row.begin(), row.end(), e);
  if (pos == row.end() || *pos != e) row.insert(pos, e);
}

bool FiniteInterpretation::has_edge(Name r, Element d, Element e) const {
  const auto& row = successors(r, d);
  return std::binary_search(row.begin(), row.end(), e);
}

const std::vector<Element>& FiniteInterpretation::successors(Name r, Element d) const {
  auto it = succ_.find(r);
  if (it == succ_.end()) return kNoSuccessors;
  return it->second.at(d);
}

std::vector<Name> FiniteInterpretation::role_names() const {
  std::vector<Name> out;
  for (const auto& [r, _] : succ_) out.push_back(r);
  return out;
}

std::vector<std::pair<Element, Element>> FiniteInterpretation::edges(Name r) const {
  std::vector<std::pair<Element, Element>> out;
  auto it = succ_.find(r);
  if (it == succ_.end()) return out;
  for (Element d = 0; d < it->second.size(); ++d)
    for (Element e : it->second[d]) out.emplace_back(d, e);
  return out;
}

// ---------------------------------------------------------------------------

FiniteInterpretation parse_model(std::string_view text) {
  SexpLexer lx(text);
  FiniteInterpretation m;
  lx.expect(Token::LParen, "'('");
  Token head = lx.expect_word("'model'");
  if (head.text != "model") throw ParseError("expected 'model'", head.offset);
  auto element = [&](const Token& t) {
    auto d = m.find(t.text);
    if (!d) throw ParseError("unknown element '" + std::string(t.text) + "'", t.offset);
    return *d;
  };
  bool have_domain = false;
  while (lx.peek().kind == Token::LParen) {
    lx.next();
    Token kw = lx.expect_word("model clause");
    if (kw.text == "domain") {
      if (have_domain) throw ParseError("duplicate domain clause", kw.offset);
      have_domain = true;
      while (lx.peek().kind == Token::Word) {
        Token d = lx.next();
        if (m.find(d.text)) throw ParseError("duplicate element", d.offset);
        m.add_element(std::string(d.text));
      }
      if (m.size() == 0) throw ParseError("empty domain", kw.offset);
    } else if (kw.text == "atom") {
      if (!have_domain) throw ParseError("domain must come first", kw.offset);
      Token a = lx.expect_word("atom name");
      if (!is_name(a.text)) throw ParseError("invalid atom name", a.offset);
      m.set_atom(intern_name(a.text), element(lx.expect_word("element")));
    } else if (kw.text == "edge") {
      if (!have_domain) throw ParseError("domain must come first", kw.offset);
      Token r = lx.expect_word("role name");
      if (!is_name(r.text)) throw ParseError("invalid role name", r.offset);
      Element d = element(lx.expect_word("element"));
      Element e = element(lx.expect_word("element"));
      m.add_edge(intern_name(r.text), d, e);
    } else {
      throw ParseError("unknown model clause '" + std::string(kw.text) + "'", kw.offset);
    }
    lx.expect(Token::RParen, "')'");
  }
  lx.expect(Token::RParen, "')'");
  if (!have_domain) throw ParseError("missing domain clause", lx.offset());
  Token t = lx.next();
  if (t.kind != Token::End) throw ParseError("trailing input", t.offset);
  return m;
}

std::string print_model(const FiniteInterpretation& i) {
  std::string out = "(model\n  (domain";
  for (Element d = 0; d < i.size(); ++d) out += " " + i.label(d);
  out += ")";
  for (const auto& [a, ext] : i.atom_ext())
    ext.for_each([&](std::size_t d) {
      out += "\n  (atom " + name_str(a) + " " + i.label(static_cast<Element>(d)) + ")";
    });
  for (Name r : i.role_names())
    for (auto [d, e] : i.edges(r))
      out += "\n  (edge " + name_str(r) + " " + i.label(d) + " " + i.label(e) + ")";
  out += ")\n";
  return out;
}

// ---------------------------------------------------------------------------

Bitset eval_concept(const FiniteInterpretation& i, Concept c) {
  const std::size_t n = i.size();
  std::unordered_map<std::uint32_t, Bitset> ext;
  for (Concept s : subterms(c)) {
    Bitset v(n);
    switch (s.kind()) {
      case Kind::Top:
        for (std::size_t d = 0; d < n; ++d) v.set(d);
        break;
      case Kind::Atom: {
        auto it = i.atom_ext().find(s.name());
        if (it != i.atom_ext().end()) v = it->second;
        break;
      }
      case Kind::Not: {
        const Bitset& k = ext.at(s.child().id());
        for (std::size_t d = 0; d < n; ++d) v.assign(d, !k.test(d));
        break;
      }
      case Kind::And: {
        for (std::size_t d = 0; d < n; ++d) v.set(d);
        for (Concept k : s.children()) v &= ext.at(k.id());
        break;
      }
      case Kind::AtLeast: {
        const Bitset& k = ext.at(s.child().id());
        for (Element d = 0; d < n; ++d) {
          std::uint32_t hits = 0;
          for (Element e : i.successors(s.name(), d))
            if (k.test(e) && ++hits >= s.count()) break;
          v.assign(d, hits >= s.count());
        }
        break;
      }
    }
    ext.emplace(s.id(), std::move(v));
  }
  return ext.at(c.id());
}

bool satisfies(const FiniteInterpretation& i, Element d, Concept c) {
  return eval_concept(i, c).test(d);
}

bool is_model(const FiniteInterpretation& i, const Ontology& o) {
  for (const auto& ci : o.cis())
    if (!eval_concept(i, ci.lhs).is_subset_of(eval_concept(i, ci.rhs))) return false;
  for (const auto& ri : o.ris())
    for (auto [d, e] : i.edges(ri.sub))
      if (!i.has_edge(ri.super, d, e)) return false;
  return true;
}

// ---------------------------------------------------------------------------

BisimRelation::BisimRelation(std::size_t left, std::size_t right)
    : right_(right), rows_(left, Bitset(right)) {}

std::size_t BisimRelation::count() const {
  std::size_t c = 0;
  for (const auto& r : rows_) c += r.count();
  return c;
}

std::vector<std::pair<Element, Element>> BisimRelation::pairs() const {
  std::vector<std::pair<Element, Element>> out;
  for (Element d = 0; d < rows_.size(); ++d)
    rows_[d].for_each([&](std::size_t e) { out.emplace_back(d, static_cast<Element>(e)); });
  return out;
}

namespace {

// Names of Σ used as roles; atoms have no edges so passing all names is harmless.
std::vector<Name> sigma_roles(const Signature& sigma) {
  return {sigma.names().begin(), sigma.names().end()};
}

bool atoms_agree(const FiniteInterpretation& i, Element d, const FiniteInterpretation& j,
                 Element e, const Signature& sigma) {
  for (Name a : sigma.names())
    if (i.has_atom(a, d) != j.has_atom(a, e)) return false;
  return true;
}

// Forth for (d, e) against z: every r-successor of d is matched.
bool forth_ok(const FiniteInterpretation& i, Element d, const FiniteInterpretation& j, Element e,
              const std::vector<Name>& roles, const BisimRelation& z) {
  for (Name r : roles) {
    const auto& je = j.successors(r, e);
    for (Element d2 : i.successors(r, d)) {
      bool ok = std::any_of(je.begin(), je.end(), [&](Element e2) { return z.contains(d2, e2); });
      if (!ok) return false;
    }
  }
  return true;
}

bool back_ok(const FiniteInterpretation& i, Element d, const FiniteInterpretation& j, Element e,
             const std::vector<Name>& roles, const BisimRelation& z) {
  for (Name r : roles) {
    const auto& id = i.successors(r, d);
    for (Element e2 : j.successors(r, e)) {
      bool ok = std::any_of(id.begin(), id.end(), [&](Element d2) { return z.contains(d2, e2); });
      if (!ok) return false;
    }
  }
  return true;
}

}  // namespace

BisimRelation max_sigma_bisimulation(const FiniteInterpretation& i, const FiniteInterpretation& j,
                                     const Signature& sigma) {
  BisimRelation z(i.size(), j.size());
  for (Element d = 0; d < i.size(); ++d)
    for (Element e = 0; e < j.size(); ++e)
      if (atoms_agree(i, d, j, e, sigma)) z.insert(d, e);
  auto roles = sigma_roles(sigma);
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [d, e] : z.pairs()) {
      if (!forth_ok(i, d, j, e, roles, z) || !back_ok(i, d, j, e, roles, z)) {
        z.erase(d, e);
        changed = true;
      }
    }
  }
  return z;
}

bool is_sigma_bisimulation(const FiniteInterpretation& i, const FiniteInterpretation& j,
                           const Signature& sigma, const BisimRelation& z) {
  if (z.left_size() != i.size() || z.right_size() != j.size()) return false;
  auto roles = sigma_roles(sigma);
  for (auto [d, e] : z.pairs()) {
    if (!atoms_agree(i, d, j, e, sigma)) return false;
    if (!forth_ok(i, d, j, e, roles, z) || !back_ok(i, d, j, e, roles, z)) return false;
  }
  return true;
}

bool check_joint_consistency_witness(const Ontology& o, Concept c0, Concept d0,
                                     const Signature& sigma, const FiniteInterpretation& i1,
                                     Element e1, const FiniteInterpretation& i2, Element e2) {
  if (e1 >= i1.size() || e2 >= i2.size()) return false;
  if (!is_model(i1, o) || !is_model(i2, o)) return false;
  if (!satisfies(i1, e1, c0) || !satisfies(i2, e2, d0)) return false;
  return max_sigma_bisimulation(i1, i2, sigma).contains(e1, e2);
}

Bitset type_of(const FiniteInterpretation& i, Element d, const ClosureIndex& cx) {
  Bitset t(cx.size());
  for (std::size_t k = 0; k < cx.size(); ++k) t.assign(k, satisfies(i, d, cx.entry(k).term));
  return t;
}

}  // namespace dlinterp
