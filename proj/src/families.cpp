#include "dlinterp/families.hpp"

#include <stdexcept>

namespace dlinterp {

namespace {
std::string idx(const char* stem, int i) { return stem + std::to_string(i); }
}  // namespace

Instance alch_k(int k, bool literal) {
  if (k < 1) throw std::invalid_argument("alch-k needs k >= 1");
  Name r = intern_name("r");
  std::vector<RoleInclusion> ris;
  std::vector<Concept> as, univ;
  Signature sigma;
  for (int i = 1; i <= k; ++i) {
    Name s = intern_name(idx("s", i));
    Name sp = intern_name(idx("s", i) + "p");
    if (literal) {
      ris.push_back({r, s});
      ris.push_back({s, sp});
    } else {
      ris.push_back({r, sp});
      ris.push_back({sp, s});
    }
    Concept a = atom(idx("A", i));
    as.push_back(a);
    univ.push_back(all(s, neg(a)));
    sigma.insert(sp);
    sigma.insert(a.name());
  }
  Concept b = atom("B");
  Concept any_a = as.size() == 1 ? as[0] : disj(as);
  Concept c = conj({some(r, b), all(r, implies(b, any_a))});
  Concept d = conj(univ);
  return {Ontology(Dialect::ALCH, {}, std::move(ris)), c, neg(d), std::move(sigma)};
}

Concept alch_k_reference(int k) {
  std::vector<Concept> parts;
  for (int i = 1; i <= k; ++i)
    parts.push_back(some(intern_name(idx("s", i) + "p"), atom(idx("A", i))));
  return parts.size() == 1 ? parts[0] : disj(parts);
}

Instance alch_tower() {
  Name r = intern_name("r"), s = intern_name("s"), sp = intern_name("sp");
  Signature sigma;
  sigma.insert(s);
  sigma.insert(sp);
  return {Ontology(Dialect::ALCH, {}, {{r, s}, {r, sp}}), some(r, top()), top(), sigma};
}

Instance alcq_tower() {
  Name r = intern_name("r");
  Signature sigma;
  sigma.insert(r);
  sigma.insert(intern_name("s"));
  sigma.insert(intern_name("sp"));
  return {Ontology(Dialect::ALCQ, {}, {}), at_most(1, r, top()), top(), sigma};
}

}  // namespace dlinterp
