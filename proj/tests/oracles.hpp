#pragma once

// Independent test oracles: random terms, exhaustive finite-model search,
// brute-force closures. Nothing here calls into the decision procedures.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dlinterp/semantics.hpp"
#include "dlinterp/terms.hpp"

namespace oracle {

using namespace dlinterp;

struct Vocab {
  std::vector<Name> atoms;
  std::vector<Name> roles;
};

inline Vocab vocab(std::initializer_list<const char*> atoms, std::initializer_list<const char*> roles) {
  Vocab v;
  for (auto a : atoms) v.atoms.push_back(intern_name(a));
  for (auto r : roles) v.roles.push_back(intern_name(r));
  return v;
}

// Random concept of role depth <= depth. max_n > 1 admits counting.
// `fuel` bounds the Boolean nesting so the expected size stays finite.
inline Concept random_concept(std::mt19937& rng, const Vocab& v, int depth, std::uint32_t max_n = 1,
                              int width = 2, int fuel = 4) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  int choice = fuel <= 0 ? 0 : static_cast<int>(pick(depth > 0 && !v.roles.empty() ? 7 : 4));
  switch (choice) {
    case 0:
      if (v.atoms.empty()) return top();
      return atom(v.atoms[pick(v.atoms.size())]);
    case 1:
      return neg(random_concept(rng, v, depth, max_n, width, fuel - 1));
    case 2:
    case 3: {
      std::vector<Concept> parts;
      for (int k = 0; k < width; ++k) parts.push_back(random_concept(rng, v, depth, max_n, width, fuel - 1));
      return choice == 2 ? conj(parts) : disj(parts);
    }
    default: {
      Name r = v.roles[pick(v.roles.size())];
      Concept c = random_concept(rng, v, depth - 1, max_n, width, fuel - 1);
      std::uint32_t n = max_n > 1 ? static_cast<std::uint32_t>(1 + pick(max_n)) : 1;
      switch (choice) {
        case 4:
          return at_least(n, r, c);
        case 5:
          return max_n > 1 ? at_most(n - 1, r, c) : all(r, c);
        default:
          return some(r, c);
      }
    }
  }
}

// Calls f on every interpretation over the vocabulary with 1..max_size
// elements; stops early when f returns true. Returns whether f ever did.
inline bool enumerate_models(const Vocab& v, std::size_t max_size,
                             const std::function<bool(const FiniteInterpretation&)>& f) {
  for (std::size_t n = 1; n <= max_size; ++n) {
    const std::size_t bits = v.atoms.size() * n + v.roles.size() * n * n;
    if (bits > 24) throw std::runtime_error("enumerate_models: space too large");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
      FiniteInterpretation m;
      for (std::size_t d = 0; d < n; ++d) m.add_element();
      std::size_t b = 0;
      for (Name a : v.atoms)
        for (std::size_t d = 0; d < n; ++d, ++b)
          if ((mask >> b) & 1U) m.set_atom(a, static_cast<Element>(d));
      for (Name r : v.roles)
        for (std::size_t d = 0; d < n; ++d)
          for (std::size_t e = 0; e < n; ++e, ++b)
            if ((mask >> b) & 1U) m.add_edge(r, static_cast<Element>(d), static_cast<Element>(e));
      if (f(m)) return true;
    }
  }
  return false;
}

// Some model of o (within the bound) with an element in c.
inline bool small_model_exists(const Ontology& o, Concept c, const Vocab& v, std::size_t max_size) {
  return enumerate_models(v, max_size, [&](const FiniteInterpretation& m) {
    return eval_concept(m, c).any() && is_model(m, o);
  });
}

// Reflexive-transitive closure by Floyd-Warshall over an explicit role list.
inline std::vector<std::vector<bool>> floyd_warshall(const std::vector<Name>& roles,
                                                     const std::vector<RoleInclusion>& ris) {
  const std::size_t n = roles.size();
  auto idx = [&](Name r) {
    for (std::size_t k = 0; k < n; ++k)
      if (roles[k] == r) return k;
    throw std::out_of_range("role");
  };
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t k = 0; k < n; ++k) reach[k][k] = true;
  for (const auto& ri : ris) reach[idx(ri.sub)][idx(ri.super)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  return reach;
}

}  // namespace oracle
