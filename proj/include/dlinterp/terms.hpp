#pragma once

// Hash-consed concept terms.
//
// Every concept lives in a single process-wide store and is identified by a
// 32-bit id; two concepts are structurally equal iff their ids are equal.
// The constructors below canonicalize on the way in:
//   - Not(Not x) is x; bottom is Not(Top);
//   - conjunctions are flattened, Top-free, duplicate-free and sorted by id,
//     absorb bottom, and have at least two children;
//   - (>= 0 r.C) is Top and (>= n r.bottom) is bottom for n >= 1.
// Interning takes a lock; reading an interned node does not.

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dlinterp {

// Interned concept/role name.
using Name = std::uint32_t;

Name intern_name(std::string_view text);
const std::string& name_str(Name name);

enum class Kind : std::uint8_t { Top, Atom, Not, And, AtLeast };

class Concept {
 public:
  constexpr Concept() = default;
  explicit constexpr Concept(std::uint32_t id) : id_(id) {}

  constexpr std::uint32_t id() const { return id_; }

  Kind kind() const;
  // Atom name, or role of an AtLeast node.
  Name name() const;
  // Threshold n of an AtLeast node.
  std::uint32_t count() const;
  // Operand of Not / AtLeast.
  Concept child() const;
  // Operands of And.
  std::span<const Concept> children() const;

  bool is_top() const { return id_ == 0; }
  bool is_bot() const;

  friend constexpr bool operator==(Concept a, Concept b) { return a.id_ == b.id_; }
  friend constexpr auto operator<=>(Concept a, Concept b) { return a.id_ <=> b.id_; }

 private:
  std::uint32_t id_ = 0;  // 0 is Top
};

struct ConceptHash {
  std::size_t operator()(Concept c) const { return std::hash<std::uint32_t>{}(c.id()); }
};

Concept top();
Concept bot();
Concept atom(Name name);
Concept atom(std::string_view name);
Concept neg(Concept c);
Concept conj(std::vector<Concept> parts);
Concept conj(std::initializer_list<Concept> parts);
Concept disj(std::vector<Concept> parts);
Concept disj(std::initializer_list<Concept> parts);
Concept implies(Concept lhs, Concept rhs);
Concept at_least(std::uint32_t n, Name role, Concept c);
Concept at_most(std::uint32_t n, Name role, Concept c);
Concept some(Name role, Concept c);
Concept all(Name role, Concept c);

// Number of distinct nodes reachable from c.
std::size_t dag_size(Concept c);
// Size of the unfolded tree (saturates at UINT64_MAX).
std::uint64_t tree_size(Concept c);
// True iff every counting restriction in c has threshold 1.
bool is_alc(Concept c);
// Maximal nesting depth of counting restrictions.
std::size_t role_depth(Concept c);

struct NameSets {
  std::vector<Name> atoms;  // sorted, unique
  std::vector<Name> roles;  // sorted, unique
};
NameSets names_of(Concept c);
void collect_names(Concept c, NameSets& into);

// Reachable nodes in post-order (children before parents), each once.
std::vector<Concept> subterms(Concept c);

// Number of interned nodes (diagnostics).
std::size_t store_size();

}  // namespace dlinterp

template <>
struct std::hash<dlinterp::Concept> {
  std::size_t operator()(dlinterp::Concept c) const noexcept { return c.id(); }
};
