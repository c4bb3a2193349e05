#include "dlinterp/terms.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <deque>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace dlinterp {

namespace {

struct Node {
  Kind kind = Kind::Top;
  Name name = 0;
  std::uint32_t count = 0;
  std::vector<Concept> kids;
};

struct NodeKey {
  Kind kind;
  Name name;
  std::uint32_t count;
  std::vector<Concept> kids;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.kind) * 0x9E3779B97F4A7C15ULL;
    h ^= (static_cast<std::size_t>(k.name) + 0x7F4A7C15ULL) * 0xBF58476D1CE4E5B9ULL;
    h ^= static_cast<std::size_t>(k.count) * 0x94D049BB133111EBULL;
    for (auto c : k.kids) h = (h ^ c.id()) * 0x100000001B3ULL + (h >> 31);
    return h;
  }
};

// Nodes are stored in fixed-size chunks published through atomic pointers so
// that readers never observe a reallocation.
class Store {
 public:
  static constexpr std::size_t kChunkBits = 12;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr std::size_t kMaxChunks = std::size_t{1} << 16;

  Store() {
    for (auto& c : chunks_) c.store(nullptr, std::memory_order_relaxed);
    intern(NodeKey{Kind::Top, 0, 0, {}});  // id 0
  }

  const Node& get(std::uint32_t id) const {
    const Node* chunk = chunks_[id >> kChunkBits].load(std::memory_order_acquire);
    return chunk[id & (kChunkSize - 1)];
  }

  Concept intern(NodeKey key) {
    std::lock_guard lock(mu_);
    auto it = index_.find(key);
    if (it != index_.end()) return Concept(it->second);
    std::uint32_t id = size_;
    std::size_t chunk = id >> kChunkBits;
    if (chunk >= kMaxChunks) throw std::length_error("concept store exhausted");
    if (!owned_[chunk]) {
      owned_[chunk] = std::make_unique<Node[]>(kChunkSize);
      chunks_[chunk].store(owned_[chunk].get(), std::memory_order_release);
    }
    Node& n = owned_[chunk][id & (kChunkSize - 1)];
    n.kind = key.kind;
    n.name = key.name;
    n.count = key.count;
    n.kids = key.kids;
    index_.emplace(std::move(key), id);
    size_ = id + 1;
    return Concept(id);
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return size_;
  }

 private:
  mutable std::mutex mu_;
  std::uint32_t size_ = 0;
  std::unordered_map<NodeKey, std::uint32_t, NodeKeyHash> index_;
  std::array<std::atomic<const Node*>, kMaxChunks> chunks_;
  std::array<std::unique_ptr<Node[]>, kMaxChunks> owned_;
};

Store& store() {
  static Store* s = new Store();
  return *s;
}

class NameTable {
 public:
  Name intern(std::string_view text) {
    std::lock_guard lock(mu_);
    auto it = index_.find(std::string(text));
    if (it != index_.end()) return it->second;
    Name id = static_cast<Name>(names_.size());
    names_.emplace_back(text);
    index_.emplace(names_.back(), id);
    return id;
  }
  const std::string& str(Name n) {
    std::lock_guard lock(mu_);
    return names_.at(n);
  }

 private:
  std::mutex mu_;
  std::deque<std::string> names_;
  std::unordered_map<std::string, Name> index_;
};

NameTable& names() {
  static NameTable* t = new NameTable();
  return *t;
}

}  // namespace

Name intern_name(std::string_view text) { return names().intern(text); }
const std::string& name_str(Name name) { return names().str(name); }

Kind Concept::kind() const { return store().get(id_).kind; }
Name Concept::name() const { return store().get(id_).name; }
std::uint32_t Concept::count() const { return store().get(id_).count; }
Concept Concept::child() const { return store().get(id_).kids.at(0); }
std::span<const Concept> Concept::children() const {
  const auto& k = store().get(id_).kids;
  return {k.data(), k.size()};
}
bool Concept::is_bot() const {
  const Node& n = store().get(id_);
  return n.kind == Kind::Not && n.kids[0].is_top();
}

Concept top() { return Concept(0); }

Concept bot() {
  static const Concept b = store().intern(NodeKey{Kind::Not, 0, 0, {Concept(0)}});
  return b;
}

Concept atom(Name name) { return store().intern(NodeKey{Kind::Atom, name, 0, {}}); }
Concept atom(std::string_view name) { return atom(intern_name(name)); }

Concept neg(Concept c) {
  const Node& n = store().get(c.id());
  if (n.kind == Kind::Not) return n.kids[0];
  return store().intern(NodeKey{Kind::Not, 0, 0, {c}});
}

Concept conj(std::vector<Concept> parts) {
  std::vector<Concept> flat;
  flat.reserve(parts.size());
  for (Concept p : parts) {
    const Node& n = store().get(p.id());
    if (n.kind == Kind::Top) continue;
    if (p.is_bot()) return bot();
    if (n.kind == Kind::And) {
      flat.insert(flat.end(), n.kids.begin(), n.kids.end());
    } else {
      flat.push_back(p);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return top();
  if (flat.size() == 1) return flat[0];
  return store().intern(NodeKey{Kind::And, 0, 0, std::move(flat)});
}

Concept conj(std::initializer_list<Concept> parts) { return conj(std::vector<Concept>(parts)); }

Concept disj(std::vector<Concept> parts) {
  for (auto& p : parts) p = neg(p);
  return neg(conj(std::move(parts)));
}

Concept disj(std::initializer_list<Concept> parts) { return disj(std::vector<Concept>(parts)); }

Concept implies(Concept lhs, Concept rhs) { return disj({neg(lhs), rhs}); }

Concept at_least(std::uint32_t n, Name role, Concept c) {
  if (n == 0) return top();
  if (c.is_bot()) return bot();
  return store().intern(NodeKey{Kind::AtLeast, role, n, {c}});
}

Concept at_most(std::uint32_t n, Name role, Concept c) {
  if (n == std::numeric_limits<std::uint32_t>::max())
    throw std::out_of_range("atmost threshold too large");
  return neg(at_least(n + 1, role, c));
}

Concept some(Name role, Concept c) { return at_least(1, role, c); }
Concept all(Name role, Concept c) { return neg(some(role, neg(c))); }

std::vector<Concept> subterms(Concept c) {
  std::vector<Concept> out;
  std::unordered_set<std::uint32_t> seen;
  // Iterative post-order.
  std::vector<std::pair<Concept, std::size_t>> stack{{c, 0}};
  if (!seen.insert(c.id()).second) return out;
  while (!stack.empty()) {
    auto& [cur, next] = stack.back();
    const Node& n = store().get(cur.id());
    if (next < n.kids.size()) {
      Concept k = n.kids[next++];
      if (seen.insert(k.id()).second) stack.push_back({k, 0});
    } else {
      out.push_back(cur);
      stack.pop_back();
    }
  }
  return out;
}

std::size_t dag_size(Concept c) { return subterms(c).size(); }

std::uint64_t tree_size(Concept c) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::unordered_map<std::uint32_t, std::uint64_t> size;
  for (Concept s : subterms(c)) {
    std::uint64_t total = 1;
    for (Concept k : store().get(s.id()).kids) {
      std::uint64_t ks = size.at(k.id());
      total = (kMax - total < ks) ? kMax : total + ks;
    }
    size[s.id()] = total;
  }
  return size.at(c.id());
}

bool is_alc(Concept c) {
  for (Concept s : subterms(c))
    if (s.kind() == Kind::AtLeast && s.count() != 1) return false;
  return true;
}

std::size_t role_depth(Concept c) {
  std::unordered_map<std::uint32_t, std::size_t> depth;
  for (Concept s : subterms(c)) {
    std::size_t d = 0;
    for (Concept k : store().get(s.id()).kids) d = std::max(d, depth.at(k.id()));
    if (s.kind() == Kind::AtLeast) ++d;
    depth[s.id()] = d;
  }
  return depth.at(c.id());
}

void collect_names(Concept c, NameSets& into) {
  for (Concept s : subterms(c)) {
    if (s.kind() == Kind::Atom) into.atoms.push_back(s.name());
    if (s.kind() == Kind::AtLeast) into.roles.push_back(s.name());
  }
  auto tidy = [](std::vector<Name>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  tidy(into.atoms);
  tidy(into.roles);
}

NameSets names_of(Concept c) {
  NameSets out;
  collect_names(c, out);
  return out;
}

std::size_t store_size() { return store().size(); }

}  // namespace dlinterp
