#include "partition.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "dlinterp/errors.hpp"

namespace dlinterp::detail {

namespace {

struct Group {
  std::vector<bool> has;  // per constraint
  Bitset members;         // over s
  std::uint32_t rep = 0;  // least type id
};

std::uint32_t add_sat(std::uint32_t a, std::uint32_t b) {
  if (a == kInfinity || b == kInfinity) return kInfinity;
  std::uint64_t x = std::uint64_t{a} + b;
  return x >= kInfinity ? kInfinity : static_cast<std::uint32_t>(x);
}

// Can every member of s be matched to a group containing it, group g taking
// at most cap[g] members?
bool coverable(const std::vector<Group>& groups, const std::vector<std::uint32_t>& cap,
               std::size_t ns, std::vector<std::size_t>* owner_out) {
  std::vector<std::size_t> owner(ns, SIZE_MAX);
  std::vector<std::uint32_t> load(groups.size(), 0);
  std::vector<bool> seen;
  // augmenting path from member m
  auto augment = [&](auto&& self, std::size_t m) -> bool {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (cap[g] == 0 || !groups[g].members.test(m) || seen[g]) continue;
      seen[g] = true;
      if (load[g] < cap[g]) {
        ++load[g];
        owner[m] = g;
        return true;
      }
      for (std::size_t m2 = 0; m2 < ns; ++m2) {
        if (owner[m2] != g) continue;
        if (self(self, m2)) {
          owner[m] = g;
          return true;
        }
      }
    }
    return false;
  };
  for (std::size_t m = 0; m < ns; ++m) {
    seen.assign(groups.size(), false);
    if (!augment(augment, m)) return false;
  }
  if (owner_out) *owner_out = std::move(owner);
  return true;
}

}  // namespace

std::optional<PartitionCertificate::Row> find_partition_row(const TypeUniverse& u, std::uint32_t t,
                                                            Name r, const std::vector<Mosaic>& s,
                                                            PartitionSearch& search) {
  const ClosureIndex& cx = u.closure();
  const Bitset& tt = u.type(t);
  auto cons = count_constraints(cx, tt, r);
  for (const auto& c : cons)
    if (c.hi != kInfinity && c.lo > c.hi) return std::nullopt;

  std::map<std::pair<std::vector<bool>, Bitset>, std::uint32_t> seen;
  for (std::uint32_t id = 0; id < u.size(); ++id) {
    Bitset mem(s.size());
    for (std::size_t k = 0; k < s.size(); ++k)
      if (s[k].test(id)) mem.set(k);
    if (mem.none()) continue;
    std::vector<bool> has(cons.size());
    for (std::size_t c = 0; c < cons.size(); ++c) has[c] = ClosureIndex::holds(u.type(id), cons[c].child);
    seen.emplace(std::make_pair(std::move(has), std::move(mem)), id);
  }
  std::vector<Group> groups;
  for (const auto& [key, rep] : seen) {
    bool dominated = false;
    for (const auto& [other, orep] : seen) {
      if (other.first != key.first || other.second == key.second) continue;
      if (key.second.is_subset_of(other.second)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) groups.push_back({key.first, key.second, rep});
  }
  const std::size_t ns = s.size();
  // Groups under a zero bound take 0 and drop out; groups under no finite
  // bound take ∞, which helps every lower bound and every cover. Only the
  // rest are searched.
  std::vector<Group> kept;
  std::vector<std::uint32_t> bound;
  for (Group& g : groups) {
    std::uint32_t b = kInfinity;
    for (std::size_t c = 0; c < cons.size(); ++c)
      if (g.has[c]) b = std::min(b, cons[c].hi);
    if (b == 0) continue;
    kept.push_back(std::move(g));
    bound.push_back(b);
  }
  groups = std::move(kept);
  for (std::size_t m = 0; m < ns; ++m)
    if (std::none_of(groups.begin(), groups.end(), [&](const Group& g) { return g.members.test(m); }))
      return std::nullopt;

  std::vector<std::uint32_t> sums(cons.size(), 0), chosen(groups.size(), 0);
  std::vector<std::size_t> open;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (bound[g] != kInfinity) {
      open.push_back(g);
      continue;
    }
    chosen[g] = kInfinity;
    for (std::size_t c = 0; c < cons.size(); ++c)
      if (groups[g].has[c]) sums[c] = kInfinity;
  }
  // Suffix availability for the lower-bound cut.
  std::vector<std::vector<bool>> later(open.size() + 1, std::vector<bool>(cons.size(), false));
  for (std::size_t k = open.size(); k-- > 0;)
    for (std::size_t c = 0; c < cons.size(); ++c) later[k][c] = later[k + 1][c] || groups[open[k]].has[c];

  std::vector<std::size_t> owner;
  auto dfs = [&](auto&& self, std::size_t k) -> bool {
    if (++search.nodes > search.max_nodes)
      throw BudgetExceeded("partition search exceeded " + std::to_string(search.max_nodes) + " nodes");
    for (std::size_t c = 0; c < cons.size(); ++c)
      if (sums[c] < cons[c].lo && !later[k][c]) return false;
    if (k == open.size()) {
      std::vector<std::uint32_t> cap(groups.size());
      for (std::size_t g = 0; g < groups.size(); ++g)
        cap[g] = std::min<std::uint32_t>(chosen[g], static_cast<std::uint32_t>(ns));
      return coverable(groups, cap, ns, &owner);
    }
    const std::size_t g = open[k];
    for (std::uint32_t v = bound[g] + 1; v-- > 0;) {
      std::vector<std::uint32_t> saved = sums;
      bool ok = true;
      for (std::size_t c = 0; c < cons.size() && ok; ++c) {
        if (!groups[g].has[c]) continue;
        sums[c] = add_sat(sums[c], v);
        if (cons[c].hi != kInfinity && sums[c] > cons[c].hi) ok = false;
      }
      if (ok) {
        chosen[g] = v;
        if (self(self, k + 1)) return true;
      }
      sums = std::move(saved);
      chosen[g] = 0;
    }
    return false;
  };
  if (!dfs(dfs, 0)) return std::nullopt;

  PartitionCertificate::Row row;
  row.type = t;
  row.w.role = r;
  row.w.source = tt;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (chosen[g] == 0) continue;
    const Bitset& rep = u.type(groups[g].rep);
    row.w.values.emplace_back(rep, chosen[g]);
    std::vector<std::size_t> assigned;
    for (std::size_t m = 0; m < ns; ++m)
      if (owner[m] == g) assigned.push_back(m);
    if (assigned.empty()) assigned.push_back(groups[g].members.first());
    row.assign.emplace_back(rep, std::move(assigned));
  }
  return row;
}

}  // namespace dlinterp::detail
