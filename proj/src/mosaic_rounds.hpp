#pragma once

// Per-round caches for the antichain elimination. A round reads the maxima
// of the previous round only.

#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dlinterp/mosaics.hpp"
#include "partition.hpp"

namespace dlinterp::detail {

std::optional<Name> atomic_split(const TypeUniverse& u, const Mosaic& t);

// Maximal nonempty members, sorted.
std::vector<Mosaic> maximal_sets(std::vector<Mosaic> sets);
// Minimal hitting sets of a hypergraph over n vertices, sorted.
std::vector<Mosaic> minimal_transversals(std::vector<Mosaic> edges, std::size_t n);

// T is ALCH-good for (t, ∃r.C) iff T ⊆ P for some P in opt(t, ∃r.C), where
// P ranges over ∩_{s} Pre_s(M') for maxima M' hosting a compatible witness.
class AlchRound {
 public:
  AlchRound(const TypeUniverse& u, const std::vector<Mosaic>& family);
  const std::vector<Mosaic>& opt(std::uint32_t t, std::uint32_t e);
  // Some (t, ∃r.C) that T fails, scanning types in `order` if given.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> violation(
      const Mosaic& t, const std::vector<std::uint32_t>* order = nullptr);

 private:
  const Mosaic& pre(std::size_t m, Name s);
  const TypeUniverse& u_;
  const std::vector<Mosaic>& family_;
  std::map<std::pair<std::size_t, Name>, Mosaic> pre_;
  std::unordered_map<std::uint64_t, std::vector<Mosaic>> opt_;
};

// T is ALCQ-good for r iff T ⊆ G_S(r) for some S ⊆ family, where G_S(r) is
// the set of types with a partition row over S.
class AlcqRound {
 public:
  AlcqRound(const TypeUniverse& u, const std::vector<Mosaic>& family, const MosaicBudget& budget);
  // (S as a bitmask over the family, G_S(r)) for every S with G_S(r) ≠ ∅
  const std::vector<std::pair<std::uint64_t, Mosaic>>& table(Name r);
  const std::vector<Mosaic>& opts(Name r);
  std::optional<Name> violation(const Mosaic& t);
  std::optional<PartitionCertificate> certificate(const Mosaic& t, Name r);

 private:
  const TypeUniverse& u_;
  const std::vector<Mosaic>& family_;
  PartitionSearch search_;
  Mosaic support_;
  std::map<Name, std::vector<std::pair<std::uint64_t, Mosaic>>> table_;
  std::map<Name, std::vector<Mosaic>> opts_;
};

}  // namespace dlinterp::detail
