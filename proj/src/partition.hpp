#pragma once

// ALCQ mosaic partition search for a single type.
//
// For a type t, role r and a set S of maximal mosaics, a witnessing function
// w for (t, r) and sets a(t, t') exist iff some w supported on ∪S can cover
// every member of S, each t' covering at most w(t') members containing it.
// Support types are grouped by (pattern over the counted children, members
// of S containing them); within a pattern only groups with maximal member
// sets are kept, since moving a value to a dominating group preserves every
// counting sum and can only widen coverage.

#include <cstdint>
#include <optional>
#include <vector>

#include "dlinterp/mosaics.hpp"

namespace dlinterp::detail {

struct PartitionSearch {
  std::uint64_t nodes = 0;
  std::uint64_t max_nodes = 0;
};

std::optional<PartitionCertificate::Row> find_partition_row(const TypeUniverse& u, std::uint32_t t,
                                                            Name r, const std::vector<Mosaic>& s,
                                                            PartitionSearch& search);

}  // namespace dlinterp::detail
