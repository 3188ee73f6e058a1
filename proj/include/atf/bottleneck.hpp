#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "atf/diagrams.hpp"

namespace atf {

/// Bijection between a subset of D1 and a subset of D2, by index into the
/// multiplicity-expanded point lists. Unexpanded indices are unmatched.
struct PartialMatching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Points of the diagram repeated multiplicity times, finite points only,
/// in canonical (sorted) order. Birth-death coordinates.
std::vector<PersistencePoint> expand_multiplicities(const PersistenceDiagram& d);

/// True iff every matched pair is within delta in L-inf and every unmatched
/// point has persistence <= 2*delta. Indices refer to the expanded lists;
/// invalid or repeated indices are an error.
bool is_delta_matching(const PartialMatching& m, const PersistenceDiagram& d1,
                       const PersistenceDiagram& d2, double delta);

/// Exact bottleneck distance: the smallest delta admitting a delta-matching.
/// Candidate deltas are all pairwise L-inf distances plus all
/// half-persistences; feasibility is decided by maximum bipartite matching.
/// Infinite-death points are excluded; differing infinite counts are an
/// error (the distance would be +inf).
double bottleneck_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2);

}  // namespace atf
