#pragma once

#include "fwsn/geometry.hpp"

#include <span>

namespace fwsn::coverage {

// Exact test of whether every point of S0 lies within closed distance r of at
// least k sensors. Coverage can only fail near a corner of S0, a point where a
// sensing circle meets an edge, or a point where two sensing circles meet; at
// each such candidate the count is taken over every admissible direction of
// approach, so tangencies and lattice ties are decided correctly.
bool is_k_covered(std::span<const Point> sensors, double r, unsigned k);

}  // namespace fwsn::coverage
