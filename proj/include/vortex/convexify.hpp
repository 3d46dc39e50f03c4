#pragma once

// Profile transforms on the half rectangle that never increase F_l: cutting
// the profile at the height of one of its nodes, and replacing an arc of the
// profile by the chord between two nodes when the chord lies below it. In the
// continuum both leave psi unchanged below the new profile and set it to 0
// above; here psi is resampled onto the mesh fitted to the new profile, so the
// removed part is charged through the trace term on the new graph.

#include "vortex/discretization.hpp"
#include "vortex/geometry.hpp"

#include <utility>

namespace vortex {

using HalfPair = std::pair<HalfProfile, GridFunction>;

/// h* = h before node t0 and min(h, h(t0)) from t0 on. Throws
/// std::out_of_range unless 0 < t0 < n.
HalfPair truncate_profile(const HalfProfile& h, const GridFunction& psi, int t0);

/// h# = min(h, chord through nodes t1 and t2) on [t1, t2]. Throws
/// std::invalid_argument when t1 >= t2 and std::out_of_range when a node is
/// outside [0, n].
HalfPair chord_cut(const HalfProfile& h, const GridFunction& psi, int t1, int t2);

/// Restriction of psi to the subgraph of a lower profile on the same columns,
/// resampled along each column of the old mesh.
GridFunction resample_below(const GridFunction& psi, std::shared_ptr<const FittedMesh> lower);

/// Applies chord_cut over all node pairs until the profile no longer changes.
/// Returns the pair and the number of sweeps performed.
HalfPair convexify(const HalfProfile& h, const GridFunction& psi, int* sweeps = nullptr);

}  // namespace vortex
