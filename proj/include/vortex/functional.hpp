#pragma once

// The free-boundary functional on the doubled rectangle and on the half
// rectangle, evaluated in the four-term form
//
//   F = A(psi, SG_h) + int_{dD SG_h} |psi - phi| + int_{G_h} |psi^-| + int_{L_h} phi,
//
// where dD SG_h is the lateral and bottom boundary of the subgraph and L_h the
// part of the lateral edges above h(0) (resp. h(2l)).

#include "vortex/discretization.hpp"
#include "vortex/geometry.hpp"

namespace vortex {

struct FunctionalBreakdown {
  double area_term = 0.0;           // graph area over SG_h
  double dirichlet_mismatch = 0.0;  // lateral and bottom walls
  double graph_trace = 0.0;         // wall over the free curve G_h
  double lh_term = 0.0;             // walls over L_h
  double total = 0.0;
};

/// F_{2l}(h, psi). psi must live on a doubled mesh fitted to h. For the
/// degenerate profile h = -1 the mesh may be absent and the value is exactly pi.
/// Throws std::invalid_argument on a mesh/profile mismatch.
FunctionalBreakdown eval_F2l(const ConvexProfile& h, const GridFunction& psi);

/// F_l(h, psi) on the half rectangle; the edge w1 = l carries no term.
FunctionalBreakdown eval_Fl(const HalfProfile& h, const GridFunction& psi);

/// Even reflection of a half-rectangle field onto the doubled mesh fitted to
/// reflect(h).
GridFunction reflect(const HalfProfile& h, const GridFunction& psi);

/// |2 F_l(h, psi) - F_{2l}(reflected pair)|.
double check_doubling(const HalfProfile& h, const GridFunction& psi);

/// Exact integral over [a,b] of |alpha + beta s - phi(s)|, -1 <= a <= b <= 1.
double wall_integral(double a, double b, double alpha, double beta);

/// Exact integral over a segment of length `length` of |u| for u linear from
/// ua to ub.
double linear_abs_integral(double length, double ua, double ub);

}  // namespace vortex
