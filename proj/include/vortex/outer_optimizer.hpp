#pragma once

// Minimization of F_{2l} over convex symmetric profiles, compared with the
// degenerate value pi.
//
// The search runs in reduced variables: nonnegative slope increments x_k at m
// knots of [0,l], with h(0) = 1 pinned. Every x >= 0 gives a convex profile,
// and mirroring makes it symmetric. A coordinate search with finite
// differences runs on a coarse-to-fine ladder of grids, then the best profile
// is polished on the full node set of the target grid by projected descent.

#include "vortex/discretization.hpp"
#include "vortex/functional.hpp"
#include "vortex/geometry.hpp"
#include "vortex/inner_solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vortex {

struct OptimizerConfig {
  // Built-in starts: "flat" (h = 1) and "neck" (catenoid-shaped, or a
  // parabola when no catenoid spans the gap).
  std::vector<std::string> starts{"flat", "neck"};
  // Explicit starts (any resolution and half length; rescaled to [0, 2l]).
  std::vector<ConvexProfile> initial_profiles;
  int reduced_dim = 8;          // knots on [0,l], at most 16
  double stop_tol = 1e-7;       // full-pass improvement that ends the search
  double fd_step = 1e-3;        // finite-difference step in reduced variables
  double trust_radius = 0.25;   // initial per-coordinate step bound
  int max_passes = 40;
  std::vector<int> ladder{32, 64};  // coarse grids used before the target grid
  double floor = 1e-4;          // profiles are clipped to h >= -1 + floor
  int polish_iters = 200;
  double polish_step = 0.1;
  double degenerate_margin = 1e-6;
  InnerSolverOptions inner;
  int jobs = 1;
};

/// Outcome of one start of the multistart search.
struct StartSummary {
  std::string name;
  double value = 0.0;      // reduced-search value on the last ladder grid
  std::vector<double> x;   // reduced variables
};

struct SolveReport {
  double l = 0.0;
  int n1 = 0, n2 = 0;
  ConvexProfile best_profile;            // h = -1 marker when degenerate
  std::optional<GridFunction> best_psi;  // absent when degenerate
  double value = 0.0;
  bool degenerate = false;
  int inner_iterations = 0;
  int outer_evaluations = 0;
  FunctionalBreakdown breakdown;         // of the nondegenerate candidate
  // Best nondegenerate pair, kept even when the degenerate value wins.
  double nondegenerate_value = 0.0;
  ConvexProfile nondegenerate_profile;
  std::vector<StartSummary> starts;
  double seconds = 0.0;
};

/// Profile on n1 intervals (n1 even) from reduced variables, clipped to
/// h >= -1 + floor.
ConvexProfile profile_from_reduced(const std::vector<double>& x, double l, int n1, double floor);

/// Reduced variables reproducing the knot values of h (rescaled to [0, 2l]).
std::vector<double> reduced_from_profile(const ConvexProfile& h, int m);

/// F_{2l} at the discrete minimizer of the graph area over SG_h. Throws
/// std::invalid_argument for the degenerate profile; inner failures propagate
/// with the profile attached.
double value_of_profile(double l, const ConvexProfile& h, int n1, int n2, const InnerSolverOptions& inner = {});

SolveReport minimize_over_profiles(double l, int n1, int n2, const OptimizerConfig& cfg = {});

}  // namespace vortex
