#pragma once

// Threshold search, parameter sweeps and the relaxed area of the vortex map.

#include "vortex/outer_optimizer.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vortex {

struct GridSize {
  int n1 = 64;
  int n2 = 64;
};

struct ThresholdResult {
  double lo = 0.0;  // last half length with a nondegenerate minimizer
  double hi = 0.0;  // first half length where the degenerate value wins
  int solves = 0;
  double midpoint() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

/// Bisection on the degenerate flag of minimize_over_profiles. Throws
/// std::invalid_argument when l_lo is not nondegenerate, l_hi is not
/// degenerate, or the bracket is empty.
ThresholdResult threshold_bisect(double l_lo, double l_hi, double tol, GridSize grid = {},
                                 const OptimizerConfig& cfg = {});

struct VortexArea {
  double l = 0.0;
  double ac_part = 0.0;        // area of the graph away from the origin
  double singular_part = 0.0;  // min of F_{2l}
  double total = 0.0;
  bool degenerate = false;
};

/// pi (l sqrt(1 + l^2) + asinh l).
double vortex_ac_part(double l);

VortexArea vortex_relaxed_area(double l, GridSize grid = {}, const OptimizerConfig& cfg = {});

struct SweepRecord {
  double l = 0.0;
  double value = 0.0;
  bool degenerate = false;
  double gap_to_pi = 0.0;
  int n1 = 0, n2 = 0;
  double seconds = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::optional<std::string> failure;  // set when a point failed; earlier records are kept
};

struct SweepOptions {
  GridSize grid;
  OptimizerConfig optimizer;
  bool timing = true;  // false writes 0 seconds, making the output reproducible byte for byte
};

/// Solves at steps equally spaced half lengths from l_min to l_max (only
/// l_min when steps = 1), seeding each point with the previous optimum.
/// `on_record` is called as soon as a point is done.
SweepResult sweep(double l_min, double l_max, int steps, const SweepOptions& options = {},
                  const std::function<void(const SweepRecord&)>& on_record = {});

}  // namespace vortex
