#include "vortex/analysis.hpp"

#include "vortex/log.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace vortex {

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

ThresholdResult threshold_bisect(double l_lo, double l_hi, double tol, GridSize grid, const OptimizerConfig& cfg) {
  if (!(l_lo > 0.0) || !(l_hi > l_lo)) throw std::invalid_argument("threshold_bisect: need 0 < l_lo < l_hi");
  if (!(tol > 0.0)) throw std::invalid_argument("threshold_bisect: tol must be positive");
  ThresholdResult r{l_lo, l_hi, 0};
  auto degenerate_at = [&](double l) {
    ++r.solves;
    const bool d = minimize_over_profiles(l, grid.n1, grid.n2, cfg).degenerate;
    std::ostringstream msg;
    msg << "threshold: l=" << l << (d ? " degenerate" : " nondegenerate");
    log::info(msg.str());
    return d;
  };
  if (degenerate_at(l_lo)) throw std::invalid_argument("threshold_bisect: lower end is already degenerate");
  if (!degenerate_at(l_hi)) throw std::invalid_argument("threshold_bisect: upper end is not degenerate");
  while (r.hi - r.lo > tol) {
    const double mid = 0.5 * (r.lo + r.hi);
    (degenerate_at(mid) ? r.hi : r.lo) = mid;
  }
  return r;
}

double vortex_ac_part(double l) {
  if (!(l > 0.0)) throw std::invalid_argument("vortex_ac_part: l must be positive");
  return pi * (l * std::sqrt(1.0 + l * l) + std::asinh(l));
}

VortexArea vortex_relaxed_area(double l, GridSize grid, const OptimizerConfig& cfg) {
  VortexArea out;
  out.l = l;
  out.ac_part = vortex_ac_part(l);
  const SolveReport rep = minimize_over_profiles(l, grid.n1, grid.n2, cfg);
  out.singular_part = rep.value;
  out.degenerate = rep.degenerate;
  out.total = out.ac_part + out.singular_part;
  return out;
}

SweepResult sweep(double l_min, double l_max, int steps, const SweepOptions& options,
                  const std::function<void(const SweepRecord&)>& on_record) {
  if (!(l_min > 0.0)) throw std::invalid_argument("sweep: l_min must be positive");
  if (steps < 1) throw std::invalid_argument("sweep: steps must be positive");
  if (steps > 1 && !(l_max > l_min)) throw std::invalid_argument("sweep: need l_min < l_max");
  SweepResult result;
  OptimizerConfig cfg = options.optimizer;
  const std::size_t base_starts = cfg.initial_profiles.size();
  for (int k = 0; k < steps; ++k) {
    const double l = steps == 1 ? l_min : l_min + (l_max - l_min) * k / (steps - 1);
    try {
      const SolveReport rep = minimize_over_profiles(l, options.grid.n1, options.grid.n2, cfg);
      SweepRecord rec;
      rec.l = l;
      rec.value = rep.value;
      rec.degenerate = rep.degenerate;
      rec.gap_to_pi = pi - rep.value;
      rec.n1 = options.grid.n1;
      rec.n2 = options.grid.n2;
      rec.seconds = options.timing ? rep.seconds : 0.0;
      result.records.push_back(rec);
      if (on_record) on_record(rec);
      // warm start for the next point
      cfg.initial_profiles.resize(base_starts);
      if (!rep.nondegenerate_profile.is_degenerate()) cfg.initial_profiles.push_back(rep.nondegenerate_profile);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "l=" << l << ": " << e.what();
      result.failure = msg.str();
      log::error("sweep stopped at " + msg.str());
      break;
    }
  }
  return result;
}

}  // namespace vortex
