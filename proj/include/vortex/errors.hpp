#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vortex {

/// Thrown when a profile reaches the bottom edge and no subgraph mesh exists.
class DegenerateDomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Inner (graph-area) solver did not reach its tolerance.
class InnerSolverError : public std::runtime_error {
public:
  InnerSolverError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

  // Profile (nodal values on [0,2l]) being evaluated when the failure happened.
  // Filled in by the outer optimizer; empty for direct calls.
  std::vector<double> offending_profile;
  double half_length = 0.0;

private:
  double residual_;
  int iterations_;
};

}  // namespace vortex
