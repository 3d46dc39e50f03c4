#pragma once

// For a fixed profile, minimize the piecewise-linear graph area over the
// interior nodal values of psi. Lateral nodes carry phi(w2), bottom and graph
// nodes carry 0. The discrete area is strictly convex in the free values, so
// the minimizer is unique and solves the discrete minimal-surface equation.

#include "vortex/discretization.hpp"

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace vortex {

struct InnerSolverOptions {
  double tol = 1e-9;  // sup-norm of the free-node gradient
  int max_iter = 200;
};

struct ConvergenceEntry {
  int iteration = 0;
  double objective = 0.0;
  double residual = 0.0;
  double step = 0.0;    // accepted line-search step
  bool newton = true;   // false when the gradient fallback was used
};

struct InnerSolveResult {
  GridFunction psi;
  int iterations = 0;
  double objective = 0.0;
  double residual = 0.0;
  std::vector<ConvergenceEntry> log;
};

/// True for nodes whose value is prescribed.
bool is_dirichlet(NodeTag tag);

/// phi(w2) on lateral nodes, 0 on bottom and graph nodes, 0 elsewhere.
std::vector<double> standard_boundary_values(const FittedMesh& mesh);

/// Discrete harmonic (P1 stiffness) extension of the Dirichlet values.
std::vector<double> harmonic_extension(const FittedMesh& mesh, std::span<const double> boundary);

/// Damped Newton with backtracking on the discrete area, gradient fallback
/// when the Newton direction is unusable. `boundary` supplies the value at
/// every Dirichlet node (entries at free nodes are ignored). `initial`, when
/// given, seeds the free nodes; otherwise the harmonic extension is used. On
/// a mirror-symmetric mesh with symmetric data the iterates are kept exactly
/// symmetric. Throws InnerSolverError when max_iter is exhausted.
InnerSolveResult solve_min_graph(std::shared_ptr<const FittedMesh> mesh, std::span<const double> boundary,
                                 const InnerSolverOptions& options = {},
                                 const std::vector<double>* initial = nullptr);

/// Same, with the standard boundary data.
InnerSolveResult solve_min_graph(std::shared_ptr<const FittedMesh> mesh, const InnerSolverOptions& options = {},
                                 const std::vector<double>* initial = nullptr);

/// Sup-norm over free nodes of the assembled flux of grad psi / sqrt(1 + |grad psi|^2),
/// i.e. of the gradient of the discrete area.
double residual_msq(const FittedMesh& mesh, std::span<const double> psi);

/// Discrete area and its gradient with respect to every nodal value.
double area_and_gradient(const FittedMesh& mesh, const std::vector<ElementGeometry>& geometry,
                         std::span<const double> psi, std::vector<double>* gradient);

/// CSV with columns iteration,objective,residual,step,newton.
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceEntry>& log);

}  // namespace vortex
