#include "vortex/inner_solver.hpp"

#include "vortex/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vortex {

bool is_dirichlet(NodeTag tag) { return tag != NodeTag::Interior && tag != NodeTag::FreeEdge; }

std::vector<double> standard_boundary_values(const FittedMesh& mesh) {
  std::vector<double> out(mesh.vertex_count(), 0.0);
  for (std::size_t v = 0; v < out.size(); ++v)
    if (mesh.tags[v] == NodeTag::LateralLeft || mesh.tags[v] == NodeTag::LateralRight)
      out[v] = boundary_datum(mesh.vertices[v].y());
  return out;
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct FreeIndex {
  std::vector<int> of_vertex;  // -1 for Dirichlet nodes
  std::vector<int> vertex;     // inverse map
};

FreeIndex free_index(const FittedMesh& mesh) {
  FreeIndex idx;
  idx.of_vertex.assign(mesh.vertex_count(), -1);
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    if (is_dirichlet(mesh.tags[v])) continue;
    idx.of_vertex[v] = static_cast<int>(idx.vertex.size());
    idx.vertex.push_back(static_cast<int>(v));
  }
  return idx;
}

bool symmetric_data(const FittedMesh& mesh, std::span<const double> boundary) {
  if (!mesh.mirror_symmetric) return false;
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
    if (is_dirichlet(mesh.tags[v]) && boundary[v] != boundary[mesh.mirror(static_cast<int>(v))]) return false;
  return true;
}

void symmetrize(const FittedMesh& mesh, std::vector<double>& values) {
  for (std::size_t v = 0; v < values.size(); ++v) {
    const int m = mesh.mirror(static_cast<int>(v));
    if (m <= static_cast<int>(v)) continue;
    const double avg = 0.5 * (values[v] + values[m]);
    values[v] = avg;
    values[m] = avg;
  }
}

// Hessian of the discrete area restricted to the free nodes.
SparseMatrix area_hessian(const FittedMesh& mesh, const std::vector<ElementGeometry>& geometry,
                          std::span<const double> psi, const FreeIndex& idx) {
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.triangles.size() * 9);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const ElementGeometry& eg = geometry[t];
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int k = 0; k < 3; ++k) g += psi[tri[k]] * eg.grad[k];
    const double s = std::sqrt(1.0 + g.squaredNorm());
    // A * (I / s - g g^T / s^3) in gradient space.
    Eigen::Matrix2d M = Eigen::Matrix2d::Identity() / s - g * g.transpose() / (s * s * s);
    M *= eg.area;
    for (int a = 0; a < 3; ++a) {
      const int ia = idx.of_vertex[tri[a]];
      if (ia < 0) continue;
      const Eigen::Vector2d Ma = M * eg.grad[a];
      for (int b = 0; b < 3; ++b) {
        const int ib = idx.of_vertex[tri[b]];
        if (ib < 0) continue;
        triplets.emplace_back(ia, ib, Ma.dot(eg.grad[b]));
      }
    }
  }
  SparseMatrix H(static_cast<Eigen::Index>(idx.vertex.size()), static_cast<Eigen::Index>(idx.vertex.size()));
  H.setFromTriplets(triplets.begin(), triplets.end());
  return H;
}

double free_sup_norm(const std::vector<double>& gradient, const FreeIndex& idx) {
  double r = 0.0;
  for (int v : idx.vertex) r = std::max(r, std::abs(gradient[v]));
  return r;
}

}  // namespace

double area_and_gradient(const FittedMesh& mesh, const std::vector<ElementGeometry>& geometry,
                         std::span<const double> psi, std::vector<double>* gradient) {
  if (gradient) gradient->assign(mesh.vertex_count(), 0.0);
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const ElementGeometry& eg = geometry[t];
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int k = 0; k < 3; ++k) g += psi[tri[k]] * eg.grad[k];
    const double s = std::sqrt(1.0 + g.squaredNorm());
    total += eg.area * s;
    if (gradient) {
      const Eigen::Vector2d flux = (eg.area / s) * g;
      for (int k = 0; k < 3; ++k) (*gradient)[tri[k]] += flux.dot(eg.grad[k]);
    }
  }
  return total;
}

double residual_msq(const FittedMesh& mesh, std::span<const double> psi) {
  if (psi.size() != mesh.vertex_count()) throw std::invalid_argument("residual_msq: size mismatch");
  std::vector<double> gradient;
  area_and_gradient(mesh, element_geometry(mesh), psi, &gradient);
  double r = 0.0;
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
    if (!is_dirichlet(mesh.tags[v])) r = std::max(r, std::abs(gradient[v]));
  return r;
}

std::vector<double> harmonic_extension(const FittedMesh& mesh, std::span<const double> boundary) {
  if (boundary.size() != mesh.vertex_count()) throw std::invalid_argument("harmonic_extension: size mismatch");
  const auto geometry = element_geometry(mesh);
  const FreeIndex idx = free_index(mesh);
  std::vector<double> out(boundary.begin(), boundary.end());
  for (int v : idx.vertex) out[v] = 0.0;
  if (idx.vertex.empty()) return out;

  std::vector<Triplet> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(idx.vertex.size()));
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const ElementGeometry& eg = geometry[t];
    for (int a = 0; a < 3; ++a) {
      const int ia = idx.of_vertex[tri[a]];
      if (ia < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const double k = eg.area * eg.grad[a].dot(eg.grad[b]);
        const int ib = idx.of_vertex[tri[b]];
        if (ib < 0)
          rhs(ia) -= k * boundary[tri[b]];
        else
          triplets.emplace_back(ia, ib, k);
      }
    }
  }
  SparseMatrix K(rhs.size(), rhs.size());
  K.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<SparseMatrix> solver(K);
  if (solver.info() != Eigen::Success) throw InnerSolverError("harmonic_extension: factorization failed", 0.0, 0);
  const Eigen::VectorXd x = solver.solve(rhs);
  for (std::size_t k = 0; k < idx.vertex.size(); ++k) out[idx.vertex[k]] = x(static_cast<Eigen::Index>(k));
  if (symmetric_data(mesh, boundary)) symmetrize(mesh, out);
  return out;
}

InnerSolveResult solve_min_graph(std::shared_ptr<const FittedMesh> mesh_ptr, std::span<const double> boundary,
                                 const InnerSolverOptions& options, const std::vector<double>* initial) {
  const FittedMesh& mesh = *mesh_ptr;
  if (boundary.size() != mesh.vertex_count()) throw std::invalid_argument("solve_min_graph: boundary size mismatch");
  if (initial && initial->size() != mesh.vertex_count())
    throw std::invalid_argument("solve_min_graph: initial guess size mismatch");
  if (planar_area(mesh) <= 0.0) throw DegenerateDomainError("solve_min_graph: empty domain");

  const auto geometry = element_geometry(mesh);
  const FreeIndex idx = free_index(mesh);
  const bool symmetric = symmetric_data(mesh, boundary);

  std::vector<double> psi;
  if (initial) {
    psi = *initial;
    for (std::size_t v = 0; v < psi.size(); ++v)
      if (is_dirichlet(mesh.tags[v])) psi[v] = boundary[v];
    if (symmetric) symmetrize(mesh, psi);
  } else {
    psi = harmonic_extension(mesh, boundary);
  }

  InnerSolveResult result;
  std::vector<double> gradient, trial(psi.size()), trial_gradient;
  double energy = area_and_gradient(mesh, geometry, psi, &gradient);
  double residual = free_sup_norm(gradient, idx);
  result.log.push_back({0, energy, residual, 0.0, true});

  Eigen::SimplicialLDLT<SparseMatrix> solver;
  bool analyzed = false;
  const Eigen::Index n = static_cast<Eigen::Index>(idx.vertex.size());

  int it = 0;
  while (residual > options.tol) {
    if (it >= options.max_iter) {
      std::ostringstream msg;
      msg << "solve_min_graph: no convergence after " << it << " iterations (residual " << residual << ")";
      throw InnerSolverError(msg.str(), residual, it);
    }
    ++it;

    Eigen::VectorXd g(n);
    for (Eigen::Index k = 0; k < n; ++k) g(k) = gradient[idx.vertex[k]];

    const SparseMatrix H = area_hessian(mesh, geometry, psi, idx);
    if (!analyzed) {
      solver.analyzePattern(H);
      analyzed = true;
    }
    solver.factorize(H);
    Eigen::VectorXd dir;
    bool newton = solver.info() == Eigen::Success;
    if (newton) {
      dir = -solver.solve(g);
      newton = dir.allFinite() && g.dot(dir) < 0.0;
    }
    if (!newton) dir = -g.cwiseQuotient(H.diagonal().cwiseMax(1e-300));

    std::vector<double> step(psi.size(), 0.0);
    for (Eigen::Index k = 0; k < n; ++k) step[idx.vertex[k]] = dir(k);
    if (symmetric) symmetrize(mesh, step);

    double slope = 0.0;
    for (int v : idx.vertex) slope += gradient[v] * step[v];

    // Backtracking. Once the predicted decrease is at round-off level the
    // full step is taken and convergence is judged on the gradient alone.
    const bool tiny = -slope <= 1e-13 * std::max(1.0, energy);
    double t = 1.0, trial_energy = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t v = 0; v < psi.size(); ++v) trial[v] = psi[v] + t * step[v];
      trial_energy = area_and_gradient(mesh, geometry, trial, &trial_gradient);
      if (trial_energy <= energy + 1e-4 * t * slope || (tiny && trial_energy <= energy + 1e-14 * energy)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "solve_min_graph: line search failed at iteration " << it << " (residual " << residual << ")";
      throw InnerSolverError(msg.str(), residual, it);
    }
    psi.swap(trial);
    gradient.swap(trial_gradient);
    energy = trial_energy;
    residual = free_sup_norm(gradient, idx);
    result.log.push_back({it, energy, residual, t, newton});
  }

  result.psi = GridFunction{mesh_ptr, std::move(psi)};
  result.iterations = it;
  result.objective = energy;
  result.residual = residual;
  return result;
}

InnerSolveResult solve_min_graph(std::shared_ptr<const FittedMesh> mesh, const InnerSolverOptions& options,
                                 const std::vector<double>* initial) {
  const auto boundary = standard_boundary_values(*mesh);
  return solve_min_graph(std::move(mesh), boundary, options, initial);
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceEntry>& log) {
  out << "iteration,objective,residual,step,newton\n";
  out.precision(17);
  for (const auto& e : log)
    out << e.iteration << ',' << e.objective << ',' << e.residual << ',' << e.step << ',' << (e.newton ? 1 : 0)
        << '\n';
}

}  // namespace vortex
