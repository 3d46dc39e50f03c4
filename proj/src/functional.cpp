#include "vortex/functional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vortex {

double linear_abs_integral(double length, double ua, double ub) {
  if ((ua >= 0.0 && ub >= 0.0) || (ua <= 0.0 && ub <= 0.0)) return length * 0.5 * std::abs(ua + ub);
  return length * (ua * ua + ub * ub) / (2.0 * std::abs(ua - ub));
}

double wall_integral(double a, double b, double alpha, double beta) {
  if (b <= a) return 0.0;
  // Crossings of the line with the upper unit semicircle inside (a, b).
  double cuts[4] = {a, 0.0, 0.0, b};
  int count = 1;
  const double qa = 1.0 + beta * beta, qb = 2.0 * alpha * beta, qc = alpha * alpha - 1.0;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    double r1 = (-qb - sq) / (2.0 * qa), r2 = (-qb + sq) / (2.0 * qa);
    for (double r : {r1, r2})
      if (r > a && r < b && alpha + beta * r >= 0.0) cuts[count++] = r;
  }
  cuts[count++] = b;
  std::sort(cuts, cuts + count);

  double total = 0.0;
  for (int k = 0; k + 1 < count; ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    if (hi <= lo) continue;
    const double line = alpha * (hi - lo) + 0.5 * beta * (hi * hi - lo * lo);
    total += std::abs(line - boundary_datum_integral(lo, hi));
  }
  return total;
}

namespace {

void check_fitted(const ProfileSamples& h, const FittedMesh& mesh, double half_length) {
  if (std::abs(mesh.half_length - half_length) > 1e-14 * std::max(1.0, half_length))
    throw std::invalid_argument("functional: mesh and profile have different lengths");
  for (int i = 0; i <= mesh.n1; ++i) {
    const double expected = h.intervals() == mesh.n1 ? h.values[i] : h.at(mesh.column_w1[i]);
    if (std::abs(expected - mesh.column_top[i]) > 1e-12)
      throw std::invalid_argument("functional: mesh is not fitted to the profile");
  }
}

double lateral_wall(const FittedMesh& mesh, std::span<const double> psi, int column) {
  double total = 0.0;
  for (int j = 0; j < mesh.n2; ++j) {
    const int va = mesh.vertex(column, j), vb = mesh.vertex(column, j + 1);
    const double sa = mesh.vertices[va].y(), sb = mesh.vertices[vb].y();
    if (sb <= sa) continue;
    const double beta = (psi[vb] - psi[va]) / (sb - sa);
    const double alpha = psi[va] - beta * sa;
    total += wall_integral(sa, sb, alpha, beta);
  }
  return total;
}

double row_wall(const FittedMesh& mesh, std::span<const double> psi, int row, bool use_arclength) {
  double total = 0.0;
  for (int i = 0; i < mesh.n1; ++i) {
    const int va = mesh.vertex(i, row), vb = mesh.vertex(i + 1, row);
    const Eigen::Vector2d d = mesh.vertices[vb] - mesh.vertices[va];
    const double length = use_arclength ? d.norm() : std::abs(d.x());
    total += linear_abs_integral(length, psi[va], psi[vb]);
  }
  return total;
}

FunctionalBreakdown evaluate(const FittedMesh& mesh, std::span<const double> psi) {
  if (psi.size() != mesh.vertex_count()) throw std::invalid_argument("functional: field size mismatch");
  FunctionalBreakdown out;
  out.area_term = lift_area(mesh, psi);
  out.dirichlet_mismatch = lateral_wall(mesh, psi, 0) + row_wall(mesh, psi, 0, false);
  if (mesh.kind == MeshKind::Doubled) out.dirichlet_mismatch += lateral_wall(mesh, psi, mesh.n1);
  out.graph_trace = row_wall(mesh, psi, mesh.n2, true);
  out.lh_term = boundary_datum_integral(mesh.column_top.front(), 1.0);
  if (mesh.kind == MeshKind::Doubled) out.lh_term += boundary_datum_integral(mesh.column_top.back(), 1.0);
  out.total = out.area_term + out.dirichlet_mismatch + out.graph_trace + out.lh_term;
  return out;
}

}  // namespace

FunctionalBreakdown eval_F2l(const ConvexProfile& h, const GridFunction& psi) {
  if (h.is_degenerate()) {
    FunctionalBreakdown out;
    out.lh_term = std::numbers::pi;
    out.total = std::numbers::pi;
    return out;
  }
  if (!psi.mesh) throw std::invalid_argument("eval_F2l: missing mesh for a nondegenerate profile");
  if (psi.mesh->kind != MeshKind::Doubled) throw std::invalid_argument("eval_F2l: expected a doubled mesh");
  check_fitted(h.samples(), *psi.mesh, h.half_length);
  return evaluate(*psi.mesh, psi.values);
}

FunctionalBreakdown eval_Fl(const HalfProfile& h, const GridFunction& psi) {
  if (h.is_degenerate()) {
    FunctionalBreakdown out;
    out.lh_term = 0.5 * std::numbers::pi;
    out.total = out.lh_term;
    return out;
  }
  if (!psi.mesh) throw std::invalid_argument("eval_Fl: missing mesh for a nondegenerate profile");
  if (psi.mesh->kind != MeshKind::Half) throw std::invalid_argument("eval_Fl: expected a half mesh");
  check_fitted(h.samples(), *psi.mesh, h.half_length);
  return evaluate(*psi.mesh, psi.values);
}

GridFunction reflect(const HalfProfile& h, const GridFunction& psi) {
  const FittedMesh& half = *psi.mesh;
  const int k = half.n1;
  auto full = build_fitted_mesh(reflect(h), 2 * k, half.n2);
  GridFunction out = GridFunction::zeros(full);
  for (int i = 0; i <= 2 * k; ++i)
    for (int j = 0; j <= half.n2; ++j)
      out.values[full->vertex(i, j)] = psi.values[half.vertex(std::min(i, 2 * k - i), j)];
  return out;
}

double check_doubling(const HalfProfile& h, const GridFunction& psi) {
  if (h.is_degenerate()) {
    const ConvexProfile full = reflect(h);
    return std::abs(2.0 * eval_Fl(h, psi).total - eval_F2l(full, GridFunction{}).total);
  }
  const GridFunction doubled = reflect(h, psi);
  return std::abs(2.0 * eval_Fl(h, psi).total - eval_F2l(reflect(h), doubled).total);
}

}  // namespace vortex
