#include "vortex/discretization.hpp"

#include "vortex/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vortex {

double reference_row(int j, int n2) {
  if (j == 0) return -1.0;
  if (j == n2) return 1.0;
  return -std::cos(std::numbers::pi * j / n2);
}

double FittedMesh::mesh_size() const {
  double width = span() / n1;
  double height = 0.0;
  for (int i = 0; i <= n1; ++i)
    for (int j = 0; j < n2; ++j)
      height = std::max(height, vertices[vertex(i, j + 1)].y() - vertices[vertex(i, j)].y());
  return std::max(width, height);
}

GridFunction GridFunction::zeros(std::shared_ptr<const FittedMesh> mesh) {
  const std::size_t n = mesh->vertex_count();
  return {std::move(mesh), std::vector<double>(n, 0.0)};
}

namespace {

// `split` is the first column whose cells use the b-d diagonal; cells left of
// it use a-c. Splitting at n1/2 makes the doubled mesh mirror symmetric.
std::shared_ptr<const FittedMesh> build(MeshKind kind, double half_length, std::vector<double> tops,
                                        int n2, int split) {
  const int n1 = static_cast<int>(tops.size()) - 1;
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("fitted mesh: resolutions must be positive");
  if (!(half_length > 0.0)) throw std::invalid_argument("fitted mesh: half length must be positive");
  for (double t : tops)
    if (!(t > -1.0))
      throw DegenerateDomainError("fitted mesh: profile touches the bottom edge (min h = -1)");

  auto mesh = std::make_shared<FittedMesh>();
  mesh->kind = kind;
  mesh->half_length = half_length;
  mesh->n1 = n1;
  mesh->n2 = n2;
  mesh->column_top = std::move(tops);
  mesh->column_w1.resize(n1 + 1);
  const double span = mesh->span();
  for (int i = 0; i <= n1; ++i) mesh->column_w1[i] = span * i / n1;

  mesh->vertices.resize(static_cast<std::size_t>(n1 + 1) * (n2 + 1));
  mesh->tags.resize(mesh->vertices.size(), NodeTag::Interior);
  std::vector<double> ref(n2 + 1);
  for (int j = 0; j <= n2; ++j) ref[j] = reference_row(j, n2);

  for (int i = 0; i <= n1; ++i) {
    const double stretch = 0.5 * (mesh->column_top[i] + 1.0);
    for (int j = 0; j <= n2; ++j) {
      const int v = mesh->vertex(i, j);
      const double w2 = j == n2 ? mesh->column_top[i] : -1.0 + (ref[j] + 1.0) * stretch;
      mesh->vertices[v] = Eigen::Vector2d(mesh->column_w1[i], w2);
      NodeTag tag = NodeTag::Interior;
      if (i == 0)
        tag = NodeTag::LateralLeft;
      else if (i == n1 && kind == MeshKind::Doubled)
        tag = NodeTag::LateralRight;
      else if (j == 0)
        tag = NodeTag::Bottom;
      else if (j == n2)
        tag = NodeTag::Graph;
      else if (i == n1)
        tag = NodeTag::FreeEdge;
      mesh->tags[v] = tag;
    }
  }

  mesh->triangles.reserve(2 * static_cast<std::size_t>(n1) * n2);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const int a = mesh->vertex(i, j), b = mesh->vertex(i + 1, j);
      const int c = mesh->vertex(i + 1, j + 1), d = mesh->vertex(i, j + 1);
      if (i < split) {
        mesh->triangles.push_back({a, b, c});
        mesh->triangles.push_back({a, c, d});
      } else {
        mesh->triangles.push_back({a, b, d});
        mesh->triangles.push_back({b, c, d});
      }
    }
  }

  bool symmetric = kind == MeshKind::Doubled && n1 % 2 == 0;
  for (int i = 0; symmetric && i <= n1; ++i) symmetric = mesh->column_top[i] == mesh->column_top[n1 - i];
  mesh->mirror_symmetric = symmetric;
  return mesh;
}

}  // namespace

std::shared_ptr<const FittedMesh> build_fitted_mesh(const ConvexProfile& h, int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("build_fitted_mesh: resolutions must be positive");
  if (h.values.size() < 2) throw std::invalid_argument("build_fitted_mesh: profile needs two nodes");
  std::vector<double> tops(n1 + 1);
  const bool same_nodes = h.intervals() == n1;
  for (int i = 0; i <= n1; ++i) tops[i] = same_nodes ? h.values[i] : h.at(h.span() * i / n1);
  // Interpolation may break exact symmetry in the last bit.
  if (n1 % 2 == 0 && symmetry_defect(h.values) == 0.0)
    for (int i = 0; i < n1 / 2; ++i) tops[n1 - i] = tops[i];
  return build(MeshKind::Doubled, h.half_length, std::move(tops), n2, n1 / 2 + n1 % 2);
}

std::shared_ptr<const FittedMesh> build_half_mesh(const HalfProfile& h, int n2) {
  if (h.values.size() < 2) throw std::invalid_argument("build_half_mesh: profile needs two nodes");
  return build(MeshKind::Half, h.half_length, h.values, n2, h.intervals());
}

std::vector<ElementGeometry> element_geometry(const FittedMesh& mesh) {
  std::vector<ElementGeometry> out(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector2d& p0 = mesh.vertices[tri[0]];
    const Eigen::Vector2d& p1 = mesh.vertices[tri[1]];
    const Eigen::Vector2d& p2 = mesh.vertices[tri[2]];
    const Eigen::Vector2d e0 = p2 - p1, e1 = p0 - p2, e2 = p1 - p0;
    const double twice = e2.x() * (-e1.y()) - e2.y() * (-e1.x());
    ElementGeometry& g = out[t];
    g.area = 0.5 * twice;
    // grad lambda_k = perp(opposite edge) / (2A), perp(x, y) = (-y, x).
    g.grad[0] = Eigen::Vector2d(-e0.y(), e0.x()) / twice;
    g.grad[1] = Eigen::Vector2d(-e1.y(), e1.x()) / twice;
    g.grad[2] = Eigen::Vector2d(-e2.y(), e2.x()) / twice;
  }
  return out;
}

double lift_area(const FittedMesh& mesh, std::span<const double> psi) {
  if (psi.size() != mesh.vertex_count()) throw std::invalid_argument("lift_area: size mismatch");
  double total = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Eigen::Vector3d p0(mesh.vertices[tri[0]].x(), mesh.vertices[tri[0]].y(), psi[tri[0]]);
    const Eigen::Vector3d p1(mesh.vertices[tri[1]].x(), mesh.vertices[tri[1]].y(), psi[tri[1]]);
    const Eigen::Vector3d p2(mesh.vertices[tri[2]].x(), mesh.vertices[tri[2]].y(), psi[tri[2]]);
    total += 0.5 * (p1 - p0).cross(p2 - p0).norm();
  }
  return total;
}

double lift_area(const GridFunction& psi) { return lift_area(*psi.mesh, psi.values); }

std::vector<double> lift_area_top_gradient(const FittedMesh& mesh, std::span<const double> psi) {
  if (psi.size() != mesh.vertex_count()) throw std::invalid_argument("lift_area_top_gradient: size mismatch");
  std::vector<double> dy(mesh.vertex_count(), 0.0);
  for (const auto& tri : mesh.triangles) {
    Eigen::Vector3d p[3];
    for (int k = 0; k < 3; ++k) p[k] = {mesh.vertices[tri[k]].x(), mesh.vertices[tri[k]].y(), psi[tri[k]]};
    const Eigen::Vector3d n = (p[1] - p[0]).cross(p[2] - p[0]);
    const double len = n.norm();
    if (len == 0.0) continue;
    const Eigen::Vector3d unit = n / len;
    // dA/dp_a = 1/2 n x (p_c - p_b) for the cyclic order a, b, c
    for (int a = 0; a < 3; ++a) dy[tri[a]] += 0.5 * unit.cross(p[(a + 2) % 3] - p[(a + 1) % 3]).y();
  }
  std::vector<double> out(mesh.n1 + 1, 0.0);
  for (int i = 0; i <= mesh.n1; ++i)
    for (int j = 0; j <= mesh.n2; ++j) out[i] += dy[mesh.vertex(i, j)] * 0.5 * (reference_row(j, mesh.n2) + 1.0);
  return out;
}

double planar_area(const FittedMesh& mesh) {
  double total = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Eigen::Vector2d a = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
    const Eigen::Vector2d b = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
    total += 0.5 * std::abs(a.x() * b.y() - a.y() * b.x());
  }
  return total;
}

}  // namespace vortex
