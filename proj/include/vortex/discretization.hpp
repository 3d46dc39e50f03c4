#pragma once

// Boundary-fitted triangulations of the subgraph SG_h and the piecewise-linear
// graph area.

#include "vortex/geometry.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

namespace vortex {

enum class NodeTag : std::uint8_t {
  Interior,
  LateralLeft,   // w1 = 0
  LateralRight,  // w1 = 2l on the doubled rectangle
  Bottom,        // w2 = -1
  Graph,         // w2 = h(w1)
  FreeEdge,      // w1 = l on the half rectangle (no boundary condition)
};

enum class MeshKind : std::uint8_t { Doubled, Half };

/// Terrain-following triangulation of {0 <= w1 <= span, -1 <= w2 <= h(w1)}.
///
/// Column i sits at w1_i = span * i / n1. Row j is the image of the reference
/// coordinate s_j = -cos(pi j / n2) under s -> -1 + (s + 1)(h(w1_i) + 1) / 2,
/// so rows cluster towards the bottom edge and the graph, where the lateral
/// datum has unbounded slope. Vertices are numbered column by column,
/// v = i * (n2 + 1) + j.
struct FittedMesh {
  MeshKind kind = MeshKind::Doubled;
  double half_length = 0.0;
  int n1 = 0;
  int n2 = 0;
  std::vector<double> column_w1;   // n1 + 1 abscissae
  std::vector<double> column_top;  // h at each column
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<NodeTag> tags;
  // Exact index-wise mirror symmetry w1 -> 2l - w1 (doubled meshes over a
  // symmetric profile with n1 even).
  bool mirror_symmetric = false;

  double span() const { return kind == MeshKind::Doubled ? 2.0 * half_length : half_length; }
  int vertex(int i, int j) const { return i * (n2 + 1) + j; }
  int column_of(int v) const { return v / (n2 + 1); }
  int row_of(int v) const { return v % (n2 + 1); }
  int mirror(int v) const { return vertex(n1 - column_of(v), row_of(v)); }
  std::size_t vertex_count() const { return vertices.size(); }
  /// Smallest grid spacing-independent length scale: max of column width and
  /// tallest cell height.
  double mesh_size() const;
};

/// Reference row coordinate in [-1, 1].
double reference_row(int j, int n2);

/// Nodal values of psi on a fitted mesh.
struct GridFunction {
  std::shared_ptr<const FittedMesh> mesh;
  std::vector<double> values;

  static GridFunction zeros(std::shared_ptr<const FittedMesh> mesh);
};

/// Fitted mesh over the doubled rectangle. The profile is sampled at the
/// column abscissae by linear interpolation. Throws DegenerateDomainError when
/// min h <= -1, std::invalid_argument for non-positive resolutions.
std::shared_ptr<const FittedMesh> build_fitted_mesh(const ConvexProfile& h, int n1, int n2);

/// Fitted mesh over the half rectangle [0,l] x [-1,1], one column per profile
/// node. The right column is the free edge.
std::shared_ptr<const FittedMesh> build_half_mesh(const HalfProfile& h, int n2);

/// Per-triangle planar area and barycentric gradients.
struct ElementGeometry {
  double area = 0.0;
  std::array<Eigen::Vector2d, 3> grad;
};

std::vector<ElementGeometry> element_geometry(const FittedMesh& mesh);

/// Sum over triangles of the area of the lifted triangle (w1, w2, psi).
/// Throws std::invalid_argument on a size mismatch.
double lift_area(const FittedMesh& mesh, std::span<const double> psi);
double lift_area(const GridFunction& psi);

/// Derivative of lift_area with respect to each column top, nodal values of
/// psi held fixed and the rows moving with the stretch map.
std::vector<double> lift_area_top_gradient(const FittedMesh& mesh, std::span<const double> psi);

/// Sum of planar triangle areas.
double planar_area(const FittedMesh& mesh);

}  // namespace vortex
