#pragma once

// Discrete disc-type Plateau solver used to cross-check the nonparametric
// problem, plus closed-form catenoid oracles for two coaxial unit circles.
//
// Surfaces are minimized by the Pinkall-Polthier iteration: each step solves
// the cotangent Laplace equation of the current surface for the next one,
// which never increases the area.

#include "vortex/outer_optimizer.hpp"

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

namespace vortex {

enum class CurveKind {
  Circle,      // one planar unit circle
  Gamma,       // circle, segment, reversed circle, reversed segment
  CirclePair,  // two coaxial unit circles, no segment (annulus type)
};

/// Closed polyline (first point not repeated at the end). For Gamma the
/// `corners` hold the indices where the circle1, segment, circle2 and return
/// segment pieces start; for a circle pair `corners[1]` is the first vertex of
/// the second circle.
struct SpaceCurve {
  CurveKind kind = CurveKind::Circle;
  std::vector<Eigen::Vector3d> points;
  std::array<int, 4> corners{0, 0, 0, 0};
  double separation = 0.0;  // distance between the circle planes
  int orientation = 1;      // +1 counterclockwise seen from +w1

  double length() const;
};

/// Gamma for half length l with m points per circle. The segment gets
/// max(2, round(m * l / pi)) intervals. Throws std::invalid_argument for m < 8
/// or l <= 0.
SpaceCurve build_gamma(double l, int m);

/// Unit circle in the plane w1 = 0.
SpaceCurve build_circle(int m);

/// Unit circles in the planes w1 = 0 and w1 = d.
SpaceCurve build_circle_pair(double d, int m);

enum class VertexRole : unsigned char { Free, Fixed, Slide };  // Slide: moves along w1 only

/// Triangulated parameter disc (or annulus) with its current map to 3-space.
struct DiscMesh {
  std::vector<Eigen::Vector2d> param;      // parameter-domain coordinates
  std::vector<Eigen::Vector3d> position;   // map to 3-space
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary;               // ordered boundary loop(s)
  std::vector<VertexRole> role;
  double slide_min = 0.0, slide_max = 0.0; // range of sliding vertices in w1

  double area() const;
  /// Smallest 4 sqrt(3) A / (sum of squared edges) over triangles; 1 for equilateral.
  double min_quality() const;
};

struct PlateauResult {
  DiscMesh mesh;
  double area = 0.0;               // area of the returned mesh
  double competitor_area = 0.0;    // two flat discs (2 pi) when there are two circles
  bool degenerate = false;         // pinch or two-disc competitor wins
  bool pinched = false;
  int iterations = 0;
  std::vector<double> area_history;

  /// Area if the connected surface wins, the competitor otherwise.
  double value() const { return degenerate ? competitor_area : area; }
};

struct PlateauOptions {
  int iterations = 600;
  double area_tol = 1e-8;       // stop when one step decreases the area by less
  double pinch_quality = 1e-3;  // triangle quality that counts as a pinch
};

/// Minimizes area with the curve as boundary. `refine` is the number of
/// boundary intervals per circle (rounded up to even); for Gamma and circle
/// pairs the number of columns along w1 is about refine * separation / pi,
/// so Gamma with refine = 176 and l = 1/4 has about 10^4 triangles.
PlateauResult solve_plateau(const SpaceCurve& curve, int refine, const PlateauOptions& options = {});
PlateauResult solve_plateau(const SpaceCurve& curve, int refine, int iterations);

/// Larger root c of c cosh(d / (2c)) = 1, if it exists.
std::optional<double> catenoid_parameter(double d);

/// Largest separation with a catenoid spanning two unit circles (about 1.3255).
double catenoid_existence_limit();

/// Area of the stable catenoid between unit circles at distance d:
/// pi c (d + c sinh(d / c)). Throws std::domain_error beyond the existence limit.
double catenoid_oracle(double d);

struct CrossCheck {
  double l = 0.0;
  double half_area_parametric = 0.0;
  double min_F2l = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  bool parametric_degenerate = false;
  bool nonparametric_degenerate = false;
};

struct CrossCheckOptions {
  int triangles = 10000;  // target size of the Gamma mesh
  int n1 = 64, n2 = 64;
  PlateauOptions plateau;
  OptimizerConfig optimizer;  // its `jobs` also lets the two solvers run side by side
};

/// Refine value giving Gamma about `triangles` triangles.
int gamma_refine_for(double l, int triangles);

/// Half the Plateau area of Gamma against the minimum of F_{2l}.
CrossCheck compare_with_nonparametric(double l, const CrossCheckOptions& options = {});

/// Wavefront OBJ of the surface.
void write_obj(std::ostream& out, const DiscMesh& mesh);

}  // namespace vortex
