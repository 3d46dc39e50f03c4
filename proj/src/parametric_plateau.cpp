#include "vortex/parametric_plateau.hpp"

#include "vortex/log.hpp"

#include <Eigen/Geometry>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vortex {

namespace {

constexpr double pi = std::numbers::pi;

Eigen::Vector3d circle_point(double w1, double theta) { return {w1, std::cos(theta), std::sin(theta)}; }

// Rectangle [0,1]^2 (or [0,1] x periodic) split along the diagonal that makes
// the pattern symmetric under u -> 1-u and v -> 1-v.
void grid_triangles(DiscMesh& mesh, int nu, int nv, bool periodic, auto&& index) {
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      const int a = index(i, j), b = index(i + 1, j), c = index(i + 1, j + 1), d = index(i, j + 1);
      const bool lower_u = 2 * i < nu, lower_v = 2 * j < nv;
      if (lower_u == lower_v || periodic) {
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, d});
      } else {
        mesh.triangles.push_back({a, b, d});
        mesh.triangles.push_back({b, c, d});
      }
    }
}

int even_at_least(double x, int lo) {
  int n = std::max(lo, static_cast<int>(std::lround(x)));
  return n + n % 2;
}

DiscMesh strip_mesh(const SpaceCurve& gamma, int refine) {
  const double span = gamma.separation;
  const int nv = even_at_least(refine, 8);
  const int nu = even_at_least(refine * span / pi, 4);
  DiscMesh mesh;
  auto index = [nv](int i, int j) { return i * (nv + 1) + j; };
  for (int i = 0; i <= nu; ++i)
    for (int j = 0; j <= nv; ++j) {
      const double u = static_cast<double>(i) / nu, v = static_cast<double>(j) / nv;
      mesh.param.emplace_back(u, v);
      if (i == 0 || i == nu) {
        mesh.position.push_back(circle_point(u * span, 2 * pi * v));
        mesh.role.push_back(VertexRole::Fixed);
      } else if (j == 0 || j == nv) {
        mesh.position.emplace_back(u * span, 1.0, 0.0);
        mesh.role.push_back(VertexRole::Slide);
      } else {
        mesh.position.emplace_back(u * span, 0.0, 0.0);
        mesh.role.push_back(VertexRole::Free);
      }
    }
  grid_triangles(mesh, nu, nv, false, index);
  for (int j = 0; j < nv; ++j) mesh.boundary.push_back(index(0, j));
  for (int i = 0; i < nu; ++i) mesh.boundary.push_back(index(i, nv));
  for (int j = nv; j > 0; --j) mesh.boundary.push_back(index(nu, j));
  for (int i = nu; i > 0; --i) mesh.boundary.push_back(index(i, 0));
  mesh.slide_min = 0.0;
  mesh.slide_max = span;
  return mesh;
}

DiscMesh annulus_mesh(const SpaceCurve& pair, int refine) {
  const double d = pair.separation;
  const int nv = even_at_least(refine, 8);
  const int nu = even_at_least(refine * d / pi, 4);
  DiscMesh mesh;
  auto index = [nv](int i, int j) { return i * nv + (j % nv); };
  for (int i = 0; i <= nu; ++i)
    for (int j = 0; j < nv; ++j) {
      const double u = static_cast<double>(i) / nu, v = static_cast<double>(j) / nv;
      mesh.param.emplace_back(u, v);
      mesh.position.push_back(circle_point(u * d, 2 * pi * v));
      mesh.role.push_back(i == 0 || i == nu ? VertexRole::Fixed : VertexRole::Free);
    }
  grid_triangles(mesh, nu, nv, true, index);
  for (int j = 0; j < nv; ++j) mesh.boundary.push_back(index(0, j));
  for (int j = 0; j < nv; ++j) mesh.boundary.push_back(index(nu, j));
  return mesh;
}

// Concentric rings around a centre vertex; neighbouring rings are stitched by
// always advancing on the ring whose next vertex is angularly closer.
DiscMesh polar_mesh(int refine) {
  const int m = std::max(8, refine);
  const int rings = std::max(2, static_cast<int>(std::lround(m / (2 * pi))));
  DiscMesh mesh;
  mesh.param.emplace_back(0.0, 0.0);
  mesh.position.emplace_back(0.0, 0.0, 0.0);
  mesh.role.push_back(VertexRole::Free);
  std::vector<int> first{0}, count{1};
  for (int k = 1; k <= rings; ++k) {
    const int nk = k == rings ? m : std::max(6, static_cast<int>(std::lround(static_cast<double>(m) * k / rings)));
    first.push_back(static_cast<int>(mesh.param.size()));
    count.push_back(nk);
    const double r = static_cast<double>(k) / rings;
    for (int q = 0; q < nk; ++q) {
      const double t = 2 * pi * q / nk;
      mesh.param.emplace_back(r * std::cos(t), r * std::sin(t));
      mesh.position.emplace_back(0.0, r * std::cos(t), r * std::sin(t));
      mesh.role.push_back(k == rings ? VertexRole::Fixed : VertexRole::Free);
    }
  }
  for (int q = 0; q < count[1]; ++q) mesh.triangles.push_back({0, first[1] + q, first[1] + (q + 1) % count[1]});
  for (int k = 1; k < rings; ++k) {
    const int na = count[k], nb = count[k + 1];
    int a = 0, b = 0;
    while (a < na || b < nb) {
      const double ta = 2 * pi * (a + 1) / na, tb = 2 * pi * (b + 1) / nb;
      const int va = first[k] + a % na, vb = first[k + 1] + b % nb;
      if (b < nb && (a >= na || tb <= ta)) {
        mesh.triangles.push_back({va, vb, first[k + 1] + (b + 1) % nb});
        ++b;
      } else {
        mesh.triangles.push_back({va, vb, first[k] + (a + 1) % na});
        ++a;
      }
    }
  }
  for (int q = 0; q < m; ++q) mesh.boundary.push_back(first[rings] + q);
  return mesh;
}

double triangle_area(const DiscMesh& mesh, const std::array<int, 3>& t) {
  const auto& p = mesh.position;
  return 0.5 * (p[t[1]] - p[t[0]]).cross(p[t[2]] - p[t[0]]).norm();
}

using SpMat = Eigen::SparseMatrix<double>;

// Solves L X = 0 per coordinate with the given weights; `free_x` and
// `free_yz` mark the unknowns of the w1 and of the (w2, w3) systems.
void harmonic_step(DiscMesh& mesh, const std::vector<Eigen::Triplet<double>>& stiffness, const std::vector<bool>& free_x,
                   const std::vector<bool>& free_yz) {
  const int n = static_cast<int>(mesh.position.size());
  auto solve = [&](const std::vector<bool>& is_free, const std::vector<int>& coords) {
    std::vector<int> id(n, -1);
    int nf = 0;
    for (int v = 0; v < n; ++v)
      if (is_free[v]) id[v] = nf++;
    if (nf == 0) return;
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nf, static_cast<int>(coords.size()));
    for (const auto& t : stiffness) {
      const int r = id[t.row()];
      if (r < 0) continue;
      const int c = id[t.col()];
      if (c >= 0)
        trip.emplace_back(r, c, t.value());
      else
        for (std::size_t k = 0; k < coords.size(); ++k) rhs(r, k) -= t.value() * mesh.position[t.col()](coords[k]);
    }
    SpMat A(nf, nf);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("solve_plateau: singular Laplace system");
    const Eigen::MatrixXd sol = ldlt.solve(rhs);
    for (int v = 0; v < n; ++v)
      if (id[v] >= 0)
        for (std::size_t k = 0; k < coords.size(); ++k) mesh.position[v](coords[k]) = sol(id[v], k);
  };
  if (free_x == free_yz) {
    solve(free_x, {0, 1, 2});
  } else {
    solve(free_x, {0});
    solve(free_yz, {1, 2});
  }
}

std::vector<Eigen::Triplet<double>> uniform_weights(const DiscMesh& mesh) {
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      // every interior edge is seen twice
      trip.emplace_back(a, b, -0.5);
      trip.emplace_back(b, a, -0.5);
      trip.emplace_back(a, a, 0.5);
      trip.emplace_back(b, b, 0.5);
    }
  return trip;
}

std::vector<Eigen::Triplet<double>> cotan_weights(const DiscMesh& mesh) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.triangles.size() * 12);
  const auto& p = mesh.position;
  for (const auto& t : mesh.triangles) {
    const double twice = (p[t[1]] - p[t[0]]).cross(p[t[2]] - p[t[0]]).norm();
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3], c = t[(k + 2) % 3];
      // cot of the angle at a, opposite the edge bc
      const double w = 0.5 * (p[b] - p[a]).dot(p[c] - p[a]) / twice;
      trip.emplace_back(b, c, -w);
      trip.emplace_back(c, b, -w);
      trip.emplace_back(b, b, w);
      trip.emplace_back(c, c, w);
    }
  }
  return trip;
}

}  // namespace

double SpaceCurve::length() const {
  double total = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (kind == CurveKind::CirclePair && (static_cast<int>(k) == corners[1] - 1 || k + 1 == points.size())) {
      // closing edge of each circle
      const int start = static_cast<int>(k) < corners[1] ? 0 : corners[1];
      total += (points[start] - points[k]).norm();
      continue;
    }
    total += (points[(k + 1) % points.size()] - points[k]).norm();
  }
  return total;
}

SpaceCurve build_gamma(double l, int m) {
  if (m < 8) throw std::invalid_argument("build_gamma: need at least 8 points per circle");
  if (!(l > 0.0)) throw std::invalid_argument("build_gamma: l must be positive");
  const int s = std::max(2, static_cast<int>(std::lround(m * l / pi)));
  SpaceCurve c;
  c.kind = CurveKind::Gamma;
  c.separation = 2 * l;
  c.corners = {0, m, m + s, 2 * m + s};
  for (int k = 0; k < m; ++k) c.points.push_back(circle_point(0.0, 2 * pi * k / m));
  for (int j = 0; j < s; ++j) c.points.emplace_back(2 * l * j / s, 1.0, 0.0);
  for (int k = 0; k < m; ++k) c.points.push_back(circle_point(2 * l, -2 * pi * k / m));
  for (int j = 0; j < s; ++j) c.points.emplace_back(2 * l - 2 * l * j / s, 1.0, 0.0);
  return c;
}

SpaceCurve build_circle(int m) {
  if (m < 8) throw std::invalid_argument("build_circle: need at least 8 points");
  SpaceCurve c;
  c.kind = CurveKind::Circle;
  for (int k = 0; k < m; ++k) c.points.push_back(circle_point(0.0, 2 * pi * k / m));
  return c;
}

SpaceCurve build_circle_pair(double d, int m) {
  if (m < 8) throw std::invalid_argument("build_circle_pair: need at least 8 points per circle");
  if (!(d > 0.0)) throw std::invalid_argument("build_circle_pair: distance must be positive");
  SpaceCurve c;
  c.kind = CurveKind::CirclePair;
  c.separation = d;
  c.corners = {0, m, m, m};
  for (int k = 0; k < m; ++k) c.points.push_back(circle_point(0.0, 2 * pi * k / m));
  for (int k = 0; k < m; ++k) c.points.push_back(circle_point(d, 2 * pi * k / m));
  return c;
}

double DiscMesh::area() const {
  double total = 0.0;
  for (const auto& t : triangles) total += triangle_area(*this, t);
  return total;
}

double DiscMesh::min_quality() const {
  double q = std::numeric_limits<double>::infinity();
  for (const auto& t : triangles) {
    const auto& p = position;
    const double e = (p[t[1]] - p[t[0]]).squaredNorm() + (p[t[2]] - p[t[1]]).squaredNorm() +
                     (p[t[0]] - p[t[2]]).squaredNorm();
    q = std::min(q, e > 0 ? 4.0 * std::sqrt(3.0) * triangle_area(*this, t) / e : 0.0);
  }
  return q;
}

PlateauResult solve_plateau(const SpaceCurve& curve, int refine, const PlateauOptions& options) {
  if (curve.points.size() < 3) throw std::invalid_argument("solve_plateau: curve too short");
  if (refine < 8) throw std::invalid_argument("solve_plateau: refine must be at least 8");
  PlateauResult result;
  switch (curve.kind) {
    case CurveKind::Circle:
      result.mesh = polar_mesh(refine);
      result.competitor_area = std::numeric_limits<double>::infinity();
      break;
    case CurveKind::Gamma:
      result.mesh = strip_mesh(curve, refine);
      result.competitor_area = 2 * pi;
      break;
    case CurveKind::CirclePair:
      result.mesh = annulus_mesh(curve, refine);
      result.competitor_area = 2 * pi;
      break;
  }
  DiscMesh& mesh = result.mesh;
  const int n = static_cast<int>(mesh.position.size());
  std::vector<bool> free_yz(n), free_x(n);
  for (int v = 0; v < n; ++v) {
    free_yz[v] = mesh.role[v] == VertexRole::Free;
    free_x[v] = mesh.role[v] != VertexRole::Fixed;
  }

  // Start from the harmonic extension of the boundary positions.
  harmonic_step(mesh, uniform_weights(mesh), free_yz, free_yz);
  double area = mesh.area();
  result.area_history.push_back(area);

  for (int it = 0; it < options.iterations; ++it) {
    if (mesh.min_quality() < options.pinch_quality) {
      result.pinched = true;
      break;
    }
    DiscMesh next = mesh;
    harmonic_step(next, cotan_weights(mesh), free_x, free_yz);
    for (int v = 0; v < n; ++v)
      if (next.role[v] == VertexRole::Slide)
        next.position[v].x() = std::clamp(next.position[v].x(), next.slide_min, next.slide_max);
    const double next_area = next.area();
    ++result.iterations;
    if (!std::isfinite(next_area) || next_area > area) break;  // no further descent
    mesh = std::move(next);
    const double drop = area - next_area;
    area = next_area;
    result.area_history.push_back(area);
    if (drop < options.area_tol) break;
  }
  if (!result.pinched && mesh.min_quality() < options.pinch_quality) result.pinched = true;
  result.area = area;
  result.degenerate = result.pinched || area >= result.competitor_area;
  std::ostringstream msg;
  msg << "plateau: " << result.iterations << " iterations, area " << area << ", min quality " << mesh.min_quality();
  log::debug(msg.str());
  return result;
}

PlateauResult solve_plateau(const SpaceCurve& curve, int refine, int iterations) {
  PlateauOptions o;
  o.iterations = iterations;
  return solve_plateau(curve, refine, o);
}

std::optional<double> catenoid_parameter(double d) {
  if (!(d > 0.0)) return std::nullopt;
  // c cosh(d / 2c) = 1; f(c) = c cosh(d / 2c) - 1 has its minimum where
  // (d / 2c) tanh(d / 2c) = 1, and the larger root lies between that point and 1.
  double t = 1.2;
  for (int k = 0; k < 60; ++k) t -= (t * std::tanh(t) - 1.0) / (std::tanh(t) + t / (std::cosh(t) * std::cosh(t)));
  const double c_min = d / (2 * t);
  auto f = [d](double c) { return c * std::cosh(d / (2 * c)) - 1.0; };
  if (f(c_min) > 0.0) return std::nullopt;
  double lo = c_min, hi = 1.0;
  for (int k = 0; k < 200 && hi - lo > 1e-16; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double catenoid_existence_limit() {
  double t = 1.2;
  for (int k = 0; k < 60; ++k) t -= (t * std::tanh(t) - 1.0) / (std::tanh(t) + t / (std::cosh(t) * std::cosh(t)));
  return 2.0 * t / std::cosh(t);
}

double catenoid_oracle(double d) {
  const auto c = catenoid_parameter(d);
  if (!c) throw std::domain_error("catenoid_oracle: no catenoid spans unit circles at this distance");
  return pi * *c * (d + *c * std::sinh(d / *c));
}

int gamma_refine_for(double l, int triangles) {
  // 2 nv nu triangles with nu = nv 2l / pi
  return std::max(8, static_cast<int>(std::lround(std::sqrt(triangles * pi / (4.0 * l)))));
}

CrossCheck compare_with_nonparametric(double l, const CrossCheckOptions& options) {
  if (!(l > 0.0)) throw std::invalid_argument("compare_with_nonparametric: l must be positive");
  const int refine = gamma_refine_for(l, options.triangles);
  auto parametric = [&] { return solve_plateau(build_gamma(l, refine), refine, options.plateau); };
  PlateauResult plateau;
  SolveReport report;
  if (options.optimizer.jobs > 1) {
    auto fut = std::async(std::launch::async, parametric);
    report = minimize_over_profiles(l, options.n1, options.n2, options.optimizer);
    plateau = fut.get();
  } else {
    plateau = parametric();
    report = minimize_over_profiles(l, options.n1, options.n2, options.optimizer);
  }
  CrossCheck out;
  out.l = l;
  out.half_area_parametric = 0.5 * plateau.value();
  out.min_F2l = report.value;
  out.abs_gap = std::abs(out.half_area_parametric - out.min_F2l);
  out.rel_gap = out.abs_gap / out.min_F2l;
  out.parametric_degenerate = plateau.degenerate;
  out.nonparametric_degenerate = report.degenerate;
  return out;
}

void write_obj(std::ostream& out, const DiscMesh& mesh) {
  out.precision(17);
  for (const auto& p : mesh.position) out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

}  // namespace vortex
