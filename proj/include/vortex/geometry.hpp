#pragma once

// Domain description: the rectangle R_{2l} = (0,2l) x (-1,1), the lateral
// boundary datum and the free-boundary profiles.

#include <span>
#include <vector>

namespace vortex {

/// Lateral boundary datum: sqrt(1 - w2^2) on [-1,1], zero outside.
double boundary_datum(double w2);

/// Antiderivative of the boundary datum, 0.5*(s*sqrt(1-s^2) + asin(s)),
/// with s clamped to [-1,1].
double boundary_datum_primitive(double s);

/// Exact integral of the boundary datum over [a,b].
double boundary_datum_integral(double a, double b);

/// Samples of a profile w1 -> h(w1) at uniform nodes of [0, span].
/// Shared by the doubled and half profiles.
struct ProfileSamples {
  double span = 0.0;
  std::vector<double> values;

  int intervals() const { return static_cast<int>(values.size()) - 1; }
  double node(int i) const { return span * i / intervals(); }
  /// Piecewise-linear interpolation, clamped to [0, span].
  double at(double w1) const;
  double min_value() const;
};

/// Free boundary on the doubled interval [0, 2l]: convex, symmetric and
/// valued in [-1,1]. Nodes t_i = i * 2l / n.
struct ConvexProfile {
  double half_length = 0.0;
  std::vector<double> values;

  int intervals() const { return static_cast<int>(values.size()) - 1; }
  double span() const { return 2.0 * half_length; }
  double node(int i) const { return span() * i / intervals(); }
  double at(double w1) const { return samples().at(w1); }
  ProfileSamples samples() const { return {span(), values}; }

  /// h identically -1: the pair of half discs joined by the bottom segment.
  bool is_degenerate() const;

  static ConvexProfile constant(double half_length, int intervals, double value);
  static ConvexProfile degenerate(double half_length, int intervals) {
    return constant(half_length, intervals, -1.0);
  }
};

/// Profile on the half interval [0, l]. The class used by the single-rectangle
/// functional is convex, nonincreasing with h(0) = 1, but the transforms that
/// produce such profiles accept arbitrary values in [-1,1].
struct HalfProfile {
  double half_length = 0.0;
  std::vector<double> values;

  int intervals() const { return static_cast<int>(values.size()) - 1; }
  double span() const { return half_length; }
  double node(int i) const { return span() * i / intervals(); }
  double at(double w1) const { return samples().at(w1); }
  ProfileSamples samples() const { return {span(), values}; }
  bool is_degenerate() const;

  /// Convex, nonincreasing, h(0) = 1 and in range, up to `tol`.
  bool in_class(double tol = 1e-12) const;
};

/// Largest |h_i - h_{n-i}|.
double symmetry_defect(std::span<const double> values);
/// Smallest second difference h_{i-1} - 2 h_i + h_{i+1}.
double min_second_difference(std::span<const double> values);
/// All ConvexProfile invariants (range, symmetry, convexity) up to `tol`.
bool is_feasible(const ConvexProfile& h, double tol = 1e-12);

/// Euclidean projection onto the convex, symmetric, [-1,1]-valued profiles.
/// Symmetrizes first, then solves the box- and convexity-constrained least
/// squares problem with a primal active-set method. Throws
/// std::invalid_argument for fewer than three nodes.
ConvexProfile project_profile(std::span<const double> raw, double half_length);

/// Trapezoid quadrature of the integral of h + 1 over [0, 2l].
double subgraph_measure(const ConvexProfile& h);

/// Even reflection of a half profile about w1 = l.
ConvexProfile reflect(const HalfProfile& h);

/// Restriction of a doubled profile to [0, l]; requires an even node count.
HalfProfile restrict_to_half(const ConvexProfile& h);

}  // namespace vortex
