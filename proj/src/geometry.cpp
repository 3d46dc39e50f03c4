#include "vortex/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vortex {

double boundary_datum(double w2) {
  if (std::abs(w2) > 1.0) return 0.0;
  return std::sqrt(std::max(0.0, 1.0 - w2 * w2));
}

double boundary_datum_primitive(double s) {
  s = std::clamp(s, -1.0, 1.0);
  return 0.5 * (s * std::sqrt(std::max(0.0, 1.0 - s * s)) + std::asin(s));
}

double boundary_datum_integral(double a, double b) {
  return boundary_datum_primitive(b) - boundary_datum_primitive(a);
}

double ProfileSamples::at(double w1) const {
  const int n = intervals();
  if (n <= 0) return values.empty() ? 0.0 : values.front();
  const double x = std::clamp(w1 / span, 0.0, 1.0) * n;
  const int i = std::min(static_cast<int>(x), n - 1);
  const double t = x - i;
  if (t == 0.0) return values[i];
  return values[i] + t * (values[i + 1] - values[i]);
}

double ProfileSamples::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

bool ConvexProfile::is_degenerate() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return v <= -1.0; });
}

ConvexProfile ConvexProfile::constant(double half_length, int intervals, double value) {
  return {half_length, std::vector<double>(intervals + 1, value)};
}

bool HalfProfile::is_degenerate() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return v <= -1.0; });
}

bool HalfProfile::in_class(double tol) const {
  if (values.empty() || std::abs(values.front() - 1.0) > tol) return false;
  for (double v : values)
    if (v < -1.0 - tol || v > 1.0 + tol) return false;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1] + tol) return false;
  return min_second_difference(values) >= -tol;
}

double symmetry_defect(std::span<const double> values) {
  double d = 0.0;
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(values[i] - values[n - 1 - i]));
  return d;
}

double min_second_difference(std::span<const double> values) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    m = std::min(m, values[i - 1] - 2.0 * values[i] + values[i + 1]);
  return m;
}

bool is_feasible(const ConvexProfile& h, double tol) {
  for (double v : h.values)
    if (v < -1.0 - tol || v > 1.0 + tol) return false;
  return symmetry_defect(h.values) <= tol && min_second_difference(h.values) >= -tol;
}

namespace {

// Lawson-Hanson nonnegative least squares: min |E u - f| over u >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& E, const Eigen::VectorXd& f) {
  const int n = static_cast<int>(E.cols());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 1e-13 * std::max(1.0, E.cwiseAbs().maxCoeff());
  auto solve_passive = [&]() {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    Eigen::MatrixXd Ep(E.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ep.col(static_cast<Eigen::Index>(k)) = E.col(idx[k]);
    const Eigen::VectorXd sp = Ep.colPivHouseholderQr().solve(f);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = sp(static_cast<Eigen::Index>(k));
    return s;
  };
  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    const Eigen::VectorXd grad = E.transpose() * (f - E * u);
    int t = -1;
    double best = tol;
    for (int j = 0; j < n; ++j)
      if (!passive[j] && grad(j) > best) best = grad(j), t = j;
    if (t < 0) return u;
    passive[t] = true;
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      const Eigen::VectorXd s = solve_passive();
      double alpha = 1.0;
      bool clipped = false;
      for (int j = 0; j < n; ++j)
        if (passive[j] && s(j) <= 0.0) {
          clipped = true;
          const double denom = u(j) - s(j);
          alpha = std::min(alpha, denom > 0.0 ? u(j) / denom : 0.0);
        }
      if (!clipped) {
        u = s;
        break;
      }
      u += alpha * (s - u);
      for (int j = 0; j < n; ++j)
        if (passive[j] && u(j) <= tol) {
          passive[j] = false;
          u(j) = 0.0;
        }
    }
  }
  throw std::runtime_error("project_profile: nonnegative least squares did not terminate");
}

// min 0.5 (z-c)^T W (z-c)  s.t.  A z >= b, with W diagonal positive. With
// z = c + W^{-1/2} x this is a least-distance problem, solved through its
// NNLS dual; the result is then refined by an exact projection onto the
// constraints found active.
Eigen::VectorXd weighted_projection(const Eigen::VectorXd& c, const Eigen::VectorXd& w, const Eigen::MatrixXd& A,
                                    const Eigen::VectorXd& b) {
  const int m = static_cast<int>(c.size()), rows = static_cast<int>(A.rows());
  const Eigen::VectorXd wis = w.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd G = A * wis.asDiagonal();
  const Eigen::VectorXd h = b - A * c;
  Eigen::MatrixXd E(m + 1, rows);
  E.topRows(m) = G.transpose();
  E.row(m) = h.transpose();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(m + 1);
  f(m) = 1.0;
  const Eigen::VectorXd u = nnls(E, f);
  const Eigen::VectorXd r = E * u - f;
  if (std::abs(r(m)) < 1e-14) throw std::runtime_error("project_profile: empty feasible set");
  Eigen::VectorXd z = c + wis.cwiseProduct(-r.head(m) / r(m));

  std::vector<int> active;
  for (int k = 0; k < rows; ++k)
    if (A.row(k).dot(z) - b(k) <= 1e-9) active.push_back(k);
  if (active.empty()) return z;
  Eigen::MatrixXd Aa(static_cast<Eigen::Index>(active.size()), m);
  Eigen::VectorXd ba(static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) {
    Aa.row(static_cast<Eigen::Index>(k)) = A.row(active[k]);
    ba(static_cast<Eigen::Index>(k)) = b(active[k]);
  }
  const Eigen::VectorXd winv = w.cwiseInverse();
  const Eigen::MatrixXd M = Aa * winv.asDiagonal() * Aa.transpose();
  const Eigen::VectorXd lambda = M.completeOrthogonalDecomposition().solve(ba - Aa * c);
  const Eigen::VectorXd refined = c + winv.cwiseProduct(Aa.transpose() * lambda);
  if (((A * refined - b).array() >= -1e-12).all() && (lambda.array() >= -1e-10).all()) return refined;
  return z;
}

}  // namespace

ConvexProfile project_profile(std::span<const double> raw, double half_length) {
  const int n = static_cast<int>(raw.size()) - 1;
  if (n < 2) throw std::invalid_argument("project_profile: need at least 3 nodes");
  if (!(half_length > 0.0)) throw std::invalid_argument("project_profile: half length must be positive");

  ConvexProfile sym{half_length, std::vector<double>(n + 1)};
  for (int i = 0; i <= n; ++i) sym.values[i] = 0.5 * (raw[i] + raw[n - i]);
  if (is_feasible(sym, 1e-13)) return sym;

  // Half variables z_k, k = 0..n/2, with x_i = z_{min(i, n-i)}.
  const int m = n / 2 + 1;
  auto half = [n](int i) { return std::min(i, n - i); };
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m), c = Eigen::VectorXd::Zero(m);
  for (int i = 0; i <= n; ++i) {
    w(half(i)) += 1.0;
    c(half(i)) += sym.values[i];
  }
  c = c.cwiseQuotient(w);

  const int convex_rows = n / 2;  // second differences at i = 1..floor(n/2)
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(convex_rows + 2 * m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(convex_rows + 2 * m);
  for (int i = 1; i <= convex_rows; ++i) {
    A(i - 1, half(i - 1)) += 1.0;
    A(i - 1, half(i)) -= 2.0;
    A(i - 1, half(i + 1)) += 1.0;
  }
  for (int k = 0; k < m; ++k) {
    A(convex_rows + 2 * k, k) = 1.0;
    b(convex_rows + 2 * k) = -1.0;
    A(convex_rows + 2 * k + 1, k) = -1.0;
    b(convex_rows + 2 * k + 1) = -1.0;
  }

  const Eigen::VectorXd z = weighted_projection(c, w, A, b);

  ConvexProfile out{half_length, std::vector<double>(n + 1)};
  for (int i = 0; i <= n; ++i) out.values[i] = std::clamp(z(half(i)), -1.0, 1.0);
  return out;
}

double subgraph_measure(const ConvexProfile& h) {
  if (h.values.size() < 2) return 0.0;
  const double dx = h.span() / h.intervals();
  double s = 0.0;
  for (int i = 0; i < h.intervals(); ++i) s += 0.5 * dx * ((h.values[i] + 1.0) + (h.values[i + 1] + 1.0));
  return s;
}

ConvexProfile reflect(const HalfProfile& h) {
  const int k = h.intervals();
  ConvexProfile out{h.half_length, std::vector<double>(2 * k + 1)};
  for (int i = 0; i <= 2 * k; ++i) out.values[i] = h.values[std::min(i, 2 * k - i)];
  return out;
}

HalfProfile restrict_to_half(const ConvexProfile& h) {
  const int n = h.intervals();
  if (n % 2 != 0) throw std::invalid_argument("restrict_to_half: odd number of intervals");
  return {h.half_length, std::vector<double>(h.values.begin(), h.values.begin() + n / 2 + 1)};
}

}  // namespace vortex
