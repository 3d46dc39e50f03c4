#include "doctest.h"
#include "test_support.hpp"

#include "vortex/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace vortex;
using namespace vortex::testing;

TEST_CASE("boundary datum") {
  CHECK(boundary_datum(0.0) == 1.0);
  CHECK(boundary_datum(1.0) == 0.0);
  CHECK(boundary_datum(-1.0) == 0.0);
  CHECK(boundary_datum(0.6) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(boundary_datum(1.5) == 0.0);

  for (int k = 0; k <= 1000; ++k) {
    const double w2 = -1.0 + 2.0 * k / 1000.0;
    const double exact = std::sqrt(1.0 - w2 * w2);
    CHECK(std::abs(boundary_datum(w2) - exact) <= 1e-15);
    CHECK(boundary_datum(w2) == boundary_datum(-w2));
  }
  CHECK(boundary_datum_integral(-1.0, 1.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
}

namespace {

// Brute-force projection: enumerate every subset of the inequality rows as
// equalities (together with the symmetry equalities), keep the feasible
// KKT-consistent candidates and return the closest one.
Eigen::VectorXd brute_force_projection(const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (int i = 1; i + 1 < n; ++i) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    r(i - 1) = 1;
    r(i) = -2;
    r(i + 1) = 1;
    rows.push_back(r);
    rhs.push_back(0.0);
  }
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    r(i) = 1;
    rows.push_back(r);
    rhs.push_back(-1.0);
    rows.push_back(-r);
    rhs.push_back(-1.0);
  }
  std::vector<Eigen::VectorXd> sym;
  for (int i = 0; i < n / 2; ++i) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    r(i) = 1;
    r(n - 1 - i) = -1;
    sym.push_back(r);
  }
  const int m = static_cast<int>(rows.size());
  double best = 1e300;
  Eigen::VectorXd best_x;
  for (long mask = 0; mask < (1L << m); ++mask) {
    std::vector<Eigen::VectorXd> eq = sym;
    std::vector<double> b(sym.size(), 0.0);
    for (int r = 0; r < m; ++r)
      if (mask & (1L << r)) {
        eq.push_back(rows[r]);
        b.push_back(rhs[r]);
      }
    if (static_cast<int>(eq.size()) > n) continue;
    const int k = static_cast<int>(eq.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + k, n + k);
    Eigen::VectorXd f(n + k);
    K.topLeftCorner(n, n).setIdentity();
    for (int r = 0; r < k; ++r) {
      K.block(0, n + r, n, 1) = eq[r];
      K.block(n + r, 0, 1, n) = eq[r].transpose();
    }
    f.head(n) = y;
    for (int r = 0; r < k; ++r) f(n + r) = b[r];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (lu.rank() < n + k) continue;
    const Eigen::VectorXd sol = lu.solve(f);
    const Eigen::VectorXd x = sol.head(n);
    bool ok = true;
    for (int r = 0; r < m && ok; ++r) ok = rows[r].dot(x) >= rhs[r] - 1e-10;
    if (!ok) continue;
    const double d = (x - y).squaredNorm();
    if (d < best - 1e-12) {
      best = d;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace

TEST_CASE("project_profile") {
  SUBCASE("flat profile is already feasible") {
    const std::vector<double> raw(9, 1.0);
    const ConvexProfile p = project_profile(raw, 1.0);
    CHECK(p.values == raw);
  }
  SUBCASE("idempotent on feasible input") {
    auto g = rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const ConvexProfile h = random_convex_profile(g, 0.7, 16);
      const ConvexProfile p = project_profile(h.values, 0.7);
      for (std::size_t i = 0; i < h.values.size(); ++i) CHECK(p.values[i] == doctest::Approx(h.values[i]).epsilon(1e-15));
      const ConvexProfile pp = project_profile(p.values, 0.7);
      CHECK(pp.values == p.values);
    }
  }
  SUBCASE("zigzag matches the brute-force QP oracle") {
    const std::vector<double> raw{1, -1, 1, -1, 1};
    const ConvexProfile p = project_profile(raw, 1.0);
    const Eigen::VectorXd oracle = brute_force_projection(Eigen::Map<const Eigen::VectorXd>(raw.data(), 5));
    REQUIRE(oracle.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(p.values[i] == doctest::Approx(oracle(i)).epsilon(1e-12));
    // Frozen from the enumeration above.
    const double frozen[5] = {1.0, -1.0 / 3, -1.0 / 3, -1.0 / 3, 1.0};
    for (int i = 0; i < 5; ++i) CHECK(p.values[i] == doctest::Approx(frozen[i]).epsilon(1e-12));
  }
  SUBCASE("random small inputs agree with the oracle") {
    auto g = rng(11);
    for (int trial = 0; trial < 25; ++trial) {
      const int n = 4 + trial % 2;  // 5 or 6 nodes
      std::vector<double> raw(n);
      for (double& v : raw) v = uniform(g, -2.0, 2.0);
      const ConvexProfile p = project_profile(raw, 1.0);
      const Eigen::VectorXd oracle = brute_force_projection(Eigen::Map<const Eigen::VectorXd>(raw.data(), n));
      for (int i = 0; i < n; ++i) CHECK(p.values[i] == doctest::Approx(oracle(i)).epsilon(1e-9));
    }
  }
  SUBCASE("projection is nonexpansive towards feasible points") {
    auto g = rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 24;
      std::vector<double> raw(n + 1);
      for (double& v : raw) v = uniform(g, -1.5, 1.5);
      const ConvexProfile p = project_profile(raw, 1.0);
      CHECK(is_feasible(p, 1e-12));
      const ConvexProfile z = random_convex_profile(g, 1.0, n);
      double dp = 0, dr = 0, dist_p = 0, dist_z = 0;
      for (int i = 0; i <= n; ++i) {
        dp += (p.values[i] - z.values[i]) * (p.values[i] - z.values[i]);
        dr += (raw[i] - z.values[i]) * (raw[i] - z.values[i]);
        dist_p += (raw[i] - p.values[i]) * (raw[i] - p.values[i]);
        dist_z += (raw[i] - z.values[i]) * (raw[i] - z.values[i]);
      }
      CHECK(dp <= dr + 1e-12);
      CHECK(dist_p <= dist_z + 1e-12);
    }
  }
  SUBCASE("large grids stay feasible and closest") {
    auto g = rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 128 + 2 * (trial % 3);
      const ConvexProfile base = random_convex_profile(g, 0.8, n);
      std::vector<double> raw = base.values;
      for (double& v : raw) v += uniform(g, -0.05, 0.05) * (trial % 2 ? 1.0 : 20.0);
      const ConvexProfile p = project_profile(raw, 0.8);
      CHECK(is_feasible(p, 1e-12));
      double dp = 0, db = 0;
      for (int i = 0; i <= n; ++i) {
        dp += (raw[i] - p.values[i]) * (raw[i] - p.values[i]);
        db += (raw[i] - base.values[i]) * (raw[i] - base.values[i]);
      }
      CHECK(dp <= db + 1e-12);
    }
  }
  SUBCASE("too few nodes") {
    const std::vector<double> raw{1.0, 0.0};
    CHECK_THROWS_AS(project_profile(raw, 1.0), std::invalid_argument);
  }
}

TEST_CASE("subgraph_measure") {
  CHECK(subgraph_measure(ConvexProfile::constant(1.0, 8, 1.0)) == doctest::Approx(4.0));
  CHECK(subgraph_measure(ConvexProfile::constant(1.0, 8, -1.0)) == 0.0);
  ConvexProfile tent{1.0, {1.0, 0.5, 0.0, 0.5, 1.0}};
  CHECK(subgraph_measure(tent) == doctest::Approx(3.0).epsilon(1e-15));
  auto g = rng(5);
  for (int k = 0; k < 20; ++k) {
    const ConvexProfile h = random_convex_profile(g, 0.8, 12);
    const double m = subgraph_measure(h);
    CHECK(m >= 0.0);
    CHECK(m <= 4.0 * 0.8 + 1e-12);
  }
}

TEST_CASE("profile helpers") {
  const HalfProfile half{0.5, {1.0, 0.2, -0.3}};
  const ConvexProfile full = reflect(half);
  CHECK(full.values == std::vector<double>{1.0, 0.2, -0.3, 0.2, 1.0});
  CHECK(restrict_to_half(full).values == half.values);
  CHECK(full.at(0.25) == doctest::Approx(0.2));
  CHECK(full.at(0.375) == doctest::Approx(-0.05));
  CHECK(ConvexProfile::degenerate(1.0, 4).is_degenerate());
  CHECK(HalfProfile{1.0, {1.0, 0.5, 0.25}}.in_class());
  CHECK_FALSE(HalfProfile{1.0, {1.0, 0.5, 0.6}}.in_class());
}
