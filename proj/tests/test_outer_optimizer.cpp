#include "doctest.h"
#include "test_support.hpp"

#include "vortex/errors.hpp"
#include "vortex/functional.hpp"
#include "vortex/outer_optimizer.hpp"

#include <algorithm>
#include <numbers>

using namespace vortex;
using namespace vortex::testing;

namespace {

constexpr double pi = std::numbers::pi;

OptimizerConfig small_config() {
  OptimizerConfig cfg;
  cfg.ladder = {16};
  return cfg;
}

}  // namespace

TEST_CASE("reduced variables give convex symmetric profiles") {
  auto g = rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + trial % 12;
    std::vector<double> x(m);
    for (double& v : x) v = uniform(g, 0.0, 3.0);
    const double l = uniform(g, 0.1, 3.0);
    const ConvexProfile h = profile_from_reduced(x, l, 32, 1e-4);
    REQUIRE(h.values.size() == 33);
    CHECK(h.values.front() == 1.0);
    CHECK(h.values.back() == 1.0);
    CHECK(symmetry_defect(h.values) == 0.0);
    CHECK(min_second_difference(h.values) >= -1e-12);
    CHECK(*std::min_element(h.values.begin(), h.values.end()) >= -1.0 + 1e-4 - 1e-15);
  }
}

TEST_CASE("reduced variables round trip") {
  auto g = rng(6);
  const int m = 8;
  std::vector<double> x(m);
  for (double& v : x) v = uniform(g, 0.0, 0.3);
  const ConvexProfile h = profile_from_reduced(x, 0.5, 2 * m, 1e-4);
  REQUIRE(*std::min_element(h.values.begin(), h.values.end()) > -1.0 + 1e-4);
  const auto back = reduced_from_profile(h, m);
  REQUIRE(back.size() == x.size());
  for (int k = 0; k < m; ++k) CHECK(back[k] == doctest::Approx(x[k]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("value of a profile") {
  // the half cylinder over the full rectangle has area 2 pi l; 32 columns are too few for l = 0.1
  CHECK(value_of_profile(0.1, ConvexProfile::constant(0.1, 64, 1.0), 64, 64) < 2 * pi * 0.1 + 1e-3);
  CHECK(value_of_profile(0.1, ConvexProfile::constant(0.1, 32, 1.0), 32, 32) < pi);
  CHECK(value_of_profile(1.0, ConvexProfile::constant(1.0, 32, 1.0), 32, 32) < 2 * pi + 1e-3);
  CHECK_THROWS_AS(value_of_profile(0.5, ConvexProfile::degenerate(0.5, 8), 32, 32), std::invalid_argument);
}

TEST_CASE("mirror image has the same value") {
  auto g = rng(7);
  const ConvexProfile h = random_convex_profile(g, 0.4, 32, -0.6);
  ConvexProfile flipped = h;
  std::reverse(flipped.values.begin(), flipped.values.end());
  CHECK(value_of_profile(0.4, flipped, 32, 24) == doctest::Approx(value_of_profile(0.4, h, 32, 24)).epsilon(1e-12));
}

TEST_CASE("inner failure carries the profile") {
  InnerSolverOptions inner;
  inner.tol = 1e-30;
  inner.max_iter = 1;
  const ConvexProfile h = ConvexProfile::constant(0.3, 16, 0.5);
  try {
    value_of_profile(0.3, h, 16, 16, inner);
    FAIL("expected an inner failure");
  } catch (const InnerSolverError& e) {
    CHECK(e.offending_profile == h.values);
    CHECK(e.half_length == 0.3);
  }
}

TEST_CASE("short gap stays nondegenerate") {
  const SolveReport r = minimize_over_profiles(0.25, 32, 32, small_config());
  CHECK_FALSE(r.degenerate);
  CHECK(r.value <= pi / 2 + 1e-3);
  CHECK(r.value == doctest::Approx(r.breakdown.total).epsilon(1e-12));
  REQUIRE(r.best_psi.has_value());
  CHECK(r.best_profile.values == r.nondegenerate_profile.values);
  CHECK(symmetry_defect(r.best_profile.values) == 0.0);
  CHECK(min_second_difference(r.best_profile.values) >= -1e-12);
  // the reported value is reproduced by evaluating the reported pair
  CHECK(eval_F2l(r.best_profile, *r.best_psi).total == doctest::Approx(r.value).epsilon(1e-12));
  CHECK(r.starts.size() == 2);
}

TEST_CASE("long gap is degenerate") {
  const SolveReport r = minimize_over_profiles(3.0, 32, 32, small_config());
  CHECK(r.degenerate);
  CHECK(r.value == pi);
  CHECK(r.best_profile.is_degenerate());
  CHECK_FALSE(r.best_psi.has_value());
  CHECK(r.nondegenerate_value >= pi - 1e-6);
}

TEST_CASE("restarting from the optimum is a fixed point") {
  const SolveReport first = minimize_over_profiles(0.25, 32, 32, small_config());
  OptimizerConfig cfg = small_config();
  cfg.starts = {};
  cfg.initial_profiles = {first.nondegenerate_profile};
  const SolveReport again = minimize_over_profiles(0.25, 32, 32, cfg);
  CHECK(std::abs(again.value - first.value) <= 1e-10);
}

TEST_CASE("parallel starts match the serial run") {
  OptimizerConfig cfg = small_config();
  const SolveReport serial = minimize_over_profiles(0.4, 32, 32, cfg);
  cfg.jobs = 4;
  const SolveReport parallel = minimize_over_profiles(0.4, 32, 32, cfg);
  CHECK(parallel.value == serial.value);
  CHECK(parallel.best_profile.values == serial.best_profile.values);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(minimize_over_profiles(0.0, 32, 32), std::invalid_argument);
  CHECK_THROWS_AS(minimize_over_profiles(0.5, 31, 32), std::invalid_argument);
  OptimizerConfig cfg;
  cfg.starts = {"bogus"};
  CHECK_THROWS_AS(minimize_over_profiles(0.5, 32, 32, cfg), std::invalid_argument);
}
