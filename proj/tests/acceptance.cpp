// End-to-end acceptance run: one PASS/FAIL line per criterion.

#include "test_support.hpp"

#include "vortex/analysis.hpp"
#include "vortex/convexify.hpp"
#include "vortex/errors.hpp"
#include "vortex/functional.hpp"
#include "vortex/inner_solver.hpp"
#include "vortex/outer_optimizer.hpp"
#include "vortex/parametric_plateau.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

using namespace vortex;
using namespace vortex::testing;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double semicircle(double y) { return std::sqrt(std::max(0.0, 1.0 - y * y)); }

// exact area under a piecewise-linear profile shifted to the bottom edge
double subgraph_area(const ConvexProfile& h) {
  const double dx = 2 * h.half_length / (h.values.size() - 1);
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < h.values.size(); ++i) a += 0.5 * dx * (h.values[i] + h.values[i + 1] + 2.0);
  return a;
}

// solves at 128 x 128, shared by several criteria
const std::vector<double> fine_ls{0.1, 0.25, 0.5, 1.0, 2.0, 4.0};
std::map<double, SolveReport> fine;

void solve_fine() {
  for (double l : fine_ls) {
    fine[l] = minimize_over_profiles(l, 128, 128);
    std::fprintf(stderr, "  solved l=%g at 128x128: value %.8f degenerate %d (%.1f s)\n", l, fine[l].value,
                 fine[l].degenerate, fine[l].seconds);
  }
}

Outcome exact_baselines() {
  Outcome o;
  const double deg = eval_F2l(ConvexProfile::degenerate(0.5, 8), GridFunction{}).total;
  o.require(std::abs(deg - pi) <= 1e-12, "degenerate value");
  double worst_cyl = 0.0;
  for (double l : {0.25, 0.5, 1.0}) {
    const ConvexProfile h = ConvexProfile::constant(l, 2, 1.0);
    const auto mesh = build_fitted_mesh(h, 256, 256);
    GridFunction psi = GridFunction::zeros(mesh);
    for (std::size_t v = 0; v < mesh->vertex_count(); ++v) psi.values[v] = semicircle(mesh->vertices[v].y());
    worst_cyl = std::max(worst_cyl, std::abs(eval_F2l(h, psi).total - 2 * pi * l));
  }
  o.require(worst_cyl <= 1e-4, "cylinder value");
  double worst_sg = 0.0;
  auto g = rng(101);
  std::vector<ConvexProfile> profiles{ConvexProfile::constant(0.7, 16, 0.3), random_convex_profile(g, 0.4, 24),
                                      random_convex_profile(g, 1.3, 32, -0.99)};
  for (const auto& h : profiles) {
    const auto mesh = build_fitted_mesh(h, static_cast<int>(h.values.size()) - 1, 20);
    worst_sg = std::max(worst_sg, std::abs(eval_F2l(h, GridFunction::zeros(mesh)).total - (subgraph_area(h) + pi)));
  }
  o.require(worst_sg <= 1e-4, "zero field value");
  o.detail << "|F(-1,0) - pi| = " << std::abs(deg - pi) << ", max |F(1,phi) - 2 pi l| = " << worst_cyl
           << ", max |F(h,0) - |SG_h| - pi| = " << worst_sg;
  return o;
}

Outcome upper_bound_law() {
  Outcome o;
  o.detail << "value - min(2 pi l, pi):";
  for (double l : fine_ls) {
    const double excess = fine[l].value - std::min(2 * pi * l, pi);
    o.require(excess <= 1e-3, "bound at l=" + std::to_string(l));
    o.detail << " l=" << l << ": " << excess << ";";
  }
  return o;
}

Outcome small_l_nondegeneracy() {
  Outcome o;
  for (double l : fine_ls) {
    if (l > 0.5) continue;
    o.require(!fine[l].degenerate, "degenerate at l=" + std::to_string(l));
    o.require(fine[l].value <= 2 * pi * l + 1e-3, "above 2 pi l at l=" + std::to_string(l));
    o.detail << " l=" << l << ": value " << fine[l].value << " vs 2 pi l " << 2 * pi * l << ";";
  }
  return o;
}

Outcome threshold() {
  Outcome o;
  OptimizerConfig coarse;
  coarse.ladder = {16};
  const ThresholdResult a = threshold_bisect(0.5, 4.0, 0.02, {32, 32}, coarse);
  const ThresholdResult b = threshold_bisect(0.5, 4.0, 0.02, {64, 64});
  o.require(a.width() <= 0.02 && b.width() <= 0.02, "interval width");
  o.require(a.lo > 0.5 && b.lo > 0.5, "lower endpoint above 1/2");
  const double shift = std::abs(a.midpoint() - b.midpoint());
  o.require(shift < 0.02, "midpoint shift");
  o.detail << "32x32: [" << a.lo << ", " << a.hi << "], 64x64: [" << b.lo << ", " << b.hi << "], shift " << shift;
  return o;
}

Outcome inner_solver() {
  Outcome o;
  auto g = rng(55);
  // affine data
  const auto mesh = build_fitted_mesh(random_convex_profile(g, 0.8, 16), 16, 12);
  std::vector<double> affine(mesh->vertex_count()), start(mesh->vertex_count());
  for (std::size_t v = 0; v < affine.size(); ++v)
    affine[v] = 0.3 - 0.7 * mesh->vertices[v].x() + 1.2 * mesh->vertices[v].y();
  for (double& v : start) v = uniform(g, -1.0, 1.0);
  const auto ra = solve_min_graph(mesh, affine, {}, &start);
  double affine_err = 0.0;
  for (std::size_t v = 0; v < affine.size(); ++v) affine_err = std::max(affine_err, std::abs(ra.psi.values[v] - affine[v]));
  o.require(affine_err <= 1e-10, "affine");
  // one interior node
  const auto tiny = build_fitted_mesh(ConvexProfile::constant(0.6, 2, 0.4), 2, 2);
  const auto data = standard_boundary_values(*tiny);
  const int centre = tiny->vertex(1, 1);
  const auto rs = solve_min_graph(tiny, data, {1e-13, 200});
  const double oracle = golden_section(
      [&](double t) {
        std::vector<double> psi = data;
        psi[centre] = t;
        return lift_area(*tiny, psi);
      },
      -2.0, 2.0);
  const double single_err = std::abs(rs.psi.values[centre] - oracle);
  o.require(single_err <= 1e-8, "single node");
  // residual and uniqueness
  const InnerSolverOptions opts;
  const auto ref = build_fitted_mesh(random_convex_profile(g, 0.5, 32), 32, 32);
  const auto r1 = solve_min_graph(ref, opts);
  const double res = residual_msq(*ref, r1.psi.values);
  o.require(res <= 10 * opts.tol, "residual");
  std::vector<double> other(ref->vertex_count());
  for (double& v : other) v = uniform(g, -2.0, 2.0);
  // both starts solved well below the default tolerance, so that the field
  // difference measures uniqueness and not the stopping rule
  const InnerSolverOptions tight{1e-12, 200};
  const auto r1t = solve_min_graph(ref, tight);
  const auto r2 = solve_min_graph(ref, tight, &other);
  double diff = 0.0;
  for (std::size_t v = 0; v < other.size(); ++v) diff = std::max(diff, std::abs(r1t.psi.values[v] - r2.psi.values[v]));
  o.require(diff <= 1e-8, "uniqueness");
  o.detail << "affine " << affine_err << ", single node " << single_err << ", residual " << res << ", two starts "
           << diff;
  return o;
}

Outcome minimizer_invariants() {
  Outcome o;
  for (double l : {0.25, 0.5}) {
    const SolveReport& r = fine[l];
    if (!r.best_psi) {
      o.require(false, "no field at l=" + std::to_string(l));
      continue;
    }
    const GridFunction& psi = *r.best_psi;
    const FittedMesh& m = *psi.mesh;
    bool sym = m.mirror_symmetric, positive = true, below = true, boundary = true;
    double min_interior = 1e9, max_excess = -1e9;
    for (std::size_t v = 0; v < m.vertex_count(); ++v) {
      const double val = psi.values[v];
      sym = sym && val == psi.values[m.mirror(static_cast<int>(v))];
      const double y = m.vertices[v].y();
      max_excess = std::max(max_excess, val - semicircle(y));
      below = below && val <= semicircle(y) + 1e-6;
      switch (m.tags[v]) {
        case NodeTag::Interior:
          positive = positive && val > 0.0;
          min_interior = std::min(min_interior, val);
          break;
        case NodeTag::LateralLeft:
        case NodeTag::LateralRight:
          boundary = boundary && val == semicircle(y);
          break;
        case NodeTag::Bottom:
        case NodeTag::Graph:
          boundary = boundary && val == 0.0;
          break;
        default:
          break;
      }
    }
    const std::string at = " at l=" + std::to_string(l);
    o.require(sym, "symmetry" + at);
    o.require(positive, "positivity" + at);
    o.require(below, "psi <= phi" + at);
    o.require(boundary, "boundary data" + at);
    o.detail << " l=" << l << ": min interior psi " << min_interior << ", max psi - phi " << max_excess << ";";
  }
  return o;
}

Outcome convexification() {
  Outcome o;
  auto g = rng(77);
  double worst = -1e9;
  int pairs = 0;
  for (; pairs < 200; ++pairs) {
    const double l = uniform(g, 0.2, 1.2);
    const int n = 10;
    HalfProfile h{l, std::vector<double>(n + 1, 1.0)};
    for (int i = 1; i <= n; ++i) h.values[i] = h.values[i - 1] - uniform(g, 0.0, 1.8 / n);
    const GridFunction psi = solve_min_graph(build_half_mesh(h, 12)).psi;
    const double before = eval_Fl(h, psi).total;
    const double slack = 5.0 * psi.mesh->mesh_size();
    const int t0 = 1 + static_cast<int>(g() % (n - 1));
    const auto tr = truncate_profile(h, psi, t0);
    const int t1 = static_cast<int>(g() % (n - 1));
    const int t2 = t1 + 2 + static_cast<int>(g() % (n - t1 - 1));
    const auto ch = chord_cut(h, psi, t1, t2);
    const double inc = std::max(eval_Fl(tr.first, tr.second).total, eval_Fl(ch.first, ch.second).total) - before;
    worst = std::max(worst, inc / slack);
    o.require(inc <= slack, "increase beyond slack");
  }
  double doubling = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double l = uniform(g, 0.2, 1.2);
    const int n = 6 + k % 5;
    HalfProfile h{l, std::vector<double>(n + 1)};
    for (double& v : h.values) v = uniform(g, -0.9, 1.0);
    h.values[0] = 1.0;
    const auto mesh = build_half_mesh(h, 7);
    GridFunction psi = GridFunction::zeros(mesh);
    for (double& v : psi.values) v = uniform(g, -0.5, 1.5);
    doubling = std::max(doubling, check_doubling(h, psi));
  }
  o.require(doubling <= 1e-12, "doubling");
  o.detail << pairs << " pairs, worst increase / slack " << worst << "; doubling defect " << doubling
           << " over 100 pairs";
  return o;
}

Outcome cross_solver() {
  Outcome o;
  for (double l : {0.25, 0.5}) {
    const CrossCheck c = compare_with_nonparametric(l);
    o.require(c.rel_gap <= 0.02, "gap at l=" + std::to_string(l));
    o.require(!c.parametric_degenerate && !c.nonparametric_degenerate, "degenerate at l=" + std::to_string(l));
    o.detail << " l=" << l << ": half area " << c.half_area_parametric << ", min F " << c.min_F2l << ", rel gap "
             << c.rel_gap << ";";
  }
  return o;
}

Outcome parametric_oracles() {
  Outcome o;
  const double disc = solve_plateau(build_circle(160), 160).area;
  o.require(std::abs(disc - pi) <= 1e-3, "flat disc");
  o.detail << "disc " << disc << ";";
  for (double d : {0.3, 0.5, 0.8}) {
    const PlateauResult r = solve_plateau(build_circle_pair(d, 96), 96);
    // independent oracle: c from bisection on c cosh(d / 2c) = 1 (stable branch), area by quadrature
    double lo = 0.0, hi = 1.0;
    const double c_turn = golden_section([](double c) { return -2 * c * std::acosh(1 / c); }, 0.05, 0.99);
    lo = c_turn;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      (mid * std::cosh(d / (2 * mid)) > 1.0 ? hi : lo) = mid;
    }
    const double c = 0.5 * (lo + hi);
    const double oracle = adaptive_simpson(
        [c](double x) { return 2 * pi * c * std::cosh(x / c) * std::cosh(x / c); }, -d / 2, d / 2, 1e-12);
    const double rel = std::abs(r.area - oracle) / oracle;
    o.require(!r.degenerate && rel <= 0.01, "catenoid d=" + std::to_string(d));
    o.detail << " d=" << d << ": rel err " << rel << ";";
  }
  const PlateauResult far = solve_plateau(build_circle_pair(1.3, 96), 96);
  o.require(far.degenerate, "two discs at d=1.3");
  o.detail << " d=1.3: " << (far.degenerate ? "two discs" : "connected");
  return o;
}

Outcome vortex_assembly() {
  Outcome o;
  const double quad = 2 * pi * adaptive_simpson([](double r) { return std::sqrt(1 + r * r); }, 0.0, 1.0, 1e-14);
  const double ac = vortex_ac_part(1.0);
  o.require(std::abs(ac - quad) <= 1e-10, "ac part");
  o.detail << "ac_part(1) = " << std::setprecision(12) << ac << " vs quadrature " << quad << ";"
           << std::setprecision(6);
  OptimizerConfig coarse;
  coarse.ladder = {16};
  for (double l : fine_ls) {
    const VortexArea v = vortex_relaxed_area(l, {32, 32}, coarse);
    o.require(v.total <= v.ac_part + pi, "total bound at l=" + std::to_string(l));
  }
  o.detail << " total <= ac_part + pi at " << fine_ls.size() << " lengths";
  return o;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact baselines", exact_baselines},
      {"upper-bound law", upper_bound_law},
      {"small-l nondegeneracy", small_l_nondegeneracy},
      {"threshold", threshold},
      {"inner solver", inner_solver},
      {"minimizer invariants", minimizer_invariants},
      {"convexification", convexification},
      {"cross-solver", cross_solver},
      {"parametric oracles", parametric_oracles},
      {"vortex assembly", vortex_assembly},
  };
  solve_fine();
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double s = std::chrono::duration<double>(clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s %2zu %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), s,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
