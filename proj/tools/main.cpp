// Command line front end: solve, sweep, threshold, vortex, plateau, crosscheck.

#include "vortex/analysis.hpp"
#include "vortex/errors.hpp"
#include "vortex/io.hpp"
#include "vortex/log.hpp"
#include "vortex/outer_optimizer.hpp"
#include "vortex/parametric_plateau.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

namespace {

using namespace vortex;

struct Common {
  std::string config;
  std::optional<int> jobs;
  int n1 = 64, n2 = 64;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool grid = true) {
  cmd->add_option("--config", c.config, "JSON optimizer config; flags override it")->check(CLI::ExistingFile);
  cmd->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "output file");
  if (grid) {
    cmd->add_option("--n1", c.n1, "intervals along w1 (even)")->check(CLI::PositiveNumber);
    cmd->add_option("--n2", c.n2, "intervals along w2")->check(CLI::PositiveNumber);
  }
}

OptimizerConfig make_config(const Common& c) {
  OptimizerConfig cfg;
  if (!c.config.empty()) cfg = io::load_config(c.config, cfg);
  if (c.jobs) cfg.jobs = *c.jobs;
  return cfg;
}

void write_json(const std::string& path, const io::json& j) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << '\n';
}

std::string fmt(double x, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relaxed area of the vortex map: nonparametric and parametric minimal surface solvers"};
  app.require_subcommand(1);

  Common c;
  double l = 0.0, l_min = 0.0, l_max = 0.0, tol = 0.01, lo = 0.5, hi = 4.0, d = 0.0;
  int steps = 10, refine = 0, triangles = 10000;
  bool no_timing = false;
  std::string obj, curve = "gamma";

  auto* solve = app.add_subcommand("solve", "minimize F_2l over convex symmetric profiles");
  solve->add_option("--l", l, "half length")->required()->check(CLI::PositiveNumber);
  solve->add_option("--obj", obj, "OBJ file of the graph surface");
  add_common(solve, c);

  auto* sweep_cmd = app.add_subcommand("sweep", "solve on a range of half lengths, CSV output");
  sweep_cmd->add_option("--lmin", l_min, "first half length")->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--lmax", l_max, "last half length")->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--steps", steps, "number of points")->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--no-timing", no_timing, "write 0 in the seconds column");
  add_common(sweep_cmd, c);

  auto* thr = app.add_subcommand("threshold", "bisect the half length where the degenerate value wins");
  thr->add_option("--tol", tol, "interval width")->check(CLI::PositiveNumber);
  thr->add_option("--lo", lo, "nondegenerate lower end")->check(CLI::PositiveNumber);
  thr->add_option("--hi", hi, "degenerate upper end")->check(CLI::PositiveNumber);
  add_common(thr, c);

  auto* vort = app.add_subcommand("vortex", "relaxed area of the vortex map");
  vort->add_option("--l", l, "half length")->required()->check(CLI::PositiveNumber);
  add_common(vort, c);

  auto* plat = app.add_subcommand("plateau", "parametric Plateau solve");
  plat->add_option("--curve", curve, "gamma, circle or pair")->check(CLI::IsMember({"gamma", "circle", "pair"}));
  plat->add_option("--l", l, "half length of the segment (gamma)")->check(CLI::PositiveNumber);
  plat->add_option("--d", d, "separation of the circles (pair)")->check(CLI::PositiveNumber);
  plat->add_option("--refine", refine, "boundary intervals per circle")->check(CLI::Range(8, 4096));
  plat->add_option("--obj", obj, "OBJ file of the surface");
  add_common(plat, c, false);

  auto* cross = app.add_subcommand("crosscheck", "half Plateau area of Gamma against min F_2l");
  cross->add_option("--l", l, "half length")->required()->check(CLI::PositiveNumber);
  cross->add_option("--triangles", triangles, "target size of the disc mesh")->check(CLI::PositiveNumber);
  add_common(cross, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  OptimizerConfig cfg;
  try {
    cfg = make_config(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  const GridSize grid{c.n1, c.n2};

  try {
    if (*solve) {
      const SolveReport rep = minimize_over_profiles(l, c.n1, c.n2, cfg);
      write_json(c.out, io::to_json(rep));
      if (!obj.empty()) {
        if (!rep.best_psi) throw std::runtime_error("degenerate solution has no graph surface to export");
        std::ofstream f(obj);
        io::write_graph_obj(f, *rep.best_psi);
      }
      std::cout << "solve l=" << fmt(l) << " value=" << fmt(rep.value) << " degenerate=" << std::boolalpha
                << rep.degenerate << " gap_to_pi=" << fmt(std::numbers::pi - rep.value) << '\n';
    } else if (*sweep_cmd) {
      SweepOptions opt{grid, cfg, !no_timing};
      std::ofstream f;
      if (!c.out.empty()) {
        f.open(c.out);
        if (!f) throw std::runtime_error("cannot write " + c.out);
        io::write_sweep_header(f);
      }
      const SweepResult res = sweep(l_min, l_max, steps, opt, [&](const SweepRecord& r) {
        if (f.is_open()) io::write_sweep_row(f, r);
      });
      int degenerate = 0;
      for (const auto& r : res.records) degenerate += r.degenerate;
      std::cout << "sweep points=" << res.records.size() << " degenerate=" << degenerate;
      if (res.failure) {
        std::cout << " failed at " << *res.failure << '\n';
        return 2;
      }
      std::cout << '\n';
    } else if (*thr) {
      const ThresholdResult r = threshold_bisect(lo, hi, tol, grid, cfg);
      write_json(c.out, io::to_json(r));
      std::cout << "threshold interval=[" << fmt(r.lo) << ", " << fmt(r.hi) << "] midpoint=" << fmt(r.midpoint())
                << " solves=" << r.solves << '\n';
    } else if (*vort) {
      const VortexArea v = vortex_relaxed_area(l, grid, cfg);
      write_json(c.out, io::to_json(v));
      std::cout << "vortex l=" << fmt(l) << " ac_part=" << fmt(v.ac_part) << " singular_part=" << fmt(v.singular_part)
                << " total=" << fmt(v.total) << '\n';
    } else if (*plat) {
      SpaceCurve sc;
      if (curve == "gamma") {
        if (!(l > 0.0)) throw CLI::ValidationError("--l", "gamma needs --l");
        if (refine == 0) refine = gamma_refine_for(l, triangles);
        sc = build_gamma(l, refine);
      } else if (curve == "pair") {
        if (!(d > 0.0)) throw CLI::ValidationError("--d", "pair needs --d");
        if (refine == 0) refine = 96;
        sc = build_circle_pair(d, refine);
      } else {
        if (refine == 0) refine = 96;
        sc = build_circle(refine);
      }
      const PlateauResult r = solve_plateau(sc, refine);
      write_json(c.out, io::to_json(r));
      if (!obj.empty()) {
        std::ofstream f(obj);
        write_obj(f, r.mesh);
      }
      std::cout << "plateau curve=" << curve << " area=" << fmt(r.area) << " value=" << fmt(r.value())
                << " degenerate=" << std::boolalpha << r.degenerate << " triangles=" << r.mesh.triangles.size()
                << '\n';
    } else if (*cross) {
      CrossCheckOptions opt;
      opt.triangles = triangles;
      opt.n1 = c.n1;
      opt.n2 = c.n2;
      opt.optimizer = cfg;
      const CrossCheck r = compare_with_nonparametric(l, opt);
      write_json(c.out, io::to_json(r));
      std::cout << "crosscheck l=" << fmt(l) << " half_area=" << fmt(r.half_area_parametric)
                << " min_F2l=" << fmt(r.min_F2l) << " rel_gap=" << fmt(r.rel_gap, 4) << '\n';
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
