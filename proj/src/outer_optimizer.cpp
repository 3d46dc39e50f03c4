#include "vortex/outer_optimizer.hpp"

#include "vortex/errors.hpp"
#include "vortex/log.hpp"
#include "vortex/parametric_plateau.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace vortex {

namespace {

constexpr double pi = std::numbers::pi;

struct Evaluation {
  double value = 0.0;
  std::shared_ptr<const FittedMesh> mesh;
  std::vector<double> psi;
  FunctionalBreakdown breakdown;
};

// Inner solves on one grid. Every solve is seeded from the anchor (the field
// of the current incumbent), so results do not depend on rejected trials.
class Evaluator {
public:
  Evaluator(double l, int n1, int n2, const InnerSolverOptions& inner) : l_(l), n1_(n1), n2_(n2), inner_(inner) {}

  Evaluation full(const ConvexProfile& h) {
    auto mesh = build_fitted_mesh(h, n1_, n2_);
    try {
      const std::vector<double>* seed = anchor_.size() == mesh->vertex_count() ? &anchor_ : nullptr;
      InnerSolveResult r;
      try {
        r = solve_min_graph(mesh, inner_, seed);
      } catch (const InnerSolverError&) {
        // a seed from a very different profile can stall Newton on thin
        // columns; the harmonic start is the fallback
        if (!seed) throw;
        log::debug("inner solve from the anchor failed, retrying from the harmonic start");
        r = solve_min_graph(mesh, inner_, nullptr);
      }
      ++evaluations;
      iterations += r.iterations;
      Evaluation e;
      e.breakdown = eval_F2l(h, r.psi);
      e.value = e.breakdown.total;
      e.mesh = mesh;
      e.psi = std::move(r.psi.values);
      return e;
    } catch (InnerSolverError& err) {
      err.offending_profile = h.values;
      err.half_length = l_;
      throw;
    }
  }

  double value(const ConvexProfile& h) { return full(h).value; }
  void anchor(const std::vector<double>& psi) { anchor_ = psi; }

  int n1() const { return n1_; }
  int n2() const { return n2_; }

  int evaluations = 0;
  int iterations = 0;

private:
  double l_;
  int n1_, n2_;
  InnerSolverOptions inner_;
  std::vector<double> anchor_;
};

struct SearchResult {
  std::vector<double> x;
  double value = 0.0;
};

// Coordinate search: per coordinate, a three-point stencil fitted by a
// parabola whose minimizer is tried inside a trust radius.
SearchResult coordinate_search(Evaluator& ev, double l, std::vector<double> x, const OptimizerConfig& cfg) {
  const int m = static_cast<int>(x.size());
  auto profile = [&](const std::vector<double>& y) { return profile_from_reduced(y, l, ev.n1(), cfg.floor); };
  Evaluation cur = ev.full(profile(x));
  ev.anchor(cur.psi);
  std::vector<double> radius(m, cfg.trust_radius);
  const double d = cfg.fd_step;

  for (int pass = 0; pass < cfg.max_passes; ++pass) {
    const double start = cur.value;
    for (int k = 0; k < m; ++k) {
      const double xk = x[k];
      double t[3], f[3];
      std::vector<double> y = x;
      auto probe = [&](double tk) {
        y[k] = tk;
        return ev.value(profile(y));
      };
      if (xk >= d) {
        t[0] = xk - d, t[1] = xk, t[2] = xk + d;
        f[0] = probe(t[0]), f[1] = cur.value, f[2] = probe(t[2]);
      } else {
        t[0] = xk, t[1] = xk + d, t[2] = xk + 2 * d;
        f[0] = cur.value, f[1] = probe(t[1]), f[2] = probe(t[2]);
      }
      const double slope = (f[2] - f[0]) / (2 * d);
      const double curv = (f[2] - 2 * f[1] + f[0]) / (d * d);
      double target = curv > 0 ? t[1] - slope / curv : t[1] - std::copysign(radius[k], slope);
      target = std::clamp(target, std::max(0.0, xk - radius[k]), xk + radius[k]);

      int best = 0;
      for (int s = 1; s < 3; ++s)
        if (f[s] < f[best]) best = s;
      double best_t = t[best], best_f = f[best];
      bool model_won = false;
      if (std::abs(target - t[0]) > 1e-15 && std::abs(target - t[1]) > 1e-15 && std::abs(target - t[2]) > 1e-15) {
        const double ft = probe(target);
        if (ft < best_f) best_t = target, best_f = ft, model_won = true;
      }
      if (best_f < cur.value) {
        x[k] = best_t;
        cur = ev.full(profile(x));
        ev.anchor(cur.psi);
      }
      if (model_won && std::abs(best_t - xk) >= 0.99 * radius[k])
        radius[k] *= 2.0;
      else if (!model_won)
        radius[k] = std::max(0.5 * radius[k], 4 * d);
    }
    if (start - cur.value < cfg.stop_tol) break;
  }
  return {x, cur.value};
}

std::vector<double> neck_start(double l, int m) {
  const int n = 64;
  ConvexProfile h{l, std::vector<double>(n + 1)};
  const auto c = catenoid_parameter(2 * l);
  for (int i = 0; i <= n; ++i) {
    const double w = h.node(i);
    if (c) {
      h.values[i] = std::min(1.0, -1.0 + 2.0 * *c * std::cosh((w - l) / *c));
    } else {
      const double s = (w - l) / l;
      h.values[i] = 1.0 - 1.8 * (1.0 - s * s);
    }
  }
  return reduced_from_profile(h, m);
}

// Explicit start resampled onto the target columns.
ConvexProfile normalize_start(const ConvexProfile& p, double l, int n1, double floor) {
  ConvexProfile h{l, std::vector<double>(n1 + 1)};
  for (int i = 0; i <= n1; ++i) h.values[i] = p.at(p.span() * i / n1);
  if (!is_feasible(h, 1e-12)) h = project_profile(h.values, l);
  for (int i = 0; i <= n1; ++i) h.values[i] = std::max(h.values[std::min(i, n1 - i)], -1.0 + floor);
  h.values.front() = h.values.back() = 1.0;
  return h;
}

// Projected L-BFGS on the half-node values h_1..h_{n/2}, the ends pinned at 1.
// The column gradient of the area at fixed nodal values is the derivative of
// F_{2l}: only interior columns move and their Dirichlet data (zero on the
// graph and the bottom) does not depend on h. Ends when neither the
// quasi-Newton nor the plain gradient ladder finds a decrease, or when the
// value sits above pi and, at the pace of the last ten steps, could not get
// below it within the step budget: past the threshold the nondegenerate
// branch only creeps towards the clipped floor.
void polish(Evaluator& fine, double l, ConvexProfile& h, Evaluation& cur, const OptimizerConfig& cfg) {
  const int n1 = fine.n1(), K = n1 / 2;
  const double dw = 2.0 * l / n1;
  auto half_gradient = [&](const Evaluation& e) {
    const auto g = lift_area_top_gradient(*e.mesh, e.psi);
    Eigen::VectorXd gu(K);
    for (int i = 1; i <= K; ++i) gu(i - 1) = i < K ? g[i] + g[n1 - i] : g[K];
    return gu;
  };
  auto half_values = [&](const ConvexProfile& p) {
    Eigen::VectorXd u(K);
    for (int i = 1; i <= K; ++i) u(i - 1) = p.values[i];
    return u;
  };
  auto trial_profile = [&](const Eigen::VectorXd& du, double alpha) {
    std::vector<double> raw(n1 + 1, 1.0);
    for (int i = 1; i <= K; ++i) raw[i] = raw[n1 - i] = h.values[i] + alpha * du(i - 1);
    ConvexProfile t = project_profile(raw, l);
    for (int i = 0; i <= n1; ++i) t.values[i] = std::max(t.values[std::min(i, n1 - i)], -1.0 + cfg.floor);
    t.values.front() = t.values.back() = 1.0;
    return t;
  };
  auto ladder = [&](const Eigen::VectorXd& du, double alpha0) {
    for (double alpha = alpha0; alpha >= alpha0 * 1e-5; alpha *= 0.25) {
      ConvexProfile t = trial_profile(du, alpha);
      if (t.values == h.values) continue;
      Evaluation e = fine.full(t);
      if (e.value < cur.value - 1e-12) {
        h = std::move(t);
        cur = std::move(e);
        fine.anchor(cur.psi);
        return true;
      }
    }
    return false;
  };

  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;  // (s, y)
  fine.anchor(cur.psi);
  Eigen::VectorXd g = half_gradient(cur), u = half_values(h);
  std::deque<double> recent{cur.value};
  int it = 0;
  for (; it < cfg.polish_iters; ++it) {
    if (recent.size() > 11) recent.pop_front();
    if (cur.value > pi && recent.size() == 11 &&
        (recent.front() - cur.value) / 10.0 * (cfg.polish_iters - it) < cur.value - pi)
      break;
    bool moved = false;
    if (!memory.empty()) {
      // two-loop recursion
      Eigen::VectorXd q = g;
      std::vector<double> a(memory.size());
      for (int k = static_cast<int>(memory.size()) - 1; k >= 0; --k) {
        const auto& [sk, yk] = memory[k];
        a[k] = sk.dot(q) / yk.dot(sk);
        q -= a[k] * yk;
      }
      const auto& [sl, yl] = memory.back();
      q *= sl.dot(yl) / yl.dot(yl);
      for (std::size_t k = 0; k < memory.size(); ++k) {
        const auto& [sk, yk] = memory[k];
        q += sk * (a[k] - yk.dot(q) / yk.dot(sk));
      }
      if (q.dot(g) > 0.0) moved = ladder(-q, 1.0);
      if (!moved) memory.clear();
    }
    if (!moved) {
      // gradient in the L2 metric of the profile: node weight 2 dw (dw at the middle)
      Eigen::VectorXd d = -g / (2.0 * dw);
      d(K - 1) *= 2.0;
      moved = ladder(d, cfg.polish_step);
    }
    if (!moved) break;
    const Eigen::VectorXd g_new = half_gradient(cur), u_new = half_values(h);
    const Eigen::VectorXd sk = u_new - u, yk = g_new - g;
    if (sk.dot(yk) > 1e-14 * sk.norm() * yk.norm()) {
      memory.emplace_back(sk, yk);
      if (memory.size() > 8) memory.pop_front();
    }
    g = g_new;
    u = u_new;
    recent.push_back(cur.value);
    if (log::level() >= log::Level::Debug) {
      std::ostringstream msg;
      msg.precision(15);
      msg << "polish step " << it << ": " << cur.value;
      log::debug(msg.str());
    }
  }
  log::debug("polish: " + std::to_string(it) + " steps");
}

bool better(double fa, const std::vector<double>& a, double fb, const std::vector<double>& b) {
  if (fa != fb) return fa < fb;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

ConvexProfile profile_from_reduced(const std::vector<double>& x, double l, int n1, double floor) {
  if (x.empty()) throw std::invalid_argument("profile_from_reduced: no reduced variables");
  if (n1 < 2 || n1 % 2) throw std::invalid_argument("profile_from_reduced: n1 must be even and >= 2");
  const int m = static_cast<int>(x.size());
  std::vector<double> slope(m), knot(m + 1, 1.0);
  double tail = 0.0;
  for (int k = m - 1; k >= 0; --k) {
    tail += std::max(0.0, x[k]);
    slope[k] = -tail / l;
  }
  const double dt = l / m;
  for (int k = 0; k < m; ++k) knot[k + 1] = knot[k] + slope[k] * dt;
  ConvexProfile h{l, std::vector<double>(n1 + 1)};
  for (int i = 0; i <= n1 / 2; ++i) {
    const double w = 2.0 * l * i / n1;
    const int k = std::min(static_cast<int>(w / dt), m - 1);
    const double v = std::max(knot[k] + slope[k] * (w - k * dt), -1.0 + floor);
    h.values[i] = h.values[n1 - i] = v;
  }
  h.values.front() = h.values.back() = 1.0;
  return h;
}

std::vector<double> reduced_from_profile(const ConvexProfile& h, int m) {
  if (m < 1) throw std::invalid_argument("reduced_from_profile: m must be positive");
  const double l = h.half_length;
  std::vector<double> knot(m + 1);
  for (int k = 0; k <= m; ++k) knot[k] = h.at(l * k / m);
  knot[0] = 1.0;
  std::vector<double> s(m);  // -slope * l
  for (int k = 0; k < m; ++k) s[k] = -(knot[k + 1] - knot[k]) / (l / m) * l;
  std::vector<double> x(m);
  x[m - 1] = std::max(0.0, s[m - 1]);
  for (int k = m - 2; k >= 0; --k) x[k] = std::max(0.0, s[k] - s[k + 1]);
  return x;
}

double value_of_profile(double l, const ConvexProfile& h, int n1, int n2, const InnerSolverOptions& inner) {
  if (h.is_degenerate()) throw std::invalid_argument("value_of_profile: degenerate profile");
  Evaluator ev(l, n1, n2, inner);
  return ev.value(h);
}

SolveReport minimize_over_profiles(double l, int n1, int n2, const OptimizerConfig& cfg) {
  const auto t_begin = std::chrono::steady_clock::now();
  if (!(l > 0.0)) throw std::invalid_argument("minimize_over_profiles: l must be positive");
  if (n1 < 2 || n1 % 2) throw std::invalid_argument("minimize_over_profiles: n1 must be even and >= 2");
  if (n2 < 1) throw std::invalid_argument("minimize_over_profiles: n2 must be positive");
  if (cfg.jobs < 1) throw std::invalid_argument("minimize_over_profiles: jobs must be positive");
  if (cfg.reduced_dim < 1 || cfg.reduced_dim > 16)
    throw std::invalid_argument("minimize_over_profiles: reduced_dim must be in [1, 16]");

  std::vector<std::pair<int, int>> levels;
  for (int L : cfg.ladder)
    if (L + L % 2 < n1) levels.emplace_back(L + L % 2, std::min(L, n2));
  levels.emplace_back(n1, n2);

  std::vector<StartSummary> starts;
  for (const auto& name : cfg.starts) {
    if (name == "flat")
      starts.push_back({name, 0.0, std::vector<double>(cfg.reduced_dim, 0.0)});
    else if (name == "neck")
      starts.push_back({name, 0.0, neck_start(l, cfg.reduced_dim)});
    else
      throw std::invalid_argument("minimize_over_profiles: unknown start '" + name + "'");
  }
  for (std::size_t k = 0; k < cfg.initial_profiles.size(); ++k) {
    const ConvexProfile& p = cfg.initial_profiles[k];
    if (p.is_degenerate()) continue;
    starts.push_back({"initial" + std::to_string(k), 0.0, reduced_from_profile(p, cfg.reduced_dim)});
  }
  if (starts.empty() && cfg.initial_profiles.empty())
    throw std::invalid_argument("minimize_over_profiles: no starts");

  int evaluations = 0, iterations = 0;

  // Multistart on the first grid.
  std::vector<double> best_x;
  if (!starts.empty()) {
    const auto [c1, c2] = levels.front();
    auto run = [&, c1 = c1, c2 = c2](std::size_t s) {
      Evaluator ev(l, c1, c2, cfg.inner);
      SearchResult r = coordinate_search(ev, l, starts[s].x, cfg);
      return std::tuple{r, ev.evaluations, ev.iterations};
    };
    std::vector<std::tuple<SearchResult, int, int>> results;
    if (cfg.jobs > 1 && starts.size() > 1) {
      std::vector<std::future<std::tuple<SearchResult, int, int>>> futures;
      for (std::size_t s = 0; s < starts.size(); ++s) futures.push_back(std::async(std::launch::async, run, s));
      for (auto& f : futures) results.push_back(f.get());
    } else {
      for (std::size_t s = 0; s < starts.size(); ++s) results.push_back(run(s));
    }
    std::size_t best = 0;
    for (std::size_t s = 0; s < starts.size(); ++s) {
      const auto& [r, ne, ni] = results[s];
      evaluations += ne;
      iterations += ni;
      starts[s].x = r.x;
      starts[s].value = r.value;
      if (s > 0 && better(r.value, profile_from_reduced(r.x, l, c1, cfg.floor).values, std::get<0>(results[best]).value,
                          profile_from_reduced(std::get<0>(results[best]).x, l, c1, cfg.floor).values))
        best = s;
    }
    for (std::size_t s = 0; s < starts.size(); ++s)
      if (std::abs(starts[s].value - starts[best].value) > 1e-6) {
        std::ostringstream msg;
        msg << "l=" << l << ": start '" << starts[s].name << "' ended at " << starts[s].value << ", best '"
            << starts[best].name << "' at " << starts[best].value;
        log::info(msg.str());
      }
    best_x = starts[best].x;

    // Refine the winner on the intermediate grids.
    for (std::size_t lv = 1; lv + 1 < levels.size(); ++lv) {
      Evaluator ev(l, levels[lv].first, levels[lv].second, cfg.inner);
      best_x = coordinate_search(ev, l, best_x, cfg).x;
      evaluations += ev.evaluations;
      iterations += ev.iterations;
    }
  }

  // Target grid: incumbent among the search result and the explicit starts.
  Evaluator fine(l, n1, n2, cfg.inner);
  std::vector<ConvexProfile> candidates;
  if (!best_x.empty()) candidates.push_back(profile_from_reduced(best_x, l, n1, cfg.floor));
  for (const auto& p : cfg.initial_profiles)
    if (!p.is_degenerate()) candidates.push_back(normalize_start(p, l, n1, cfg.floor));
  ConvexProfile h;
  Evaluation cur;
  bool have = false;
  for (const auto& c : candidates) {
    Evaluation e = fine.full(c);
    if (!have || better(e.value, c.values, cur.value, h.values)) {
      h = c;
      cur = std::move(e);
      have = true;
    }
  }

  SolveReport report;
  report.l = l;
  report.n1 = n1;
  report.n2 = n2;
  report.starts = starts;
  if (have) {
    polish(fine, l, h, cur, cfg);
    report.nondegenerate_value = cur.value;
    report.nondegenerate_profile = h;
    report.breakdown = cur.breakdown;
  } else {
    report.nondegenerate_value = std::numeric_limits<double>::infinity();
    report.nondegenerate_profile = ConvexProfile::degenerate(l, n1);
  }
  evaluations += fine.evaluations;
  iterations += fine.iterations;

  report.degenerate = !(report.nondegenerate_value < pi - cfg.degenerate_margin);
  if (report.degenerate) {
    report.value = pi;
    report.best_profile = ConvexProfile::degenerate(l, n1);
  } else {
    report.value = cur.value;
    report.best_profile = h;
    report.best_psi = GridFunction{cur.mesh, cur.psi};
  }
  report.inner_iterations = iterations;
  report.outer_evaluations = evaluations;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return report;
}

}  // namespace vortex
