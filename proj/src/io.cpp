#include "vortex/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace vortex::io {

OptimizerConfig config_from_json(const json& j, OptimizerConfig cfg) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "starts") cfg.starts = v.get<std::vector<std::string>>();
    else if (key == "reduced_dim") cfg.reduced_dim = v.get<int>();
    else if (key == "stop_tol") cfg.stop_tol = v.get<double>();
    else if (key == "fd_step") cfg.fd_step = v.get<double>();
    else if (key == "trust_radius") cfg.trust_radius = v.get<double>();
    else if (key == "max_passes") cfg.max_passes = v.get<int>();
    else if (key == "ladder") cfg.ladder = v.get<std::vector<int>>();
    else if (key == "floor") cfg.floor = v.get<double>();
    else if (key == "polish_iters") cfg.polish_iters = v.get<int>();
    else if (key == "polish_step") cfg.polish_step = v.get<double>();
    else if (key == "degenerate_margin") cfg.degenerate_margin = v.get<double>();
    else if (key == "jobs") cfg.jobs = v.get<int>();
    else if (key == "inner_tol") cfg.inner.tol = v.get<double>();
    else if (key == "inner_max_iter") cfg.inner.max_iter = v.get<int>();
    else if (key == "initial_profiles") {
      cfg.initial_profiles.clear();
      for (const auto& p : v) {
        ConvexProfile h;
        h.half_length = p.at("half_length").get<double>();
        h.values = p.at("values").get<std::vector<double>>();
        cfg.initial_profiles.push_back(std::move(h));
      }
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

json config_to_json(const OptimizerConfig& cfg) {
  json profiles = json::array();
  for (const auto& h : cfg.initial_profiles) profiles.push_back(to_json(h));
  return {{"starts", cfg.starts},
          {"initial_profiles", profiles},
          {"reduced_dim", cfg.reduced_dim},
          {"stop_tol", cfg.stop_tol},
          {"fd_step", cfg.fd_step},
          {"trust_radius", cfg.trust_radius},
          {"max_passes", cfg.max_passes},
          {"ladder", cfg.ladder},
          {"floor", cfg.floor},
          {"polish_iters", cfg.polish_iters},
          {"polish_step", cfg.polish_step},
          {"degenerate_margin", cfg.degenerate_margin},
          {"jobs", cfg.jobs},
          {"inner_tol", cfg.inner.tol},
          {"inner_max_iter", cfg.inner.max_iter}};
}

OptimizerConfig load_config(const std::string& path, OptimizerConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + std::string(e.what()));
  }
  return config_from_json(j, std::move(base));
}

json to_json(const ConvexProfile& h) { return {{"half_length", h.half_length}, {"values", h.values}}; }

json to_json(const FunctionalBreakdown& b) {
  return {{"area_term", b.area_term},
          {"dirichlet_mismatch", b.dirichlet_mismatch},
          {"graph_trace", b.graph_trace},
          {"lh_term", b.lh_term},
          {"total", b.total}};
}

json to_json(const SolveReport& r, bool timing) {
  json starts = json::array();
  for (const auto& s : r.starts) starts.push_back({{"name", s.name}, {"value", s.value}, {"x", s.x}});
  json j = {{"l", r.l},
            {"n1", r.n1},
            {"n2", r.n2},
            {"value", r.value},
            {"degenerate", r.degenerate},
            {"gap_to_pi", 3.14159265358979323846 - r.value},
            {"profile", to_json(r.best_profile)},
            {"breakdown", to_json(r.breakdown)},
            {"nondegenerate_value", r.nondegenerate_value},
            {"nondegenerate_profile", to_json(r.nondegenerate_profile)},
            {"inner_iterations", r.inner_iterations},
            {"outer_evaluations", r.outer_evaluations},
            {"starts", starts}};
  if (timing) j["seconds"] = r.seconds;
  return j;
}

json to_json(const ThresholdResult& r) {
  return {{"lo", r.lo}, {"hi", r.hi}, {"midpoint", r.midpoint()}, {"width", r.width()}, {"solves", r.solves}};
}

json to_json(const VortexArea& v) {
  return {{"l", v.l},
          {"ac_part", v.ac_part},
          {"singular_part", v.singular_part},
          {"total", v.total},
          {"degenerate", v.degenerate}};
}

json to_json(const CrossCheck& c) {
  return {{"l", c.l},
          {"half_area_parametric", c.half_area_parametric},
          {"min_F2l", c.min_F2l},
          {"abs_gap", c.abs_gap},
          {"rel_gap", c.rel_gap},
          {"parametric_degenerate", c.parametric_degenerate},
          {"nonparametric_degenerate", c.nonparametric_degenerate}};
}

json to_json(const PlateauResult& r) {
  return {{"area", r.area},
          {"competitor_area", r.competitor_area},
          {"value", r.value()},
          {"degenerate", r.degenerate},
          {"pinched", r.pinched},
          {"iterations", r.iterations},
          {"triangles", r.mesh.triangles.size()},
          {"min_quality", r.mesh.min_quality()}};
}

void write_sweep_header(std::ostream& out) { out << "l,value,degenerate,gap_to_pi,n1,n2,seconds\n"; }

void write_sweep_row(std::ostream& out, const SweepRecord& rec) {
  const auto old = out.precision(17);
  out << rec.l << ',' << rec.value << ',' << (rec.degenerate ? 1 : 0) << ',' << rec.gap_to_pi << ',' << rec.n1
      << ',' << rec.n2 << ',' << rec.seconds << '\n';
  out.precision(old);
  out.flush();
}

void write_graph_obj(std::ostream& out, const GridFunction& psi) {
  if (!psi.mesh || psi.values.size() != psi.mesh->vertices.size())
    throw std::invalid_argument("write_graph_obj: field does not match its mesh");
  out << std::setprecision(12);
  for (std::size_t v = 0; v < psi.values.size(); ++v)
    out << "v " << psi.mesh->vertices[v].x() << ' ' << psi.mesh->vertices[v].y() << ' ' << psi.values[v] << '\n';
  for (const auto& t : psi.mesh->triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

}  // namespace vortex::io
