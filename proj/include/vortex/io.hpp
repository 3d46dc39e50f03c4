#pragma once

// JSON and CSV output, and JSON configuration for the optimizer.

#include "vortex/analysis.hpp"
#include "vortex/outer_optimizer.hpp"
#include "vortex/parametric_plateau.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>

namespace vortex::io {

using nlohmann::json;

/// Overrides fields of `base` with the keys present in `j`. Unknown keys throw
/// std::invalid_argument so that typos do not go unnoticed.
OptimizerConfig config_from_json(const json& j, OptimizerConfig base = {});
json config_to_json(const OptimizerConfig& cfg);
OptimizerConfig load_config(const std::string& path, OptimizerConfig base = {});

json to_json(const ConvexProfile& h);
json to_json(const FunctionalBreakdown& b);
json to_json(const SolveReport& r, bool timing = true);
json to_json(const ThresholdResult& r);
json to_json(const VortexArea& v);
json to_json(const CrossCheck& c);
json to_json(const PlateauResult& r);

void write_sweep_header(std::ostream& out);
void write_sweep_row(std::ostream& out, const SweepRecord& rec);

/// Graph of psi as a triangulated surface (w1, w2, psi).
void write_graph_obj(std::ostream& out, const GridFunction& psi);

}  // namespace vortex::io
