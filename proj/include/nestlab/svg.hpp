// Deterministic SVG rendering of scan and nest reports.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace nestlab {

// Bifurcation diagram: one column of attractor samples per parameter value
// (fixed transient, fixed sample count, double precision).
std::string render_bifurcation_svg(const std::vector<double>& a_values, int transient = 400,
                                   int plot_points = 120, int width = 900, int height = 600);

// Nested-interval ladder from a nest JSON report (one row per level);
// log_scale compresses torrentially small deep levels.
std::string render_nest_svg(const nlohmann::json& report, bool log_scale = false, int width = 900,
                            int height = 600);

// Dispatcher: reads a scan CSV or nest JSON and writes the requested format
// ("svg-bifurcation" | "svg-nest-intervals"). Throws SchemaError on inputs
// that do not match the expected schema.
void render_file(const std::string& in_path, const std::string& format,
                 const std::string& out_path, bool log_scale = false);

} // namespace nestlab
