#pragma once

#include <string>
#include <vector>

#include "qdot/config.hpp"
#include "qdot/results.hpp"

namespace qdot {

enum class SweepAxis { B, Lambda, P };

// Execute the configured stages, writing per-stage CSV files, summary.json
// and the schema file into the output directory. On a stage failure the
// partial outputs are kept next to a FAILED marker and the error re-thrown.
ResultBundle run_scenario(const RunConfig& cfg);

// Long-format sweep along one axis. Honors the QDOT_WORKERS environment
// variable for independent sweep points.
Table sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& values);

}  // namespace qdot
