#pragma once

#include <string>
#include <vector>

#include "qdot/potentials.hpp"
#include "qdot/spectral.hpp"

namespace qdot {

struct GridSection {
  std::size_t n_x = 601;
  double L_x = 30.0;
  std::size_t n_y = 2001;
  double L_y = 8.0;  // line confinement only; the strip uses the half-width
};

struct EtaSection {
  double half_length = 1600.0;
  int points = 5;
};

struct SolverSection {
  int J = 4;
  int K = 4;
  double theta_im = 0.3;
  double energy_cap = 30.0;
  double search_radius = 0.5;
  double near_threshold = 1e-4;
  ClassificationTolerances tolerances;
  EtaSection eta;
  bool direct_oracle = false;
  std::size_t oracle_n_x = 241;
  std::size_t oracle_n_y = 121;
  double oracle_L_x = 12.0;
  double oracle_L_y = 4.0;
};

struct SweepSection {
  std::vector<double> B{5e-3};
  std::vector<double> lambda{0.0};
  double p_lo = -3.0;
  double p_hi = 3.0;
  std::size_t p_samples = 41;
};

struct OutputSection {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
};

struct RunConfig {
  std::string scenario = "default";
  PotentialModel model;
  GridSection grid;
  SolverSection solver;
  SweepSection sweep;
  OutputSection output;
  std::vector<std::string> stages{"validate", "levels", "perturb", "poles"};
};

// Strict parse: unknown keys anywhere are configuration errors.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

// Canonical serialization and its FNV-1a hash; identical configs hash equal.
std::string canonical_config(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

void validate_config(const RunConfig& cfg);  // throws ConfigInvalid

}  // namespace qdot
