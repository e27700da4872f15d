#include "qdot/config.hpp"

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qdot {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!j.is_object())
    throw Error(ErrorCode::ConfigInvalid, "config: '" + where + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw Error(ErrorCode::ConfigInvalid,
                  "config: unknown key '" + it.key() + "' in " + where);
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

DotFamily dot_family_from(const std::string& s) {
  if (s == "none") return DotFamily::None;
  if (s == "gaussian_gaussian") return DotFamily::GaussianGaussian;
  if (s == "gaussian_tilted") return DotFamily::GaussianTilted;
  if (s == "gaussian_x_only") return DotFamily::GaussianXOnly;
  if (s == "additive_separable") return DotFamily::AdditiveSeparable;
  throw Error(ErrorCode::ConfigInvalid, "config: unknown dot family '" + s + "'");
}

std::string dot_family_name(DotFamily f) {
  switch (f) {
    case DotFamily::None: return "none";
    case DotFamily::GaussianGaussian: return "gaussian_gaussian";
    case DotFamily::GaussianTilted: return "gaussian_tilted";
    case DotFamily::GaussianXOnly: return "gaussian_x_only";
    case DotFamily::AdditiveSeparable: return "additive_separable";
  }
  return "none";
}

void parse_potential(const json& j, PotentialModel& m) {
  check_keys(j, "potential", {"well", "confinement", "dot", "decay_eps"});
  if (j.contains("well")) {
    const auto& w = j.at("well");
    check_keys(w, "potential.well", {"depth", "width"});
    maybe(w, "depth", m.well.depth);
    maybe(w, "width", m.well.width);
  }
  if (j.contains("confinement")) {
    const auto& c = j.at("confinement");
    check_keys(c, "potential.confinement", {"type", "half_width", "c", "q"});
    if (c.contains("type")) {
      const std::string t = c.at("type").get<std::string>();
      if (t == "line")
        m.confinement.line = true;
      else if (t == "strip")
        m.confinement.line = false;
      else
        throw Error(ErrorCode::ConfigInvalid, "config: confinement type must be strip|line");
    }
    maybe(c, "half_width", m.confinement.half_width);
    maybe(c, "c", m.confinement.c);
    maybe(c, "q", m.confinement.q);
  }
  if (j.contains("dot")) {
    const auto& d = j.at("dot");
    check_keys(d, "potential.dot",
               {"family", "amplitude", "y_amplitude", "x_width", "y_width",
                "x_center", "y_center", "tilt"});
    if (d.contains("family"))
      m.dot.family = dot_family_from(d.at("family").get<std::string>());
    maybe(d, "amplitude", m.dot.amplitude);
    maybe(d, "y_amplitude", m.dot.y_amplitude);
    maybe(d, "x_width", m.dot.x_width);
    maybe(d, "y_width", m.dot.y_width);
    maybe(d, "x_center", m.dot.x_center);
    maybe(d, "y_center", m.dot.y_center);
    maybe(d, "tilt", m.dot.tilt);
  }
  maybe(j, "decay_eps", m.decay_eps);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("config: parse error: ") + e.what());
  }
  check_keys(j, "top level",
             {"scenario", "potential", "grid", "solver", "sweep", "output", "stages"});
  RunConfig cfg;
  maybe(j, "scenario", cfg.scenario);
  if (j.contains("potential")) parse_potential(j.at("potential"), cfg.model);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    check_keys(g, "grid", {"n_x", "L_x", "n_y", "L_y"});
    maybe(g, "n_x", cfg.grid.n_x);
    maybe(g, "L_x", cfg.grid.L_x);
    maybe(g, "n_y", cfg.grid.n_y);
    maybe(g, "L_y", cfg.grid.L_y);
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    check_keys(s, "solver",
               {"J", "K", "theta_im", "energy_cap", "search_radius", "near_threshold",
                "tolerances", "eta", "direct_oracle", "oracle_n_x", "oracle_n_y",
                "oracle_L_x", "oracle_L_y"});
    maybe(s, "J", cfg.solver.J);
    maybe(s, "K", cfg.solver.K);
    maybe(s, "theta_im", cfg.solver.theta_im);
    maybe(s, "energy_cap", cfg.solver.energy_cap);
    maybe(s, "search_radius", cfg.solver.search_radius);
    maybe(s, "near_threshold", cfg.solver.near_threshold);
    if (s.contains("tolerances")) {
      const auto& t = s.at("tolerances");
      check_keys(t, "solver.tolerances",
                 {"ray_angle", "ray_distance_rel", "bound_im_rel", "degeneracy",
                  "threshold_exclusion"});
      maybe(t, "ray_angle", cfg.solver.tolerances.ray_angle);
      maybe(t, "ray_distance_rel", cfg.solver.tolerances.ray_distance_rel);
      maybe(t, "bound_im_rel", cfg.solver.tolerances.bound_im_rel);
      maybe(t, "degeneracy", cfg.solver.tolerances.degeneracy);
      maybe(t, "threshold_exclusion", cfg.solver.tolerances.threshold_exclusion);
    }
    if (s.contains("eta")) {
      const auto& e = s.at("eta");
      check_keys(e, "solver.eta", {"half_length", "points"});
      maybe(e, "half_length", cfg.solver.eta.half_length);
      maybe(e, "points", cfg.solver.eta.points);
    }
    maybe(s, "direct_oracle", cfg.solver.direct_oracle);
    maybe(s, "oracle_n_x", cfg.solver.oracle_n_x);
    maybe(s, "oracle_n_y", cfg.solver.oracle_n_y);
    maybe(s, "oracle_L_x", cfg.solver.oracle_L_x);
    maybe(s, "oracle_L_y", cfg.solver.oracle_L_y);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    check_keys(s, "sweep", {"B", "lambda", "p_lo", "p_hi", "p_samples"});
    maybe(s, "B", cfg.sweep.B);
    maybe(s, "lambda", cfg.sweep.lambda);
    maybe(s, "p_lo", cfg.sweep.p_lo);
    maybe(s, "p_hi", cfg.sweep.p_hi);
    maybe(s, "p_samples", cfg.sweep.p_samples);
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, "output", {"directory", "csv", "json"});
    maybe(o, "directory", cfg.output.directory);
    maybe(o, "csv", cfg.output.csv);
    maybe(o, "json", cfg.output.json);
  }
  if (j.contains("stages")) cfg.stages = j.at("stages").get<std::vector<std::string>>();
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ConfigInvalid, "config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const RunConfig& cfg) {
  const auto& t = cfg.solver.tolerances;
  if (t.ray_angle <= 0 || t.ray_distance_rel <= 0 || t.bound_im_rel <= 0 ||
      t.degeneracy <= 0 || t.threshold_exclusion <= 0)
    throw Error(ErrorCode::ConfigInvalid, "config: tolerances must be positive");
  if (cfg.solver.K > cfg.solver.J)
    throw Error(ErrorCode::ConfigInvalid, "config: K must not exceed J");
  if (cfg.solver.J < 1 || cfg.solver.K < 1)
    throw Error(ErrorCode::ConfigInvalid, "config: J and K must be >= 1");
  const double cap = std::min(cfg.model.sector_half_angle(), std::numbers::pi / 4.0);
  if (cfg.solver.theta_im <= 0.0 || cfg.solver.theta_im >= cap)
    throw Error(ErrorCode::ConfigInvalid,
                "config: theta_im must lie inside the analyticity sector");
  if (cfg.grid.n_x < 3 || cfg.grid.n_y < 3)
    throw Error(ErrorCode::ConfigInvalid, "config: grids need at least 3 nodes");
  for (const auto& s : cfg.stages)
    if (s != "validate" && s != "levels" && s != "perturb" && s != "poles" &&
        s != "dispersion" && s != "certify")
      throw Error(ErrorCode::ConfigInvalid, "config: unknown stage '" + s + "'");
}

std::string canonical_config(const RunConfig& cfg) {
  json j;
  j["scenario"] = cfg.scenario;
  j["potential"]["well"] = {{"depth", cfg.model.well.depth}, {"width", cfg.model.well.width}};
  j["potential"]["confinement"] = {{"type", cfg.model.confinement.line ? "line" : "strip"},
                                   {"half_width", cfg.model.confinement.half_width},
                                   {"c", cfg.model.confinement.c},
                                   {"q", cfg.model.confinement.q}};
  j["potential"]["dot"] = {{"family", dot_family_name(cfg.model.dot.family)},
                           {"amplitude", cfg.model.dot.amplitude},
                           {"y_amplitude", cfg.model.dot.y_amplitude},
                           {"x_width", cfg.model.dot.x_width},
                           {"y_width", cfg.model.dot.y_width},
                           {"x_center", cfg.model.dot.x_center},
                           {"y_center", cfg.model.dot.y_center},
                           {"tilt", cfg.model.dot.tilt}};
  j["potential"]["decay_eps"] = cfg.model.decay_eps;
  j["grid"] = {{"n_x", cfg.grid.n_x}, {"L_x", cfg.grid.L_x},
               {"n_y", cfg.grid.n_y}, {"L_y", cfg.grid.L_y}};
  j["solver"] = {{"J", cfg.solver.J},
                 {"K", cfg.solver.K},
                 {"theta_im", cfg.solver.theta_im},
                 {"energy_cap", cfg.solver.energy_cap},
                 {"search_radius", cfg.solver.search_radius},
                 {"near_threshold", cfg.solver.near_threshold},
                 {"tolerances",
                  {{"ray_angle", cfg.solver.tolerances.ray_angle},
                   {"ray_distance_rel", cfg.solver.tolerances.ray_distance_rel},
                   {"bound_im_rel", cfg.solver.tolerances.bound_im_rel},
                   {"degeneracy", cfg.solver.tolerances.degeneracy},
                   {"threshold_exclusion", cfg.solver.tolerances.threshold_exclusion}}},
                 {"eta",
                  {{"half_length", cfg.solver.eta.half_length},
                   {"points", cfg.solver.eta.points}}},
                 {"direct_oracle", cfg.solver.direct_oracle},
                 {"oracle_n_x", cfg.solver.oracle_n_x},
                 {"oracle_n_y", cfg.solver.oracle_n_y},
                 {"oracle_L_x", cfg.solver.oracle_L_x},
                 {"oracle_L_y", cfg.solver.oracle_L_y}};
  j["sweep"] = {{"B", cfg.sweep.B}, {"lambda", cfg.sweep.lambda},
                {"p_lo", cfg.sweep.p_lo}, {"p_hi", cfg.sweep.p_hi},
                {"p_samples", cfg.sweep.p_samples}};
  // the output section is provenance-neutral and stays out of the hash
  j["stages"] = cfg.stages;
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  const std::string s = canonical_config(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qdot
