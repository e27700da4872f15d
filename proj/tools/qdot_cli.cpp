// Command-line driver: scenario stages, parameter sweeps, plot data files.
//
// Exit codes: 0 success, 1 stage failure, 2 configuration error.

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qdot/runner.hpp"

namespace {

namespace fs = std::filesystem;

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::strtod(tok.c_str(), nullptr));
  }
  return out;
}

int run_stages(const std::string& config_path, const std::string& out_dir,
               const std::vector<std::string>& stages) {
  qdot::RunConfig cfg;
  try {
    cfg = qdot::load_config(config_path);
    if (!out_dir.empty()) cfg.output.directory = out_dir;
    if (!stages.empty()) cfg.stages = stages;
    qdot::validate_config(cfg);
  } catch (const qdot::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    qdot::run_scenario(cfg);
  } catch (const std::exception& e) {
    std::cerr << "stage failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"open quantum dot toolkit: embedded levels, resonance widths, "
               "complex-scaling poles, strong-field certificates"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string axis = "B";
  std::string values_csv;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory override");
  };

  auto* validate = app.add_subcommand("validate", "assumption report");
  auto* levels = app.add_subcommand("levels", "level census");
  auto* perturb = app.add_subcommand("perturb", "perturbative shifts and widths");
  auto* poles = app.add_subcommand("poles", "complex-scaling pole location");
  auto* dispersion = app.add_subcommand("dispersion", "fiber dispersion curves");
  auto* certify = app.add_subcommand("certify", "strong-field certificates");
  auto* sweep = app.add_subcommand("sweep", "axis sweep with plot data");
  for (auto* sub : {validate, levels, perturb, poles, dispersion, certify, sweep})
    add_common(sub);
  sweep->add_option("--axis", axis, "B | lambda | p")->required();
  sweep->add_option("--values", values_csv, "comma-separated sorted values")->required();

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return run_stages(config_path, out_dir, {"validate"});
  if (levels->parsed()) return run_stages(config_path, out_dir, {"validate", "levels"});
  if (perturb->parsed())
    return run_stages(config_path, out_dir, {"validate", "levels", "perturb"});
  if (poles->parsed())
    return run_stages(config_path, out_dir, {"validate", "levels", "perturb", "poles"});
  if (dispersion->parsed()) return run_stages(config_path, out_dir, {"dispersion"});
  if (certify->parsed()) return run_stages(config_path, out_dir, {"dispersion", "certify"});

  // sweep
  qdot::RunConfig cfg;
  qdot::SweepAxis ax;
  std::vector<double> values;
  try {
    cfg = qdot::load_config(config_path);
    if (!out_dir.empty()) cfg.output.directory = out_dir;
    if (axis == "B")
      ax = qdot::SweepAxis::B;
    else if (axis == "lambda")
      ax = qdot::SweepAxis::Lambda;
    else if (axis == "p")
      ax = qdot::SweepAxis::P;
    else
      throw qdot::Error(qdot::ErrorCode::ConfigInvalid, "axis must be B|lambda|p");
    values = parse_values(values_csv);
    if (values.empty())
      throw qdot::Error(qdot::ErrorCode::ConfigInvalid, "no sweep values given");
  } catch (const qdot::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    const qdot::Table t = qdot::sweep(cfg, ax, values);
    fs::create_directories(cfg.output.directory);
    const fs::path dir(cfg.output.directory);
    qdot::write_csv((dir / "sweep.csv").string(), t);
    if (ax == qdot::SweepAxis::P)
      qdot::emit_plot_data(t, qdot::PlotKind::Dispersion, (dir / "dispersion.dat").string());
    else if (ax == qdot::SweepAxis::B) {
      qdot::emit_plot_data(t, qdot::PlotKind::LogLogWidth, (dir / "loglog_width.dat").string());
      qdot::emit_plot_data(t, qdot::PlotKind::PoleTrajectory,
                           (dir / "pole_trajectory.dat").string());
    }
  } catch (const std::exception& e) {
    std::cerr << "stage failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
