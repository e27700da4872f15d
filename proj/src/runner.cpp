#include "qdot/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include "qdot/coupling.hpp"
#include "qdot/perturbation.hpp"
#include "qdot/poles.hpp"
#include "qdot/strongfield.hpp"

namespace qdot {

namespace {

namespace fs = std::filesystem;

struct Workspace {
  Grid xgrid, ygrid;
  std::vector<SpectralPair> modes;
  std::vector<SpectralPair> bound;
  std::vector<double> mu, nu;
  std::vector<LevelRecord> records;
};

Grid make_ygrid(const RunConfig& cfg) {
  const double half = cfg.model.confinement.line ? cfg.grid.L_y
                                                 : cfg.model.confinement.half_width;
  return build_uniform_grid(-half, half, cfg.grid.n_y);
}

Workspace prepare(const RunConfig& cfg) {
  Workspace ws;
  ws.xgrid = build_uniform_grid(-cfg.grid.L_x, cfg.grid.L_x, cfg.grid.n_x);
  ws.ygrid = make_ygrid(cfg);
  ws.modes = solve_transverse(cfg.model, ws.ygrid, cfg.solver.J);
  for (const auto& m : ws.modes) ws.nu.push_back(m.eigenvalue);
  if (cfg.model.well.depth != 0.0) {
    ws.bound = solve_longitudinal(cfg.model, ws.xgrid);
    for (const auto& b : ws.bound) ws.mu.push_back(b.eigenvalue);
  }
  ws.records = classify_levels(ws.mu, ws.nu, cfg.solver.energy_cap,
                               cfg.solver.tolerances.degeneracy,
                               cfg.solver.tolerances.degeneracy);
  return ws;
}

std::string timestamp_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
  return buf;
}

int status_code(LevelStatus s) {
  switch (s) {
    case LevelStatus::Isolated: return 0;
    case LevelStatus::Embedded: return 1;
    case LevelStatus::ThresholdCollision: return 2;
    case LevelStatus::Degenerate: return 3;
  }
  return 0;
}

bool has_stage(const RunConfig& cfg, const std::string& s) {
  return std::find(cfg.stages.begin(), cfg.stages.end(), s) != cfg.stages.end();
}

std::vector<const LevelRecord*> embedded_levels(const Workspace& ws) {
  std::vector<const LevelRecord*> out;
  for (const auto& r : ws.records)
    if (r.status == LevelStatus::Embedded) out.push_back(&r);
  return out;
}

int worker_count() {
  if (const char* env = std::getenv("QDOT_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

// Run fn(i) for i in [0, count) on the worker pool; exceptions resurface.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const int workers = std::min<int>(worker_count(), static_cast<int>(count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

ResultBundle run_scenario(const RunConfig& cfg) {
  validate_config(cfg);
  ResultBundle bundle;
  bundle.scenario = cfg.scenario;
  bundle.timestamp = timestamp_now();
  bundle.config_hash = config_hash(cfg);
  const std::string& hash = bundle.config_hash;

  fs::create_directories(cfg.output.directory);
  const fs::path dir(cfg.output.directory);

  auto flush = [&] { write_outputs(bundle, cfg.output.directory, cfg.output.csv,
                                   cfg.output.json); };

  try {
    if (has_stage(cfg, "validate")) {
      const auto rep = validate_assumptions(cfg.model);
      bundle.notes.push_back(std::string("assumptions: decay_v=") +
                             (rep.decay_v ? "1" : "0") +
                             " decay_u=" + (rep.decay_u ? "1" : "0") +
                             " mean=" + (rep.mean_condition ? "1" : "0") +
                             " confinement=" + (rep.confinement_bound ? "1" : "0"));
      for (const auto& n : rep.notes) bundle.notes.push_back("assumptions: " + n);
    }

    Workspace ws = prepare(cfg);

    if (has_stage(cfg, "levels")) {
      bundle.levels.columns = {"n", "j", "e0", "status", "k_e0", "config_hash"};
      for (const auto& r : ws.records)
        bundle.levels.rows.push_back({format_value(static_cast<long long>(r.n)),
                                      format_value(static_cast<long long>(r.j)),
                                      format_value(r.e0),
                                      format_value(static_cast<long long>(status_code(r.status))),
                                      format_value(static_cast<long long>(r.open_channels)),
                                      hash});
      flush();
    }

    if (has_stage(cfg, "perturb") || has_stage(cfg, "poles")) {
      PerturbationOptions popts;
      popts.near_threshold = cfg.solver.near_threshold;
      popts.eta_half_length = cfg.solver.eta.half_length;
      popts.eta_points = cfg.solver.eta.points;

      const auto levels = embedded_levels(ws);
      if (has_stage(cfg, "perturb")) {
        bundle.widths.columns = {"B", "lambda", "n", "j", "e0", "e1", "re_e2",
                                 "im_e2", "im_e2_golden", "config_hash"};
        for (const auto* lv : levels) {
          LevelPerturbation pert(cfg.model, ws.modes, ws.ygrid, ws.xgrid, lv->n,
                                 lv->j, cfg.solver.energy_cap, popts);
          for (double lam : cfg.sweep.lambda)
            for (double B : cfg.sweep.B) {
              const double e1 = pert.first_order_shift(B, lam);
              const auto e2 = pert.second_order_full(B, lam);
              const auto gw = pert.golden_rule_width(B, lam);
              bundle.widths.rows.push_back(
                  {format_value(B), format_value(lam),
                   format_value(static_cast<long long>(lv->n)),
                   format_value(static_cast<long long>(lv->j)),
                   format_value(lv->e0), format_value(e1), format_value(e2.real()),
                   format_value(e2.imag()), format_value(gw.total), hash});
            }
        }
        flush();
      }

      if (has_stage(cfg, "poles")) {
        bundle.poles.columns = {"B", "lambda", "n", "j", "pole_re", "pole_im",
                                "raw_re", "raw_im", "config_hash"};
        const std::complex<double> theta{0.0, cfg.solver.theta_im};
        for (const auto* lv : levels) {
          struct Row {
            double B, lam;
            PoleResult res;
          };
          std::vector<Row> rows;
          for (double lam : cfg.sweep.lambda)
            for (double B : cfg.sweep.B) rows.push_back({B, lam, {}});
          parallel_for(rows.size(), [&](std::size_t i) {
            rows[i].res = locate_pole(cfg.model, ws.modes, ws.ygrid, ws.xgrid,
                                      theta, rows[i].B, rows[i].lam, cfg.solver.K,
                                      *lv, cfg.solver.search_radius,
                                      cfg.solver.tolerances);
          });
          for (const auto& r : rows)
            bundle.poles.rows.push_back(
                {format_value(r.B), format_value(r.lam),
                 format_value(static_cast<long long>(lv->n)),
                 format_value(static_cast<long long>(lv->j)),
                 format_value(r.res.pole.real()), format_value(r.res.pole.imag()),
                 format_value(r.res.raw_eigenvalue.real()),
                 format_value(r.res.raw_eigenvalue.imag()), hash});
        }
        flush();
      }
    }

    if (has_stage(cfg, "dispersion") || has_stage(cfg, "certify")) {
      bundle.dispersion.columns = {"B", "p", "nu1", "config_hash"};
      bundle.strongfield.columns = {"B", "p0", "bottom", "attractivity", "eps", "d",
                                    "q", "certified", "direct", "config_hash"};
      for (double B : cfg.sweep.B) {
        // widen the momentum window until the endpoints clear the minimum
        double p_lo = cfg.sweep.p_lo, p_hi = cfg.sweep.p_hi;
        DispersionCurve curve;
        for (int attempt = 0;; ++attempt) {
          try {
            curve = dispersion_curve(cfg.model, B, 1, p_lo, p_hi,
                                     cfg.sweep.p_samples, ws.ygrid);
            break;
          } catch (const Error& e) {
            if (e.code() != ErrorCode::RangeTooNarrow || attempt >= 4) throw;
            p_lo *= 2.0;
            p_hi *= 2.0;
          }
        }
        if (has_stage(cfg, "dispersion")) {
          for (std::size_t i = 0; i < curve.p.size(); ++i)
            bundle.dispersion.rows.push_back({format_value(B), format_value(curve.p[i]),
                                              format_value(curve.value[i]), hash});
        }
        if (has_stage(cfg, "certify")) {
          const auto [bottom, p0s] = essential_bottom(curve);
          const double p0 = p0s.front();
          auto cert = variational_certificate(
              cfg.model, B, p0, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6},
              {5.0, 10.0, 20.0, 40.0}, ws.ygrid, ws.xgrid);
          double direct = std::nan("");
          if (cfg.solver.direct_oracle) {
            const Grid ox = build_uniform_grid(-cfg.solver.oracle_L_x,
                                               cfg.solver.oracle_L_x,
                                               cfg.solver.oracle_n_x);
            const Grid oy = build_uniform_grid(-cfg.solver.oracle_L_y,
                                               cfg.solver.oracle_L_y,
                                               cfg.solver.oracle_n_y);
            direct = direct_ground_state(cfg.model, B, ox, oy);
            cert.has_direct = true;
            cert.direct_eigenvalue = direct;
          }
          bundle.strongfield.rows.push_back(
              {format_value(B), format_value(p0), format_value(bottom),
               format_value(cert.attractivity), format_value(cert.chosen.eps),
               format_value(cert.chosen.d), format_value(cert.chosen.q),
               format_value(static_cast<long long>(cert.verdict == Verdict::Certified ? 1 : 0)),
               format_value(direct), hash});
        }
      }
      flush();
    }
  } catch (const std::exception& e) {
    flush();
    std::ofstream marker(dir / "FAILED");
    marker << e.what() << "\n";
    throw Error(ErrorCode::StageFailure, e.what());
  }

  flush();
  return bundle;
}

Table sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& values) {
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    if (!(values[i] < values[i + 1]))
      throw Error(ErrorCode::ConfigInvalid, "sweep: axis values must be sorted");

  RunConfig local = cfg;
  Table t;
  if (axis == SweepAxis::P) {
    Workspace ws = prepare(local);
    t.columns = {"p", "nu1", "config_hash"};
    const std::string hash = config_hash(local);
    std::vector<double> nu1(values.size());
    parallel_for(values.size(), [&](std::size_t i) {
      nu1[i] = solve_fiber(local.model, local.sweep.B.front(), values[i], ws.ygrid, 1)
                   .front()
                   .eigenvalue;
    });
    for (std::size_t i = 0; i < values.size(); ++i)
      t.rows.push_back({format_value(values[i]), format_value(nu1[i]), hash});
    return t;
  }

  if (axis == SweepAxis::B)
    local.sweep.B = values;
  else
    local.sweep.lambda = values;

  Workspace ws = prepare(local);
  PerturbationOptions popts;
  popts.near_threshold = local.solver.near_threshold;
  popts.eta_half_length = local.solver.eta.half_length;
  popts.eta_points = local.solver.eta.points;
  const std::string hash = config_hash(local);

  t.columns = {axis == SweepAxis::B ? "B" : "lambda", "n", "j", "e0", "e1",
               "re_e2", "im_e2", "pole_re", "pole_im", "config_hash"};
  const std::complex<double> theta{0.0, local.solver.theta_im};
  for (const auto* lv : embedded_levels(ws)) {
    LevelPerturbation pert(local.model, ws.modes, ws.ygrid, ws.xgrid, lv->n, lv->j,
                           local.solver.energy_cap, popts);
    std::vector<PoleResult> poles(values.size());
    parallel_for(values.size(), [&](std::size_t i) {
      const double B = axis == SweepAxis::B ? values[i] : local.sweep.B.front();
      const double lam = axis == SweepAxis::B ? local.sweep.lambda.front() : values[i];
      poles[i] = locate_pole(local.model, ws.modes, ws.ygrid, ws.xgrid, theta, B,
                             lam, local.solver.K, *lv, local.solver.search_radius,
                             local.solver.tolerances);
    });
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double B = axis == SweepAxis::B ? values[i] : local.sweep.B.front();
      const double lam = axis == SweepAxis::B ? local.sweep.lambda.front() : values[i];
      const double e1 = pert.first_order_shift(B, lam);
      const auto e2 = pert.second_order_full(B, lam);
      t.rows.push_back({format_value(values[i]),
                        format_value(static_cast<long long>(lv->n)),
                        format_value(static_cast<long long>(lv->j)),
                        format_value(lv->e0), format_value(e1),
                        format_value(e2.real()), format_value(e2.imag()),
                        format_value(poles[i].pole.real()),
                        format_value(poles[i].pole.imag()), hash});
    }
  }
  return t;
}

}  // namespace qdot
