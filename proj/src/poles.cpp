#include "qdot/poles.hpp"

#include <algorithm>
#include <cmath>

#include "qdot/detail/lapack.hpp"

namespace qdot {

namespace {

using cplx = std::complex<double>;

bool on_rotated_ray(cplx z, double beta, const std::vector<double>& nu,
                    const ClassificationTolerances& tols) {
  for (double nk : nu) {
    const cplx w = (z - nk) * std::exp(cplx{0.0, 2.0 * beta});
    if (w.real() > 0.0 && std::abs(std::arg(w)) < tols.ray_angle) return true;
    if (w.real() > -tols.ray_distance_rel &&
        std::abs(w.imag()) < tols.ray_distance_rel * (1.0 + std::abs(z)))
      return true;
  }
  return false;
}

}  // namespace

PoleResult locate_pole(const PotentialModel& model,
                       const std::vector<SpectralPair>& modes, const Grid& ygrid,
                       const Grid& xgrid, std::complex<double> theta, double B,
                       double lambda, int K, const LevelRecord& level,
                       double search_radius, const ClassificationTolerances& tols) {
  if (theta.imag() <= 0.0)
    throw Error(ErrorCode::SectorViolation,
                "pole location requires Im theta > 0 (self-adjoint otherwise)");

  ChannelOperator op =
      assemble_channel_operator(model, modes, ygrid, theta, B, lambda, K, xgrid);
  std::vector<cplx> eigs =
      detail::dense_eigenvalues(op.matrix, static_cast<int>(op.K * op.m));

  const double beta = theta.imag();
  cplx best{0.0, 0.0};
  double best_dist = -1.0;
  bool any_in_disk = false;
  for (const cplx& z : eigs) {
    const double dist = std::abs(z - level.e0);
    if (dist > search_radius) continue;
    any_in_disk = true;
    if (on_rotated_ray(z, beta, op.nu, tols)) continue;
    if (best_dist < 0.0 || dist < best_dist) {
      best = z;
      best_dist = dist;
    }
  }
  if (best_dist < 0.0) {
    if (any_in_disk)
      throw Error(ErrorCode::ContinuumContamination,
                  "only rotated-continuum eigenvalues inside the search disk");
    throw Error(ErrorCode::NoPoleInWindow,
                "no eigenvalue inside the search disk");
  }

  PoleResult res;
  res.raw_eigenvalue = best;
  res.seed = level.e0;
  res.theta = theta;
  res.channels = K;
  res.grid_n = xgrid.n;

  // Width and shift are read off relative to the same-stencil diagonal block,
  // which carries the identical complex discretization bias but no decay.
  const int jb = level.j - 1;
  {
    auto blk = channel_diagonal_block(model, modes, ygrid, theta, B, lambda, jb, xgrid);
    res.diagonal_reference =
        detail::tridiag_eigenvalue_near(blk.lower, blk.diag, blk.upper, best);
  }
  {
    auto blk0 = channel_diagonal_block(model, modes, ygrid, theta, 0.0, 0.0, jb, xgrid);
    res.unperturbed_reference =
        detail::tridiag_eigenvalue_near(blk0.lower, blk0.diag, blk0.upper, level.e0);
  }
  res.pole = level.e0 +
             (res.diagonal_reference - res.unperturbed_reference).real() +
             (best - res.diagonal_reference);
  return res;
}

DriftReport theta_independence(const PotentialModel& model,
                               const std::vector<SpectralPair>& modes,
                               const Grid& ygrid, const Grid& xgrid,
                               const std::vector<std::complex<double>>& thetas,
                               double B, double lambda, int K,
                               const LevelRecord& level, double search_radius,
                               const ClassificationTolerances& tols) {
  if (thetas.size() < 2)
    throw Error(ErrorCode::ConfigInvalid, "theta independence needs >= 2 angles");
  DriftReport rep;
  for (cplx th : thetas) {
    if (th.imag() == 0.0) {
      rep.unusable.push_back(th);
      continue;
    }
    rep.poles.push_back(
        locate_pole(model, modes, ygrid, xgrid, th, B, lambda, K, level,
                    search_radius, tols)
            .pole);
    rep.thetas.push_back(th);
  }
  for (std::size_t i = 0; i < rep.poles.size(); ++i)
    for (std::size_t j = i + 1; j < rep.poles.size(); ++j)
      rep.max_drift = std::max(rep.max_drift, std::abs(rep.poles[i] - rep.poles[j]));

  if (!rep.thetas.empty()) {
    // Discretization estimate from a halved grid at the first usable theta.
    const std::size_t nh = xgrid.n / 2 + 1;
    if (nh >= 5) {
      Grid half = build_uniform_grid(xgrid.lo, xgrid.hi, nh);
      auto bound = solve_longitudinal(model, half);
      std::vector<double> mu, nu;
      for (const auto& b : bound) mu.push_back(b.eigenvalue);
      for (const auto& m : modes) nu.push_back(m.eigenvalue);
      LevelRecord lv = level;
      lv.e0 = mu[level.n - 1] + nu[level.j - 1];
      const cplx ph = locate_pole(model, modes, ygrid, half, rep.thetas.front(), B,
                                  lambda, K, lv, search_radius, tols)
                          .pole -
                      lv.e0;
      const cplx pf = rep.poles.front() - level.e0;
      rep.discretization_estimate = std::abs(ph - pf);
    }
  }
  rep.accepted = !rep.poles.empty() &&
                 rep.max_drift < 10.0 * std::max(rep.discretization_estimate, 1e-12);
  return rep;
}

RayDeviationReport continuum_diagnostic(
    const std::vector<std::complex<double>>& eigenvalues,
    std::complex<double> theta, const std::vector<double>& nu, double energy_cap) {
  RayDeviationReport rep;
  const double beta = theta.imag();
  for (const cplx& z : eigenvalues) {
    if (std::abs(z) > energy_cap) continue;
    double best = 1e300;
    for (double nk : nu) {
      const cplx w = (z - nk) * std::exp(cplx{0.0, 2.0 * beta});
      const double d = w.real() >= 0.0 ? std::abs(w.imag()) : std::abs(w);
      best = std::min(best, d);
    }
    rep.eigenvalues.push_back(z);
    rep.distances.push_back(best);
  }
  if (!rep.distances.empty()) {
    double sum = 0.0;
    for (double d : rep.distances) {
      rep.max_distance = std::max(rep.max_distance, d);
      sum += d;
    }
    rep.mean_distance = sum / static_cast<double>(rep.distances.size());
  }
  return rep;
}

RayDeviationReport continuum_diagnostic(const ComplexSpectrum& spectrum,
                                        const std::vector<double>& nu,
                                        double energy_cap) {
  std::vector<cplx> keep;
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i)
    if (spectrum.classification[i] == SpectralClass::RotatedContinuum)
      keep.push_back(spectrum.eigenvalues[i]);
  return continuum_diagnostic(keep, spectrum.theta, nu, energy_cap);
}

}  // namespace qdot
