#pragma once

#include <complex>
#include <vector>

#include "qdot/coupling.hpp"
#include "qdot/perturbation.hpp"

namespace qdot {

// Resonance pole of the truncated channel operator. `pole` is referenced to
// the unperturbed level through the diagonal-block eigenvalue of the same
// discretization, which cancels the O(h^2) complex bias of the scaled
// stencil; `raw_eigenvalue` is the untreated matrix eigenvalue.
struct PoleResult {
  std::complex<double> pole{0.0, 0.0};
  std::complex<double> raw_eigenvalue{0.0, 0.0};
  std::complex<double> diagonal_reference{0.0, 0.0};
  std::complex<double> unperturbed_reference{0.0, 0.0};
  double seed = 0.0;
  std::complex<double> theta{0.0, 0.0};
  int channels = 0;
  std::size_t grid_n = 0;
  double theta_drift = 0.0;
};

PoleResult locate_pole(const PotentialModel& model,
                       const std::vector<SpectralPair>& modes, const Grid& ygrid,
                       const Grid& xgrid, std::complex<double> theta, double B,
                       double lambda, int K, const LevelRecord& level,
                       double search_radius,
                       const ClassificationTolerances& tols = {});

struct DriftReport {
  std::vector<std::complex<double>> poles;  // one per usable theta
  std::vector<std::complex<double>> thetas;
  std::vector<std::complex<double>> unusable;  // real theta values, flagged
  double max_drift = 0.0;
  double discretization_estimate = 0.0;  // |pole_n - pole_{n/2}| at the first theta
  bool accepted = false;
};

DriftReport theta_independence(const PotentialModel& model,
                               const std::vector<SpectralPair>& modes,
                               const Grid& ygrid, const Grid& xgrid,
                               const std::vector<std::complex<double>>& thetas,
                               double B, double lambda, int K,
                               const LevelRecord& level, double search_radius,
                               const ClassificationTolerances& tols = {});

struct RayDeviationReport {
  std::vector<std::complex<double>> eigenvalues;  // the ones measured
  std::vector<double> distances;                  // to the nearest rotated ray
  double max_distance = 0.0;
  double mean_distance = 0.0;
};

// Distance of rotated-continuum eigenvalues to the rays nu_k + e^{-2 theta} R_+,
// excluding |z| above the cap.
RayDeviationReport continuum_diagnostic(
    const std::vector<std::complex<double>>& eigenvalues,
    std::complex<double> theta, const std::vector<double>& nu, double energy_cap);

RayDeviationReport continuum_diagnostic(const ComplexSpectrum& spectrum,
                                        const std::vector<double>& nu,
                                        double energy_cap);

}  // namespace qdot
