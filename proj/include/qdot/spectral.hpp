#pragma once

#include <complex>
#include <vector>

#include "qdot/grid.hpp"
#include "qdot/potentials.hpp"

namespace qdot {

// One eigenpair. Eigenfunctions are sampled on the full grid (zero at the
// endpoints), quadrature-normalized, with the largest-modulus sample made
// real and positive (ties broken toward the leftmost node).
struct SpectralPair {
  double eigenvalue = 0.0;
  std::vector<double> eigenfunction;
  int index = 0;  // 1-based band index
  double normalization_residual = 0.0;
};

enum class SpectralClass { Bound, RotatedContinuum, ResonanceCandidate };

struct ClassificationTolerances {
  double ray_angle = 0.02;          // rad, membership of the rotated ray
  double ray_distance_rel = 5e-3;   // absolute-distance ray filter, scaled by 1+|z|
  double bound_im_rel = 1e-7;       // bound-state window, scaled by max(1,|Re|)
  double degeneracy = 1e-9;         // simplicity threshold for real solvers
  double threshold_exclusion = 0.15;  // disk around the threshold, no candidates
};

struct ComplexSpectrum {
  std::vector<std::complex<double>> eigenvalues;
  std::vector<SpectralClass> classification;
  std::complex<double> theta;
};

// First J eigenpairs of the transverse operator -d^2/dy^2 + W(y).
std::vector<SpectralPair> solve_transverse(const PotentialModel& model,
                                           const Grid& grid, int J);

// All negative-energy eigenpairs of h^V = -d^2/dx^2 + V(x).
std::vector<SpectralPair> solve_longitudinal(const PotentialModel& model,
                                             const Grid& grid);

// First J eigenpairs of the magnetic fiber h_B^W(p) = -d^2/dy^2 + (By-p)^2 + W(y).
std::vector<SpectralPair> solve_fiber(const PotentialModel& model, double B,
                                      double p, const Grid& grid, int J);

// Full spectrum of the complex-scaled h^V_theta with classification.
ComplexSpectrum solve_scaled_longitudinal(const PotentialModel& model,
                                          std::complex<double> theta,
                                          const Grid& grid,
                                          const ClassificationTolerances& tols = {});

// Eigenvalue of h^V_theta nearest to `seed`, by shift-invert iteration on the
// tridiagonal matrix. Works at grid sizes far beyond the dense path.
std::complex<double> scaled_eigenvalue_near(const PotentialModel& model,
                                            std::complex<double> theta,
                                            const Grid& grid,
                                            std::complex<double> seed);

namespace detail {
// Shift-invert iteration for a general complex tridiagonal matrix.
std::complex<double> tridiag_eigenvalue_near(
    const std::vector<std::complex<double>>& lower,
    const std::vector<std::complex<double>>& diag,
    const std::vector<std::complex<double>>& upper, std::complex<double> seed);
}  // namespace detail

}  // namespace qdot
