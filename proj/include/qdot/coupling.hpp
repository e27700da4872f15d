#pragma once

#include <complex>
#include <vector>

#include "qdot/grid.hpp"
#include "qdot/potentials.hpp"
#include "qdot/spectral.hpp"

namespace qdot {

// Transverse moment matrix m^{(r)}_{jk} = int y^r chi_j chi_k dy, J x J row-major.
std::vector<double> transverse_moments(const std::vector<SpectralPair>& modes,
                                       const Grid& ygrid, int r);

// Bundled coupling data for one mode basis.
struct ModeCouplings {
  std::size_t J = 0;
  std::vector<double> m1, m2;                    // J x J row-major
  std::vector<std::vector<double>> dot_profiles; // J x J sampled U_jk, empty without a dot
};

ModeCouplings make_mode_couplings(const PotentialModel& model,
                                  const std::vector<SpectralPair>& modes,
                                  const Grid& ygrid, const Grid& xgrid);

// Channel projections U_{jk}(x) = int U(x, y) chi_j chi_k dy, sampled on xgrid.
// Row-major J x J array of profiles.
std::vector<std::vector<double>> dot_projections(
    const PotentialModel& model, const std::vector<SpectralPair>& modes,
    const Grid& ygrid, const Grid& xgrid);

// Truncated coupled-channel operator acting on the interior nodes of xgrid,
// stored dense row-major with channel-major block layout.
struct ChannelOperator {
  int K = 0;
  std::size_t m = 0;  // interior nodes per channel
  std::complex<double> theta{0.0, 0.0};
  double B = 0.0;
  double lambda = 0.0;
  std::vector<double> nu;  // K thresholds
  Grid xgrid;
  std::vector<std::complex<double>> matrix;  // (K m)^2

  std::complex<double>& at(std::size_t row, std::size_t col) {
    return matrix[row * (K * m) + col];
  }
  const std::complex<double>& at(std::size_t row, std::size_t col) const {
    return matrix[row * (K * m) + col];
  }
};

ChannelOperator assemble_channel_operator(const PotentialModel& model,
                                          const std::vector<SpectralPair>& modes,
                                          const Grid& ygrid,
                                          std::complex<double> theta, double B,
                                          double lambda, int K, const Grid& xgrid);

// The j-th diagonal block of the channel operator as a tridiagonal matrix
// (0-based j). Used as the width reference in pole location.
struct ChannelBlockTridiag {
  std::vector<std::complex<double>> lower, diag, upper;
};

ChannelBlockTridiag channel_diagonal_block(const PotentialModel& model,
                                           const std::vector<SpectralPair>& modes,
                                           const Grid& ygrid,
                                           std::complex<double> theta, double B,
                                           double lambda, int j, const Grid& xgrid);

}  // namespace qdot
