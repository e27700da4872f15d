#include "qdot/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qdot/detail/lapack.hpp"

namespace qdot {

namespace {

using detail::cplx;

// Quadrature-normalize an interior l2-normalized vector and fix its phase.
SpectralPair finalize_pair(const Grid& grid, double value,
                           const std::vector<double>& interior, int index) {
  SpectralPair p;
  p.eigenvalue = value;
  p.index = index;
  p.eigenfunction.assign(grid.n, 0.0);
  const double s = 1.0 / std::sqrt(grid.h);
  for (std::size_t i = 0; i + 2 < grid.n; ++i)
    p.eigenfunction[i + 1] = interior[i] * s;

  double mx = 0.0;
  for (double v : p.eigenfunction) mx = std::max(mx, std::abs(v));
  // leftmost sample within the tie window; keeps the sign stable across grids
  std::size_t pick = 0;
  for (std::size_t i = 0; i < grid.n; ++i)
    if (std::abs(p.eigenfunction[i]) >= mx * (1.0 - 1e-9)) { pick = i; break; }
  if (p.eigenfunction[pick] < 0.0)
    for (double& v : p.eigenfunction) v = -v;

  std::vector<double> sq(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) sq[i] = p.eigenfunction[i] * p.eigenfunction[i];
  p.normalization_residual = std::abs(quadrature(grid, sq) - 1.0);
  return p;
}

std::vector<SpectralPair> solve_sturm(const Grid& grid,
                                      const std::vector<double>& potential,
                                      int count, double below,
                                      bool lowest_count, double degeneracy_tol) {
  const std::size_t m = grid.n - 2;
  std::vector<double> d(m), e(m - 1);
  const double w = 1.0 / (grid.h * grid.h);
  for (std::size_t i = 0; i < m; ++i) d[i] = 2.0 * w + potential[i + 1];
  std::fill(e.begin(), e.end(), -w);

  detail::RealEigs eig = lowest_count ? detail::sym_tridiag_lowest(d, e, count)
                                      : detail::sym_tridiag_below(d, e, below);
  std::vector<SpectralPair> out;
  for (std::size_t k = 0; k < eig.values.size(); ++k)
    out.push_back(finalize_pair(grid, eig.values[k], eig.vectors[k],
                                static_cast<int>(k) + 1));
  for (std::size_t k = 0; k + 1 < out.size(); ++k)
    if (out[k + 1].eigenvalue - out[k].eigenvalue < degeneracy_tol)
      throw Error(ErrorCode::DegenerateSpectrum,
                  "spectrum gap below the simplicity threshold");
  return out;
}

}  // namespace

std::vector<SpectralPair> solve_transverse(const PotentialModel& model,
                                           const Grid& grid, int J) {
  std::vector<double> w(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i)
    w[i] = model.confinement.c * grid.nodes[i] * grid.nodes[i] +
           model.confinement.q * std::pow(grid.nodes[i], 4);
  return solve_sturm(grid, w, J, 0.0, true, 1e-9);
}

std::vector<SpectralPair> solve_fiber(const PotentialModel& model, double B,
                                      double p, const Grid& grid, int J) {
  std::vector<double> w(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double y = grid.nodes[i];
    const double shifted = B * y - p;
    w[i] = shifted * shifted + model.confinement.c * y * y +
           model.confinement.q * y * y * y * y;
  }
  return solve_sturm(grid, w, J, 0.0, true, 1e-9);
}

std::vector<SpectralPair> solve_longitudinal(const PotentialModel& model,
                                             const Grid& grid) {
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i)
    v[i] = evaluate(model, Which::V, grid.nodes[i]);
  auto pairs = solve_sturm(grid, v, 0, -1e-14, false, 1e-9);
  for (const auto& p : pairs) {
    if (std::abs(p.eigenfunction[1]) > 1e-8 ||
        std::abs(p.eigenfunction[grid.n - 2]) > 1e-8)
      throw Error(ErrorCode::TruncationTooSmall,
                  "bound state does not decay at the truncation boundary");
  }
  if (model.well.depth > 0.0 && pairs.empty())
    throw Error(ErrorCode::TruncationTooSmall,
                "attractive-in-the-mean well must bind at least one state");
  return pairs;
}

namespace detail {

std::complex<double> tridiag_eigenvalue_near(const std::vector<cplx>& lower,
                                             const std::vector<cplx>& diag,
                                             const std::vector<cplx>& upper,
                                             std::complex<double> seed) {
  const std::size_t n = diag.size();
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx{uni(rng), 0.0};

  cplx sigma = seed, lambda = seed;
  for (int it = 0; it < 60; ++it) {
    std::vector<cplx> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - sigma;
    std::vector<cplx> rhs = v;
    try {
      tridiag_solve(lower, d, upper, rhs);
    } catch (const Error&) {
      sigma += cplx{1e-10, 1e-10};
      continue;
    }
    double norm = 0.0;
    for (const auto& x : rhs) norm += std::norm(x);
    norm = std::sqrt(norm);
    for (auto& x : rhs) x /= norm;
    v = rhs;

    // Rayleigh quotient with the standard inner product.
    cplx num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx tv = diag[i] * v[i];
      if (i > 0) tv += lower[i - 1] * v[i - 1];
      if (i + 1 < n) tv += upper[i] * v[i + 1];
      num += std::conj(v[i]) * tv;
      den += std::conj(v[i]) * v[i];
    }
    const cplx next = num / den;
    if (std::abs(next - lambda) < 1e-13 * std::max(1.0, std::abs(next)) && it > 2)
      return next;
    lambda = next;
    if (it >= 4 && it % 2 == 0) sigma = lambda;
  }
  return lambda;
}

}  // namespace detail

namespace {

struct ScaledTridiag {
  std::vector<cplx> lower, diag, upper;
};

ScaledTridiag build_scaled(const PotentialModel& model, std::complex<double> theta,
                           const Grid& grid) {
  const std::size_t m = grid.n - 2;
  const cplx kin = std::exp(-2.0 * theta) / (grid.h * grid.h);
  ScaledTridiag t;
  t.diag.resize(m);
  t.lower.assign(m - 1, -kin);
  t.upper.assign(m - 1, -kin);
  for (std::size_t i = 0; i < m; ++i)
    t.diag[i] = 2.0 * kin + evaluate_dilated(model, Which::V, grid.nodes[i + 1], theta);
  return t;
}

// Fourth-derivative quadratic form <phi, d^4 phi> by the 5-point stencil;
// drives the predicted O(h^2) complex shift of scaled bound eigenvalues.
double fourth_form(const Grid& grid, const std::vector<double>& phi) {
  const double h4 = std::pow(grid.h, 4);
  double s = 0.0;
  for (std::size_t i = 2; i + 2 < grid.n; ++i) {
    const double d4 = (phi[i - 2] - 4.0 * phi[i - 1] + 6.0 * phi[i] -
                       4.0 * phi[i + 1] + phi[i + 2]) / h4;
    s += phi[i] * d4;
  }
  return s * grid.h;
}

}  // namespace

ComplexSpectrum solve_scaled_longitudinal(const PotentialModel& model,
                                          std::complex<double> theta,
                                          const Grid& grid,
                                          const ClassificationTolerances& tols) {
  ScaledTridiag t = build_scaled(model, theta, grid);
  const std::size_t m = t.diag.size();

  std::vector<cplx> a(m * m, cplx{0.0});
  for (std::size_t i = 0; i < m; ++i) {
    a[i * m + i] = t.diag[i];
    if (i + 1 < m) {
      a[i * m + i + 1] = t.upper[i];
      a[(i + 1) * m + i] = t.lower[i];
    }
  }
  ComplexSpectrum spec;
  spec.theta = theta;
  spec.eigenvalues = detail::hessenberg_eigenvalues(a, static_cast<int>(m));
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(),
            [](const cplx& x, const cplx& y) {
              return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
            });

  // Predicted positions of the bound states under the scaled discretization:
  // mu + (h^2/12)(e^{2 theta} - 1) <phi, d^4 phi>, the leading stencil bias.
  std::vector<cplx> predicted;
  std::vector<double> windows;
  if (model.well.depth != 0.0) {
    auto bound = solve_longitudinal(model, grid);
    const cplx bias_factor =
        (grid.h * grid.h / 12.0) * (std::exp(2.0 * theta) - 1.0);
    for (const auto& b : bound) {
      const double i4 = fourth_form(grid, b.eigenfunction);
      const cplx shift = -bias_factor * i4;
      predicted.push_back(b.eigenvalue + shift);
      windows.push_back(std::max(tols.bound_im_rel * std::max(1.0, std::abs(b.eigenvalue)),
                                 0.25 * std::abs(shift) + 1e-12));
    }
  }

  const double beta = theta.imag();
  spec.classification.resize(spec.eigenvalues.size());
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
    const cplx z = spec.eigenvalues[k];
    SpectralClass cls = SpectralClass::RotatedContinuum;

    bool is_bound = false;
    for (std::size_t b = 0; b < predicted.size(); ++b)
      if (std::abs(z - predicted[b]) <= windows[b]) { is_bound = true; break; }

    if (is_bound) {
      cls = SpectralClass::Bound;
    } else {
      const cplx rotated = z * std::exp(cplx{0.0, 2.0 * beta});
      const bool on_ray =
          (rotated.real() > 0.0 &&
           std::abs(std::arg(rotated)) < tols.ray_angle) ||
          std::abs(rotated.imag()) < tols.ray_distance_rel * (1.0 + std::abs(z));
      if (!on_ray && z.imag() < 0.0 && std::arg(rotated) > 0.0 &&
          std::abs(z) > tols.threshold_exclusion)
        cls = SpectralClass::ResonanceCandidate;
    }
    spec.classification[k] = cls;
  }
  return spec;
}

std::complex<double> scaled_eigenvalue_near(const PotentialModel& model,
                                            std::complex<double> theta,
                                            const Grid& grid,
                                            std::complex<double> seed) {
  ScaledTridiag t = build_scaled(model, theta, grid);
  return detail::tridiag_eigenvalue_near(t.lower, t.diag, t.upper, seed);
}

}  // namespace qdot
