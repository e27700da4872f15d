#include "qdot/strongfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdot/detail/lapack.hpp"

namespace qdot {

namespace {

using cplx = std::complex<double>;

double fiber_value(const PotentialModel& model, double B, double p, int band,
                   const Grid& ygrid) {
  return solve_fiber(model, B, p, ygrid, band).back().eigenvalue;
}

// Golden-section minimum refinement on [a, b].
std::pair<double, double> golden_min(const PotentialModel& model, double B,
                                     int band, const Grid& ygrid, double a,
                                     double b) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = fiber_value(model, B, c, band, ygrid);
  double fd = fiber_value(model, B, d, band, ygrid);
  while (b - a > 1e-7 * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = fiber_value(model, B, c, band, ygrid);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = fiber_value(model, B, d, band, ygrid);
    }
  }
  const double pm = 0.5 * (a + b);
  return {pm, fiber_value(model, B, pm, band, ygrid)};
}

// Raised-cosine plateau trial: 1 on [-d, d], C^1 shoulder of unit width
// stretched by 1/eps, zero beyond. ||g'||^2 = pi^2/4 in closed form.
double trial_value(double x, double d, double eps) {
  const double t = (std::abs(x) - d) * eps;
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * t));
}

constexpr double kShoulderEnergy = std::numbers::pi * std::numbers::pi / 4.0;

std::vector<double> u11_profile(const PotentialModel& model,
                                const SpectralPair& chi, const Grid& ygrid,
                                const Grid& xgrid) {
  std::vector<double> prof(xgrid.n);
  std::vector<double> integrand(ygrid.n);
  for (std::size_t ix = 0; ix < xgrid.n; ++ix) {
    for (std::size_t iy = 0; iy < ygrid.n; ++iy)
      integrand[iy] = evaluate(model, Which::U, xgrid.nodes[ix], ygrid.nodes[iy]) *
                      chi.eigenfunction[iy] * chi.eigenfunction[iy];
    prof[ix] = quadrature(ygrid, integrand);
  }
  return prof;
}

}  // namespace

DispersionCurve dispersion_curve(const PotentialModel& model, double B, int band,
                                 double p_lo, double p_hi, std::size_t samples,
                                 const Grid& ygrid, double endpoint_margin) {
  if (samples < 5 || !(p_lo < p_hi))
    throw Error(ErrorCode::InvalidBounds, "dispersion: bad momentum range");
  DispersionCurve curve;
  curve.band = band;
  curve.B = B;
  curve.p.resize(samples);
  curve.value.resize(samples);
  const double dp = (p_hi - p_lo) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    curve.p[i] = p_lo + dp * static_cast<double>(i);
    curve.value[i] = fiber_value(model, B, curve.p[i], band, ygrid);
  }

  double vmin = curve.value[0];
  for (double v : curve.value) vmin = std::min(vmin, v);
  if (curve.value.front() < vmin + endpoint_margin ||
      curve.value.back() < vmin + endpoint_margin)
    throw Error(ErrorCode::RangeTooNarrow,
                "dispersion: endpoint values too close to the interior minimum");

  for (std::size_t i = 1; i + 1 < samples; ++i)
    if (curve.value[i] <= curve.value[i - 1] && curve.value[i] <= curve.value[i + 1])
      curve.minima.push_back(
          golden_min(model, B, band, ygrid, curve.p[i - 1], curve.p[i + 1]));
  return curve;
}

std::pair<double, std::vector<double>> essential_bottom(const DispersionCurve& curve) {
  if (curve.minima.empty())
    throw Error(ErrorCode::RangeTooNarrow, "essential bottom: no interior minima");
  double bottom = curve.minima.front().second;
  for (const auto& m : curve.minima) bottom = std::min(bottom, m.second);
  std::vector<double> p0s;
  for (const auto& m : curve.minima)
    if (m.second <= bottom + 1e-9 * (1.0 + std::abs(bottom))) p0s.push_back(m.first);
  std::sort(p0s.begin(), p0s.end());
  // collapse near-duplicates from adjacent refinement brackets
  std::vector<double> unique_p0;
  for (double p : p0s)
    if (unique_p0.empty() || p - unique_p0.back() > 1e-5 * (1.0 + std::abs(p)))
      unique_p0.push_back(p);
  return {bottom, unique_p0};
}

double attractivity_integral(const PotentialModel& model, double B, double p0,
                             const Grid& ygrid, const Grid& xgrid) {
  const auto chi = solve_fiber(model, B, p0, ygrid, 1).front();
  const auto prof = u11_profile(model, chi, ygrid, xgrid);
  return quadrature(xgrid, prof);
}

StrongFieldCertificate variational_certificate(
    const PotentialModel& model, double B, double p0,
    const std::vector<double>& eps_grid, const std::vector<double>& d_grid,
    const Grid& ygrid, const Grid& xgrid) {
  StrongFieldCertificate cert;
  cert.B = B;
  cert.p0 = p0;

  const auto chi = solve_fiber(model, B, p0, ygrid, 1).front();
  cert.essential_bottom = chi.eigenvalue;
  const auto u11 = u11_profile(model, chi, ygrid, xgrid);
  cert.attractivity = quadrature(xgrid, u11);

  {
    const double dp = 1e-4;
    cert.fh_derivative = std::abs(fiber_value(model, B, p0 + dp, 1, ygrid) -
                                  fiber_value(model, B, p0 - dp, 1, ygrid)) /
                         (2.0 * dp);
  }

  bool found = false;
  std::vector<double> weighted(xgrid.n);
  for (double eps : eps_grid)
    for (double d : d_grid) {
      for (std::size_t i = 0; i < xgrid.n; ++i) {
        const double g = trial_value(xgrid.nodes[i], d, eps);
        weighted[i] = u11[i] * g * g;
      }
      TrialPoint tp{eps, d, eps * kShoulderEnergy + quadrature(xgrid, weighted)};
      cert.grid_values.push_back(tp);
      if (!found && tp.q < 0.0) {
        cert.chosen = tp;
        found = true;
      }
    }

  if (found && cert.attractivity < 0.0) cert.verdict = Verdict::Certified;
  cert.eps_rule_satisfied =
      found && cert.chosen.eps * kShoulderEnergy < 0.5 * std::abs(cert.attractivity);

  // Unreduced form on the same grids at the chosen point: kinetic terms use
  // the discrete stencil forms so the transverse bracket cancels exactly.
  if (found && cert.chosen.d + 1.0 / cert.chosen.eps <= xgrid.hi) {
    std::vector<double> phi(xgrid.n);
    for (std::size_t i = 0; i < xgrid.n; ++i)
      phi[i] = trial_value(xgrid.nodes[i], cert.chosen.d, cert.chosen.eps);

    double kin_x = 0.0;
    for (std::size_t i = 0; i + 1 < xgrid.n; ++i) {
      const double df = phi[i + 1] - phi[i];
      kin_x += df * df;
    }
    kin_x /= xgrid.h;

    double kin_y = 0.0;
    for (std::size_t i = 0; i + 1 < ygrid.n; ++i) {
      const double df = chi.eigenfunction[i + 1] - chi.eigenfunction[i];
      kin_y += df * df;
    }
    kin_y /= ygrid.h;

    std::vector<double> pot(ygrid.n);
    for (std::size_t i = 0; i < ygrid.n; ++i) {
      const double y = ygrid.nodes[i];
      const double by = B * y - p0;
      pot[i] = (by * by + evaluate(model, Which::W, 0.0, y)) *
               chi.eigenfunction[i] * chi.eigenfunction[i];
    }
    std::vector<double> phi2(xgrid.n), uphi(xgrid.n);
    for (std::size_t i = 0; i < xgrid.n; ++i) {
      phi2[i] = phi[i] * phi[i];
      uphi[i] = u11[i] * phi2[i];
    }
    const double norm_x = quadrature(xgrid, phi2);
    cert.q_full = kin_x +
                  norm_x * (kin_y + quadrature(ygrid, pot) - cert.essential_bottom) +
                  quadrature(xgrid, uphi);
    cert.consistency_gap = cert.q_full - cert.chosen.q;
  }
  return cert;
}

double direct_ground_state(const PotentialModel& model, double B,
                           const Grid& xgrid, const Grid& ygrid) {
  if (xgrid.n > 301 || ygrid.n > 301)
    throw Error(ErrorCode::BudgetExceeded, "2D oracle: grid beyond the desk budget");
  const std::size_t mx = xgrid.n - 2;
  const std::size_t my = ygrid.n - 2;
  const int N = static_cast<int>(mx * my);
  const double ihx2 = 1.0 / (xgrid.h * xgrid.h);
  const double ihy2 = 1.0 / (ygrid.h * ygrid.h);

  double pot_min = 1e300;
  std::vector<double> diag(mx * my);
  std::vector<double> ycoef(my);
  for (std::size_t iy = 0; iy < my; ++iy) ycoef[iy] = B * ygrid.nodes[iy + 1];
  for (std::size_t ix = 0; ix < mx; ++ix)
    for (std::size_t iy = 0; iy < my; ++iy) {
      const double x = xgrid.nodes[ix + 1];
      const double y = ygrid.nodes[iy + 1];
      const double pot = ycoef[iy] * ycoef[iy] + evaluate(model, Which::W, 0.0, y) +
                         evaluate(model, Which::U, x, y);
      diag[ix * my + iy] = 2.0 * ihx2 + 2.0 * ihy2 + pot;
      pot_min = std::min(pot_min, pot);
    }
  const double sigma = pot_min - 1.0;

  const int band = static_cast<int>(my);
  detail::BandLU lu(N, band, [&](int i, int j) -> cplx {
    if (i == j) return diag[i] - sigma;
    const int ix_i = i / band, iy_i = i % band;
    const int ix_j = j / band, iy_j = j % band;
    if (ix_i == ix_j && std::abs(iy_i - iy_j) == 1) return -ihy2;
    if (iy_i == iy_j && std::abs(ix_i - ix_j) == 1) {
      // 2iBy d/dx with the centered stencil; Hermitian by construction
      const double by = ycoef[iy_i];
      const double sgn = (ix_j > ix_i) ? 1.0 : -1.0;
      return cplx{-ihx2, sgn * by / xgrid.h};
    }
    return 0.0;
  });

  // Shift-invert Lanczos with full reorthogonalization.
  const int max_steps = 120;
  std::vector<std::vector<cplx>> basis;
  std::vector<double> alpha, beta;
  std::vector<cplx> v(N);
  for (int i = 0; i < N; ++i) v[i] = cplx{1.0 + 1e-3 * std::sin(0.7 * i), 0.0};
  double nrm = 0.0;
  for (const auto& z : v) nrm += std::norm(z);
  nrm = std::sqrt(nrm);
  for (auto& z : v) z /= nrm;

  double theta_prev = 0.0;
  for (int step = 0; step < max_steps; ++step) {
    basis.push_back(v);
    std::vector<cplx> w = v;
    lu.solve(w);
    double a = 0.0;
    for (int i = 0; i < N; ++i) a += std::real(std::conj(v[i]) * w[i]);
    alpha.push_back(a);
    // full reorthogonalization
    for (const auto& b : basis) {
      cplx c = 0.0;
      for (int i = 0; i < N; ++i) c += std::conj(b[i]) * w[i];
      for (int i = 0; i < N; ++i) w[i] -= c * b[i];
    }
    double bnorm = 0.0;
    for (const auto& z : w) bnorm += std::norm(z);
    bnorm = std::sqrt(bnorm);
    if (bnorm < 1e-14) break;
    beta.push_back(bnorm);
    for (int i = 0; i < N; ++i) v[i] = w[i] / bnorm;

    if (step >= 8 && step % 4 == 0) {
      std::vector<double> td(alpha), te(beta.begin(), beta.end() - 1);
      auto eig = detail::sym_tridiag_lowest(td, te, static_cast<int>(td.size()));
      const double theta = eig.values.back();  // largest of the inverse operator
      if (std::abs(theta - theta_prev) < 1e-12 * std::max(1.0, std::abs(theta)) &&
          step > 12)
        return sigma + 1.0 / theta;
      theta_prev = theta;
    }
  }
  std::vector<double> td(alpha);
  std::vector<double> te(beta.begin(), beta.begin() + (td.size() - 1));
  auto eig = detail::sym_tridiag_lowest(td, te, static_cast<int>(td.size()));
  return sigma + 1.0 / eig.values.back();
}

}  // namespace qdot
