#include "qdot/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdot/detail/lapack.hpp"

namespace qdot {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

// Neville extrapolation of complex samples y(t) to t = 0.
cplx neville_to_zero(const std::vector<double>& t, std::vector<cplx> y) {
  const std::size_t n = t.size();
  cplx prev = y[0];
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i)
      y[i] = y[i + 1] + (y[i] - y[i + 1]) * (0.0 - t[i + 1]) / (t[i] - t[i + 1]);
    if (m == n - 2) prev = y[0];
  }
  const double last_step = std::abs(y[0] - prev);
  if (last_step > 0.5 * std::abs(y[0]) && std::abs(y[0]) > 1e-14)
    throw Error(ErrorCode::ExtrapolationFailure,
                "eta extrapolation did not settle");
  return y[0];
}

}  // namespace

std::vector<LevelRecord> classify_levels(const std::vector<double>& mu,
                                         const std::vector<double>& nu,
                                         double energy_cap, double collision_tol,
                                         double degeneracy_tol) {
  if (mu.empty() || nu.empty()) return {};
  std::vector<LevelRecord> out;
  for (std::size_t n = 0; n < mu.size(); ++n)
    for (std::size_t j = 0; j < nu.size(); ++j) {
      const double e0 = mu[n] + nu[j];
      if (e0 > energy_cap) continue;
      LevelRecord rec;
      rec.n = static_cast<int>(n) + 1;
      rec.j = static_cast<int>(j) + 1;
      rec.e0 = e0;
      rec.open_channels = 0;
      for (double nk : nu)
        if (e0 - nk > 0.0) ++rec.open_channels;
      bool collides = false;
      for (double nk : nu)
        if (std::abs(e0 - nk) < collision_tol) collides = true;
      if (collides)
        rec.status = LevelStatus::ThresholdCollision;
      else
        rec.status = (e0 > nu.front()) ? LevelStatus::Embedded : LevelStatus::Isolated;
      out.push_back(rec);
    }
  std::sort(out.begin(), out.end(), [](const LevelRecord& a, const LevelRecord& b) {
    return a.e0 != b.e0 ? a.e0 < b.e0 : (a.n != b.n ? a.n < b.n : a.j < b.j);
  });
  for (std::size_t i = 0; i + 1 < out.size(); ++i)
    if (std::abs(out[i + 1].e0 - out[i].e0) < degeneracy_tol) {
      out[i].status = LevelStatus::Degenerate;
      out[i + 1].status = LevelStatus::Degenerate;
    }
  return out;
}

std::complex<double> trace_amplitude(std::span<const cplx> f, const Grid& grid,
                                     double E, int sigma) {
  const double k = (sigma >= 0 ? 1.0 : -1.0) * std::sqrt(E);
  cplx s = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double w = (i == 0 || i + 1 == grid.n) ? 0.5 : 1.0;
    s += w * std::exp(cplx{0.0, -k * grid.nodes[i]}) * f[i];
  }
  return s * grid.h / std::sqrt(2.0 * std::numbers::pi);
}

WaveOperator::~WaveOperator() = default;
WaveOperator::WaveOperator(WaveOperator&&) noexcept = default;
WaveOperator& WaveOperator::operator=(WaveOperator&&) noexcept = default;

WaveOperator::WaveOperator(const PotentialModel& model, const Grid& grid, double E,
                           double support_cutoff_rel)
    : grid_(grid), E_(E) {
  if (E < 1e-4)
    throw Error(ErrorCode::NearThreshold,
                "wave operator: energy too close to the channel threshold");
  sqrtE_ = std::sqrt(E);

  std::vector<double> v(grid.n);
  double vmax = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    v[i] = evaluate(model, Which::V, grid.nodes[i]);
    vmax = std::max(vmax, std::abs(v[i]));
  }
  absroot_.assign(grid.n, 0.0);
  signed_.assign(grid.n, 0.0);
  if (vmax == 0.0) {  // free case: omega is the identity
    win_lo_ = 1;
    win_hi_ = 0;
    rcond_ = 1.0;
    return;
  }
  const double cutoff = support_cutoff_rel * vmax;
  win_lo_ = grid.n;
  win_hi_ = 0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    if (std::abs(v[i]) > cutoff) {
      win_lo_ = std::min(win_lo_, i);
      win_hi_ = std::max(win_hi_, i);
    }
    absroot_[i] = std::sqrt(std::abs(v[i]));
    signed_[i] = absroot_[i] * (v[i] >= 0.0 ? 1.0 : -1.0);
  }

  const std::size_t w = win_hi_ - win_lo_ + 1;
  const cplx pref = kI / (2.0 * sqrtE_);
  std::vector<cplx> mat(w * w);
  for (std::size_t a = 0; a < w; ++a) {
    const double xa = grid_.nodes[win_lo_ + a];
    for (std::size_t b = 0; b < w; ++b) {
      const double xb = grid_.nodes[win_lo_ + b];
      const double wb = (b == 0 || b + 1 == w) ? 0.5 * grid_.h : grid_.h;
      cplx val = absroot_[win_lo_ + a] * pref *
                 std::exp(cplx{0.0, sqrtE_ * std::abs(xa - xb)}) *
                 signed_[win_lo_ + b] * wb;
      if (a == b) val += 1.0;
      mat[a * w + b] = val;
    }
  }
  lu_ = std::make_unique<detail::DenseLU>(std::move(mat), static_cast<int>(w));
  rcond_ = lu_->rcond();
  if (rcond_ < 1e-12)
    throw Error(ErrorCode::SingularSystem,
                "wave operator: Nystrom system numerically singular "
                "(exceptional energy)");
}

std::vector<cplx> WaveOperator::apply(std::span<const cplx> f) const {
  if (f.size() != grid_.n)
    throw Error(ErrorCode::LengthMismatch, "wave operator: sample size mismatch");
  std::vector<cplx> out(f.begin(), f.end());
  if (!lu_) return out;
  const std::size_t w = win_hi_ - win_lo_ + 1;
  std::vector<cplx> rhs(w);
  for (std::size_t a = 0; a < w; ++a) rhs[a] = f[win_lo_ + a];
  lu_->solve(rhs);
  for (std::size_t a = 0; a < w; ++a) out[win_lo_ + a] = rhs[a];
  return out;
}

std::array<cplx, 2> WaveOperator::scattering_amplitudes(
    std::span<const cplx> f) const {
  if (f.size() != grid_.n)
    throw Error(ErrorCode::LengthMismatch, "wave operator: sample size mismatch");
  std::vector<cplx> mf(f.begin(), f.end());
  if (lu_) {
    const std::size_t w = win_hi_ - win_lo_ + 1;
    const cplx pref = kI / (2.0 * sqrtE_);
    std::vector<cplx> rhs(w);
    for (std::size_t a = 0; a < w; ++a) {
      const double xa = grid_.nodes[win_lo_ + a];
      cplx conv = 0.0;
      for (std::size_t i = 0; i < grid_.n; ++i) {
        const double wi = (i == 0 || i + 1 == grid_.n) ? 0.5 * grid_.h : grid_.h;
        conv += std::exp(cplx{0.0, sqrtE_ * std::abs(xa - grid_.nodes[i])}) *
                f[i] * wi;
      }
      rhs[a] = absroot_[win_lo_ + a] * pref * conv;
    }
    lu_->solve(rhs);
    for (std::size_t a = 0; a < w; ++a)
      mf[win_lo_ + a] -= signed_[win_lo_ + a] * rhs[a];
  }
  return {trace_amplitude(mf, grid_, E_, +1), trace_amplitude(mf, grid_, E_, -1)};
}

std::vector<cplx> wave_operator_apply(const PotentialModel& model,
                                      const Grid& grid, double E,
                                      std::span<const cplx> f) {
  return WaveOperator(model, grid, E).apply(f);
}

namespace {

// U_{jk}(x) phi-row profile at theta = 0.
std::vector<double> projection_row(const PotentialModel& model,
                                   const std::vector<SpectralPair>& modes,
                                   const Grid& ygrid, int j, int k,
                                   const Grid& xgrid) {
  std::vector<double> prof(xgrid.n, 0.0);
  if (model.dot.family == DotFamily::None || model.dot.amplitude == 0.0) {
    if (model.dot.family != DotFamily::AdditiveSeparable ||
        model.dot.y_amplitude == 0.0)
      return prof;
  }
  std::vector<double> integrand(ygrid.n);
  for (std::size_t ix = 0; ix < xgrid.n; ++ix) {
    for (std::size_t iy = 0; iy < ygrid.n; ++iy)
      integrand[iy] = evaluate(model, Which::U, xgrid.nodes[ix], ygrid.nodes[iy]) *
                      modes[j].eigenfunction[iy] * modes[k].eigenfunction[iy];
    prof[ix] = quadrature(ygrid, integrand);
  }
  return prof;
}

std::vector<double> project_out(const Grid& grid, std::vector<double> f,
                                const std::vector<SpectralPair>& bound) {
  for (const auto& b : bound) {
    std::vector<double> prod(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) prod[i] = b.eigenfunction[i] * f[i];
    const double c = quadrature(grid, prod);
    for (std::size_t i = 0; i < grid.n; ++i) f[i] -= c * b.eigenfunction[i];
  }
  return f;
}

}  // namespace

LevelPerturbation::LevelPerturbation(const PotentialModel& model,
                                     const std::vector<SpectralPair>& modes,
                                     const Grid& ygrid, const Grid& xgrid,
                                     int n_index, int j_index, double energy_cap,
                                     PerturbationOptions opts)
    : model_(model), xgrid_(xgrid), opts_(opts) {
  J_ = modes.size();
  if (j_index < 1 || static_cast<std::size_t>(j_index) > J_)
    throw Error(ErrorCode::ChannelCount, "level: transverse index out of range");

  auto bound = solve_longitudinal(model, xgrid);
  if (n_index < 1 || static_cast<std::size_t>(n_index) > bound.size())
    throw Error(ErrorCode::ChannelCount, "level: longitudinal index out of range");
  phi_ = bound[n_index - 1];

  std::vector<double> mu, nu;
  for (const auto& b : bound) mu.push_back(b.eigenvalue);
  for (const auto& m : modes) nu.push_back(m.eigenvalue);
  for (const auto& rec : classify_levels(mu, nu, energy_cap))
    if (rec.n == n_index && rec.j == j_index) level_ = rec;
  if (level_.n == 0)
    throw Error(ErrorCode::ChannelCount, "level: not found below the energy cap");

  m1_ = transverse_moments(modes, ygrid, 1);
  m2_ = transverse_moments(modes, ygrid, 2);

  {
    std::vector<double> tmp(phi_.eigenfunction.begin(), phi_.eigenfunction.end());
    phi_prime_ = centered_derivative(xgrid_, tmp);
  }

  uprof_.resize(J_);
  for (std::size_t k = 0; k < J_; ++k)
    uprof_[k] = projection_row(model, modes, ygrid, j_index - 1,
                               static_cast<int>(k), xgrid_);

  // Basis vectors for the coupling U_jk(B, lambda) phi.
  std::vector<std::vector<double>> basis(3);
  basis[0] = phi_prime_;
  basis[1].assign(phi_.eigenfunction.begin(), phi_.eigenfunction.end());

  channels_.resize(J_);
  for (std::size_t k = 0; k < J_; ++k) {
    Channel& ch = channels_[k];
    ch.Ek = level_.e0 - nu[k];
    ch.open = ch.Ek > 0.0;

    basis[2].assign(xgrid_.n, 0.0);
    for (std::size_t i = 0; i < xgrid_.n; ++i)
      basis[2][i] = uprof_[k][i] * phi_.eigenfunction[i];

    if (ch.open) {
      if (ch.Ek < opts_.near_threshold) continue;  // guarded at evaluation time
      WaveOperator wop(model_, xgrid_, ch.Ek);
      std::array<std::array<cplx, 2>, 3> amps;
      for (int a = 0; a < 3; ++a) {
        auto fb = project_out(xgrid_, basis[a], bound);
        std::vector<cplx> fc(fb.begin(), fb.end());
        amps[a] = wop.scattering_amplitudes(fc);
      }
      ch.amp_dphi = amps[0];
      ch.amp_phi = amps[1];
      ch.amp_uphi = amps[2];

      // Regularized resolvent Gram on the enlarged box, extrapolated eta -> 0.
      const std::size_t pad =
          xgrid_.hi < opts_.eta_half_length
              ? static_cast<std::size_t>(
                    std::ceil((opts_.eta_half_length - xgrid_.hi) / xgrid_.h))
              : 0;
      const std::size_t nb = xgrid_.n + 2 * pad;
      const double lo = xgrid_.lo - pad * xgrid_.h;
      std::vector<double> diag0(nb - 2);
      for (std::size_t i = 0; i < nb - 2; ++i) {
        const double x = lo + (i + 1) * xgrid_.h;
        diag0[i] = 2.0 / (xgrid_.h * xgrid_.h) + evaluate(model_, Which::V, x);
      }
      const double halfL = lo + (nb - 1) * xgrid_.h;
      const double spacing = 2.0 * std::sqrt(ch.Ek) * std::numbers::pi / halfL;
      const double eta_min = std::max(opts_.eta_floor_scale * spacing, 1e-4);
      std::vector<double> etas(opts_.eta_points);
      for (int q = 0; q < opts_.eta_points; ++q)
        etas[q] = eta_min * std::pow(2.0, opts_.eta_points - 1 - q);

      std::array<std::vector<std::vector<cplx>>, 3> sols;
      std::vector<std::vector<cplx>> projected(3);
      for (int a = 0; a < 3; ++a) {
        auto fb = project_out(xgrid_, basis[a], bound);
        projected[a].assign(nb - 2, cplx{0.0});
        for (std::size_t i = 0; i + 2 < xgrid_.n; ++i)
          projected[a][pad + i] = fb[i + 1];
        sols[a].resize(etas.size());
      }
      for (std::size_t q = 0; q < etas.size(); ++q) {
        std::vector<cplx> d(nb - 2), off(nb - 3, -1.0 / (xgrid_.h * xgrid_.h));
        for (std::size_t i = 0; i < nb - 2; ++i)
          d[i] = diag0[i] - cplx{ch.Ek, etas[q]};
        for (int a = 0; a < 3; ++a) {
          std::vector<cplx> rhs = projected[a];
          detail::tridiag_solve(off, d, off, rhs);
          sols[a][q] = std::move(rhs);
        }
      }
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
          std::vector<cplx> vals(etas.size());
          for (std::size_t q = 0; q < etas.size(); ++q) {
            cplx s = 0.0;
            for (std::size_t i = 0; i < nb - 2; ++i)
              s += projected[a][i] * sols[b][q][i];
            vals[q] = s * xgrid_.h;
          }
          const cplx g = neville_to_zero(etas, vals);
          ch.gram[a][b] = g;
          ch.gram[b][a] = g;
        }
    } else {
      // Closed channel: real solve with the reduced resolvent where Ek hits
      // an eigenvalue (k = j in particular).
      std::vector<const SpectralPair*> reduce;
      for (const auto& b : bound)
        if (std::abs(b.eigenvalue - ch.Ek) < 1e-9) reduce.push_back(&b);
      std::vector<SpectralPair> reduce_copy;
      for (auto* p : reduce) reduce_copy.push_back(*p);

      std::array<std::vector<double>, 3> solved;
      for (int a = 0; a < 3; ++a) {
        auto rhs_full = project_out(xgrid_, basis[a], reduce_copy);
        const std::size_t m = xgrid_.n - 2;
        std::vector<cplx> d(m), off(m - 1, -1.0 / (xgrid_.h * xgrid_.h));
        std::vector<cplx> rhs(m);
        for (std::size_t i = 0; i < m; ++i) {
          d[i] = 2.0 / (xgrid_.h * xgrid_.h) +
                 evaluate(model_, Which::V, xgrid_.nodes[i + 1]) - ch.Ek;
          rhs[i] = rhs_full[i + 1];
        }
        detail::tridiag_solve(off, d, off, rhs);
        std::vector<double> g(xgrid_.n, 0.0);
        for (std::size_t i = 0; i < m; ++i) g[i + 1] = rhs[i].real();
        solved[a] = project_out(xgrid_, g, reduce_copy);
      }
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
          std::vector<double> prod(xgrid_.n);
          for (std::size_t i = 0; i < xgrid_.n; ++i)
            prod[i] = basis[a][i] * solved[b][i];
          const double g = quadrature(xgrid_, prod);
          ch.gram[a][b] = g;
          ch.gram[b][a] = g;
        }
    }
  }
}

std::array<cplx, 3> LevelPerturbation::coefficients(int k, double B,
                                                    double lambda) const {
  const std::size_t j = static_cast<std::size_t>(level_.j - 1);
  return {cplx{0.0, 2.0 * B * m1_[j * J_ + k]}, cplx{B * B * m2_[j * J_ + k]},
          cplx{lambda}};
}

double LevelPerturbation::first_order_shift(double B, double lambda) const {
  if (level_.status == LevelStatus::Degenerate)
    throw Error(ErrorCode::DegenerateLevel,
                "first-order shift requires a non-degenerate level");
  const std::size_t j = static_cast<std::size_t>(level_.j - 1);

  // The 2iB m_jj^(1) (phi, phi') cross term vanishes for a stationary state;
  // verified, then dropped.
  std::vector<double> prod(xgrid_.n);
  for (std::size_t i = 0; i < xgrid_.n; ++i)
    prod[i] = phi_.eigenfunction[i] * phi_prime_[i];
  const double group_velocity = quadrature(xgrid_, prod);
  if (std::abs(2.0 * B * m1_[j * J_ + j] * group_velocity) > 1e-10)
    throw Error(ErrorCode::DegenerateLevel,
                "unexpected group-velocity contribution to e1");

  for (std::size_t i = 0; i < xgrid_.n; ++i)
    prod[i] = uprof_[j][i] * phi_.eigenfunction[i] * phi_.eigenfunction[i];
  return B * B * m2_[j * J_ + j] + lambda * quadrature(xgrid_, prod);
}

GoldenRuleWidth LevelPerturbation::golden_rule_width(double B,
                                                     double lambda) const {
  if (level_.status == LevelStatus::ThresholdCollision)
    throw Error(ErrorCode::ThresholdCollision,
                "golden rule undefined at a threshold collision");
  if (level_.status == LevelStatus::Degenerate)
    throw Error(ErrorCode::DegenerateLevel, "golden rule needs a simple level");

  GoldenRuleWidth w;
  w.per_channel.assign(J_, 0.0);
  w.per_sigma.assign(J_, {0.0, 0.0});
  if (level_.status == LevelStatus::Isolated) return w;  // empty sum

  for (std::size_t k = 0; k < J_; ++k) {
    const Channel& ch = channels_[k];
    if (!ch.open) continue;
    if (ch.Ek < opts_.near_threshold)
      throw Error(ErrorCode::NearThreshold,
                  "open channel too close to its threshold");
    const auto c = coefficients(static_cast<int>(k), B, lambda);
    const double pref = std::numbers::pi / (2.0 * std::sqrt(ch.Ek));
    for (int s = 0; s < 2; ++s) {
      const cplx amp =
          c[0] * ch.amp_dphi[s] + c[1] * ch.amp_phi[s] + c[2] * ch.amp_uphi[s];
      w.per_sigma[k][s] = -pref * std::norm(amp);
    }
    w.per_channel[k] = w.per_sigma[k][0] + w.per_sigma[k][1];
    w.total += w.per_channel[k];
  }
  return w;
}

ResonanceEstimate estimate_resonance(const LevelPerturbation& lp, double B,
                                     double lambda) {
  ResonanceEstimate est;
  est.level = lp.level();
  est.B = B;
  est.lambda = lambda;
  est.e1 = lp.first_order_shift(B, lambda);
  est.e2 = lp.second_order_full(B, lambda);
  est.im_e2_by_channel = lp.golden_rule_width(B, lambda).per_channel;
  est.predicted_pole = est.level.e0 + est.e1 + est.e2;
  return est;
}

cplx LevelPerturbation::second_order_full(double B, double lambda) const {
  if (level_.status == LevelStatus::ThresholdCollision)
    throw Error(ErrorCode::ThresholdCollision,
                "second order undefined at a threshold collision");
  if (level_.status == LevelStatus::Degenerate)
    throw Error(ErrorCode::DegenerateLevel, "second order needs a simple level");

  cplx total = 0.0;
  for (std::size_t k = 0; k < J_; ++k) {
    const Channel& ch = channels_[k];
    if (ch.open && ch.Ek < opts_.near_threshold)
      throw Error(ErrorCode::NearThreshold,
                  "open channel too close to its threshold");
    const auto c = coefficients(static_cast<int>(k), B, lambda);
    cplx q = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        q += std::conj(c[a]) * c[b] * ch.gram[a][b];
    total -= q;
  }
  return total;
}

}  // namespace qdot
