#include "qdot/coupling.hpp"

#include <cmath>

namespace qdot {

namespace {

using cplx = std::complex<double>;

void check_modes(const std::vector<SpectralPair>& modes, const Grid& ygrid) {
  if (modes.empty())
    throw Error(ErrorCode::GridMismatch, "couplings: empty mode list");
  for (const auto& m : modes)
    if (m.eigenfunction.size() != ygrid.n)
      throw Error(ErrorCode::GridMismatch, "couplings: mode/grid size mismatch");
}

// U_{jk} profile at a possibly complex longitudinal argument e^theta x.
std::vector<cplx> dilated_projection(const PotentialModel& model,
                                     const std::vector<SpectralPair>& modes,
                                     const Grid& ygrid, int j, int k,
                                     const Grid& xgrid, cplx theta) {
  std::vector<cplx> prof(xgrid.n);
  std::vector<cplx> integrand(ygrid.n);
  for (std::size_t ix = 0; ix < xgrid.n; ++ix) {
    for (std::size_t iy = 0; iy < ygrid.n; ++iy) {
      const cplx u = evaluate_dilated(model, Which::U, xgrid.nodes[ix], theta,
                                      ygrid.nodes[iy]);
      integrand[iy] = u * modes[j].eigenfunction[iy] * modes[k].eigenfunction[iy];
    }
    prof[ix] = quadrature(ygrid, integrand);
  }
  return prof;
}

}  // namespace

std::vector<double> transverse_moments(const std::vector<SpectralPair>& modes,
                                       const Grid& ygrid, int r) {
  check_modes(modes, ygrid);
  const std::size_t J = modes.size();
  std::vector<double> m(J * J);
  std::vector<double> integrand(ygrid.n);
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t k = j; k < J; ++k) {
      for (std::size_t i = 0; i < ygrid.n; ++i)
        integrand[i] = std::pow(ygrid.nodes[i], r) * modes[j].eigenfunction[i] *
                       modes[k].eigenfunction[i];
      const double v = quadrature(ygrid, integrand);
      m[j * J + k] = v;
      m[k * J + j] = v;
    }
  return m;
}

ModeCouplings make_mode_couplings(const PotentialModel& model,
                                  const std::vector<SpectralPair>& modes,
                                  const Grid& ygrid, const Grid& xgrid) {
  ModeCouplings c;
  c.J = modes.size();
  c.m1 = transverse_moments(modes, ygrid, 1);
  c.m2 = transverse_moments(modes, ygrid, 2);
  if (model.dot.family != DotFamily::None)
    c.dot_profiles = dot_projections(model, modes, ygrid, xgrid);
  return c;
}

std::vector<std::vector<double>> dot_projections(
    const PotentialModel& model, const std::vector<SpectralPair>& modes,
    const Grid& ygrid, const Grid& xgrid) {
  if (model.dot.family == DotFamily::None)
    throw Error(ErrorCode::ConfigInvalid, "dot projections: no dot potential in model");
  check_modes(modes, ygrid);
  const std::size_t J = modes.size();
  std::vector<std::vector<double>> out(J * J);
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t k = j; k < J; ++k) {
      auto prof = dilated_projection(model, modes, ygrid, static_cast<int>(j),
                                     static_cast<int>(k), xgrid, cplx{0.0});
      std::vector<double> re(prof.size());
      for (std::size_t i = 0; i < prof.size(); ++i) re[i] = prof[i].real();
      out[j * J + k] = re;
      out[k * J + j] = std::move(re);
    }
  return out;
}

ChannelOperator assemble_channel_operator(const PotentialModel& model,
                                          const std::vector<SpectralPair>& modes,
                                          const Grid& ygrid,
                                          std::complex<double> theta, double B,
                                          double lambda, int K, const Grid& xgrid) {
  check_modes(modes, ygrid);
  if (K < 1 || static_cast<std::size_t>(K) > modes.size())
    throw Error(ErrorCode::ChannelCount, "channel operator: K exceeds solved modes");

  const auto m1 = transverse_moments(modes, ygrid, 1);
  const auto m2 = transverse_moments(modes, ygrid, 2);
  const std::size_t J = modes.size();
  const std::size_t m = xgrid.n - 2;
  const std::size_t N = static_cast<std::size_t>(K) * m;

  ChannelOperator op;
  op.K = K;
  op.m = m;
  op.theta = theta;
  op.B = B;
  op.lambda = lambda;
  op.xgrid = xgrid;
  for (int j = 0; j < K; ++j) op.nu.push_back(modes[j].eigenvalue);
  op.matrix.assign(N * N, cplx{0.0});

  const cplx kin = std::exp(-2.0 * theta) / (xgrid.h * xgrid.h);
  const cplx dcoef = std::exp(-theta) / (2.0 * xgrid.h);

  std::vector<cplx> vtheta(m);
  for (std::size_t i = 0; i < m; ++i)
    vtheta[i] = evaluate_dilated(model, Which::V, xgrid.nodes[i + 1], theta);

  const bool with_dot =
      lambda != 0.0 && model.dot.family != DotFamily::None && model.dot.amplitude != 0.0;

  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k) {
      const std::size_t r0 = static_cast<std::size_t>(j) * m;
      const std::size_t c0 = static_cast<std::size_t>(k) * m;
      const double mjk1 = m1[static_cast<std::size_t>(j) * J + k];
      const double mjk2 = m2[static_cast<std::size_t>(j) * J + k];

      std::vector<cplx> ujk;
      if (with_dot) {
        auto prof = dilated_projection(model, modes, ygrid, j, k, xgrid, theta);
        ujk.assign(prof.begin() + 1, prof.end() - 1);
      }

      for (std::size_t i = 0; i < m; ++i) {
        cplx diag = B * B * mjk2;
        if (with_dot) diag += lambda * ujk[i];
        if (j == k) diag += 2.0 * kin + vtheta[i] + modes[j].eigenvalue;
        op.at(r0 + i, c0 + i) += diag;
        if (i + 1 < m) {
          cplx up = cplx{0.0, 2.0 * B * mjk1} * dcoef;
          cplx dn = -up;
          if (j == k) {
            up += -kin;
            dn += -kin;
          }
          op.at(r0 + i, c0 + i + 1) += up;
          op.at(r0 + i + 1, c0 + i) += dn;
        }
      }
    }
  return op;
}

ChannelBlockTridiag channel_diagonal_block(const PotentialModel& model,
                                           const std::vector<SpectralPair>& modes,
                                           const Grid& ygrid,
                                           std::complex<double> theta, double B,
                                           double lambda, int j, const Grid& xgrid) {
  check_modes(modes, ygrid);
  if (j < 0 || static_cast<std::size_t>(j) >= modes.size())
    throw Error(ErrorCode::ChannelCount, "diagonal block: channel out of range");

  const auto m1 = transverse_moments(modes, ygrid, 1);
  const auto m2 = transverse_moments(modes, ygrid, 2);
  const std::size_t J = modes.size();
  const std::size_t m = xgrid.n - 2;
  const cplx kin = std::exp(-2.0 * theta) / (xgrid.h * xgrid.h);
  const cplx dcoef = std::exp(-theta) / (2.0 * xgrid.h);
  const double mjj1 = m1[static_cast<std::size_t>(j) * J + j];
  const double mjj2 = m2[static_cast<std::size_t>(j) * J + j];

  const bool with_dot =
      lambda != 0.0 && model.dot.family != DotFamily::None && model.dot.amplitude != 0.0;
  std::vector<cplx> ujj;
  if (with_dot) {
    auto prof = dilated_projection(model, modes, ygrid, j, j, xgrid, theta);
    ujj.assign(prof.begin() + 1, prof.end() - 1);
  }

  ChannelBlockTridiag t;
  t.diag.resize(m);
  t.lower.resize(m - 1);
  t.upper.resize(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    cplx d = 2.0 * kin + evaluate_dilated(model, Which::V, xgrid.nodes[i + 1], theta) +
             modes[j].eigenvalue + B * B * mjj2;
    if (with_dot) d += lambda * ujj[i];
    t.diag[i] = d;
  }
  const cplx dterm = cplx{0.0, 2.0 * B * mjj1} * dcoef;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    t.upper[i] = -kin + dterm;
    t.lower[i] = -kin - dterm;
  }
  return t;
}

}  // namespace qdot
