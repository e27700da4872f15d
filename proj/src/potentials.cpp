#include "qdot/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qdot {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kGaussianSector = 0.25;

template <typename T>
T lorentzian_sq(const LongitudinalWell& w, T z) {
  const T r = z / w.width;
  const T d = 1.0 + r * r;
  return -w.depth / (d * d);
}

template <typename T>
T gauss(T z, double center, double width) {
  const T r = (z - center) / width;
  return std::exp(-r * r);
}

template <typename T>
T dot_value(const DotPotential& d, T x, double y) {
  switch (d.family) {
    case DotFamily::None:
      return T{0.0};
    case DotFamily::GaussianGaussian:
      return -d.amplitude * gauss(x, d.x_center, d.x_width) *
             gauss(y, d.y_center, d.y_width);
    case DotFamily::GaussianTilted:
      return -d.amplitude * gauss(x, d.x_center, d.x_width) * (1.0 + d.tilt * y);
    case DotFamily::GaussianXOnly:
      return -d.amplitude * gauss(x, d.x_center, d.x_width);
    case DotFamily::AdditiveSeparable:
      return -d.amplitude * gauss(x, d.x_center, d.x_width) -
             T{d.y_amplitude * gauss(y, d.y_center, d.y_width)};
  }
  return T{0.0};
}

void check_domain(const PotentialModel& m, double y) {
  if (!m.confinement.line && std::abs(y) > m.confinement.half_width)
    throw Error(ErrorCode::OutOfDomain, "potential: y outside the strip");
}

void check_sector(const PotentialModel& m, std::complex<double> theta) {
  const double cap = std::min(m.sector_half_angle(), kQuarterPi);
  if (std::abs(theta.imag()) >= cap)
    throw Error(ErrorCode::SectorViolation,
                "dilated evaluation: |Im theta| must stay below the sector half-angle");
}

}  // namespace

double PotentialModel::sector_half_angle() const {
  double alpha = kQuarterPi;
  if (dot.family != DotFamily::None && dot.amplitude != 0.0)
    alpha = std::min(alpha, kGaussianSector);
  return alpha;
}

double evaluate(const PotentialModel& model, Which which, double x, double y) {
  switch (which) {
    case Which::V:
      return model.well.depth == 0.0 ? 0.0 : lorentzian_sq(model.well, x);
    case Which::W: {
      check_domain(model, y);
      return model.confinement.c * y * y + model.confinement.q * y * y * y * y;
    }
    case Which::U: {
      check_domain(model, y);
      return dot_value(model.dot, x, y);
    }
  }
  return 0.0;
}

std::complex<double> evaluate_dilated(const PotentialModel& model, Which which,
                                      double x, std::complex<double> theta,
                                      double y) {
  check_sector(model, theta);
  const std::complex<double> z = std::exp(theta) * x;
  switch (which) {
    case Which::V:
      return model.well.depth == 0.0 ? std::complex<double>{0.0}
                                     : lorentzian_sq(model.well, z);
    case Which::U:
      check_domain(model, y);
      return dot_value(model.dot, z, y);
    case Which::W:
      throw Error(ErrorCode::OutOfDomain, "dilated evaluation applies to V and U only");
  }
  return {0.0};
}

AssumptionReport validate_assumptions(const PotentialModel& model) {
  AssumptionReport rep;
  const double eps = model.decay_eps;

  // Decay: sup of |f(x)| <x>^{2+eps} over a log grid must not grow past |x|=10.
  auto decay_ok = [&](auto f) {
    double near = 0.0, far_ = 0.0;
    for (int k = 0; k <= 240; ++k) {
      const double x = std::pow(10.0, -3.0 + k * 0.025);  // up to 1e3
      const double w = std::abs(f(x)) * std::pow(1.0 + x * x, 1.0 + 0.5 * eps);
      (x <= 10.0 ? near : far_) = std::max(x <= 10.0 ? near : far_, w);
    }
    return far_ <= near * (1.0 + 1e-9) + 1e-300;
  };

  rep.decay_v = decay_ok([&](double x) { return evaluate(model, Which::V, x); });

  // U decay, uniform over sampled transverse positions.
  {
    const double ylim = model.confinement.line ? 5.0 : model.confinement.half_width;
    bool ok = true;
    for (int iy = 0; iy <= 16 && ok; ++iy) {
      const double y = -ylim + 2.0 * ylim * iy / 16.0;
      ok = decay_ok([&](double x) { return evaluate(model, Which::U, x, y); });
    }
    rep.decay_u = ok;
  }

  // Mean condition by trapezoid plus an analytic tail bound for the family.
  {
    const double L = 200.0 * model.well.width;
    const int n = 20001;
    const double h = 2.0 * L / (n - 1);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = -L + i * h;
      const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      s += w * evaluate(model, Which::V, x);
    }
    rep.v_integral = s * h;
    rep.mean_condition = rep.v_integral <= 1e-12;
  }

  // Confinement lower bound W(y) - c y^2 >= 0, with c >= 1 required on the line.
  {
    const double c = model.confinement.c;
    if (model.confinement.line && c < 1.0) {
      rep.confinement_bound = false;
      rep.notes.push_back("line confinement requires c >= 1");
    } else {
      bool ok = true;
      const double ylim = model.confinement.line ? 50.0 : model.confinement.half_width;
      for (int i = 0; i <= 400; ++i) {
        const double y = -ylim + 2.0 * ylim * i / 400.0;
        if (!model.confinement.line && std::abs(y) > model.confinement.half_width) continue;
        const double w = evaluate(model, Which::W, 0.0, y);
        if (w - c * y * y < -1e-12) { ok = false; break; }
      }
      rep.confinement_bound = ok;
    }
  }

  if (model.dot.family != DotFamily::None && model.dot.amplitude != 0.0) {
    rep.gaussian_sector_caveat = true;
    rep.notes.push_back("Gaussian dot: keep |Im theta| <= 0.2 for dilated evaluation");
  }
  return rep;
}

}  // namespace qdot
