#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qdot/errors.hpp"

namespace qdot {

// Longitudinal well V(x) = -depth * (1 + (x/width)^2)^{-2}. depth == 0 turns
// V off. Dilation-analytic in |arg z| < pi/4.
struct LongitudinalWell {
  double depth = 2.0;
  double width = 1.0;
};

// Transverse confinement. Either the hard-wall strip S = (-a, a) with
// W(y) = c y^2 + q y^4 on top (c, q may be zero), or the whole line with the
// same polynomial well, which then must satisfy c >= 1.
struct Confinement {
  bool line = false;
  double half_width = 1.0;  // a, ignored when line
  double c = 0.0;
  double q = 0.0;
};

enum class DotFamily {
  None,
  GaussianGaussian,   // -u exp(-(x-x0)^2/wx^2) exp(-(y-y0)^2/wy^2)
  GaussianTilted,     // -u exp(-(x-x0)^2/wx^2) (1 + tilt*y)
  GaussianXOnly,      // -u exp(-(x-x0)^2/wx^2)
  AdditiveSeparable,  // -u exp(-(x-x0)^2/wx^2) - uy exp(-(y-y0)^2/wy^2)
};

struct DotPotential {
  DotFamily family = DotFamily::None;
  double amplitude = 0.0;    // u
  double y_amplitude = 0.0;  // uy, AdditiveSeparable only
  double x_width = 1.0;
  double y_width = 1.0;
  double x_center = 0.0;
  double y_center = 0.0;
  double tilt = 0.0;
};

enum class Which { V, W, U };

struct PotentialModel {
  LongitudinalWell well;
  Confinement confinement;
  DotPotential dot;
  double decay_eps = 1.0;

  // Sector half-angle alpha0 of the analyticity sector shared by the active
  // x-dependent families. The Gaussian dot profile caps it at 0.25; the
  // recommended working angle for Gaussian dots is Im theta <= 0.2.
  double sector_half_angle() const;

  bool dot_is_separable() const {
    return dot.family == DotFamily::None || dot.family == DotFamily::GaussianXOnly ||
           dot.family == DotFamily::AdditiveSeparable;
  }
};

double evaluate(const PotentialModel& model, Which which, double x, double y = 0.0);

// Value of the analytically-continued potential at e^theta * x. For U the
// continuation acts on the longitudinal argument only.
std::complex<double> evaluate_dilated(const PotentialModel& model, Which which,
                                      double x, std::complex<double> theta,
                                      double y = 0.0);

struct AssumptionReport {
  bool decay_v = false;        // |V| <= C <x>^{-2-eps} on a log grid up to 1e3
  bool decay_u = false;        // same bound for U, uniform over sampled y
  bool mean_condition = false; // int V dx <= 0
  bool confinement_bound = false;  // W(y) - c y^2 >= 0 with c >= 1 when S = R
  bool gaussian_sector_caveat = false;  // Gaussian dot present: use Im theta <= 0.2
  double v_integral = 0.0;
  std::vector<std::string> notes;
  bool all_satisfied() const {
    return decay_v && decay_u && mean_condition && confinement_bound;
  }
};

AssumptionReport validate_assumptions(const PotentialModel& model);

}  // namespace qdot
