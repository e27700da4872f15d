#pragma once

#include <utility>
#include <vector>

#include "qdot/grid.hpp"
#include "qdot/potentials.hpp"
#include "qdot/spectral.hpp"

namespace qdot {

struct DispersionCurve {
  int band = 1;
  double B = 0.0;
  std::vector<double> p;
  std::vector<double> value;
  std::vector<std::pair<double, double>> minima;  // (p0, nu_j^B(p0)), refined
};

DispersionCurve dispersion_curve(const PotentialModel& model, double B, int band,
                                 double p_lo, double p_hi, std::size_t samples,
                                 const Grid& ygrid, double endpoint_margin = 0.5);

// Bottom of the essential spectrum and every global minimizer.
std::pair<double, std::vector<double>> essential_bottom(const DispersionCurve& curve);

// int_R int_S U(x,y) |chi_1^B(p0, y)|^2 dy dx
double attractivity_integral(const PotentialModel& model, double B, double p0,
                             const Grid& ygrid, const Grid& xgrid);

enum class Verdict { Certified, Inconclusive };

struct TrialPoint {
  double eps = 0.0;
  double d = 0.0;
  double q = 0.0;
};

struct StrongFieldCertificate {
  double B = 0.0;
  double p0 = 0.0;
  double essential_bottom = 0.0;
  double attractivity = 0.0;
  TrialPoint chosen;
  Verdict verdict = Verdict::Inconclusive;
  bool eps_rule_satisfied = false;  // eps ||g'||^2 < |int U11| / 2
  double q_full = 0.0;              // unreduced form at the chosen point
  double consistency_gap = 0.0;     // q_full - q_reduced
  double fh_derivative = 0.0;       // |d nu_1^B / dp| at p0
  std::vector<TrialPoint> grid_values;
  bool has_direct = false;
  double direct_eigenvalue = 0.0;
};

StrongFieldCertificate variational_certificate(
    const PotentialModel& model, double B, double p0,
    const std::vector<double>& eps_grid, const std::vector<double>& d_grid,
    const Grid& ygrid, const Grid& xgrid);

// Lowest eigenvalue of the 2D Landau-gauge operator on the tensor grid,
// by shift-invert Lanczos on the banded factorization.
double direct_ground_state(const PotentialModel& model, double B,
                           const Grid& xgrid, const Grid& ygrid);

}  // namespace qdot
