#pragma once

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "qdot/coupling.hpp"
#include "qdot/grid.hpp"
#include "qdot/potentials.hpp"
#include "qdot/spectral.hpp"

namespace qdot {

namespace detail {
class DenseLU;
}

enum class LevelStatus { Isolated, Embedded, ThresholdCollision, Degenerate };

struct LevelRecord {
  int n = 0;  // 1-based longitudinal index
  int j = 0;  // 1-based transverse index
  double e0 = 0.0;
  LevelStatus status = LevelStatus::Isolated;
  int open_channels = 0;  // k_{e0}
};

// Every (n, j) pair with e0 below the cap, with embedding / threshold /
// degeneracy classification.
std::vector<LevelRecord> classify_levels(const std::vector<double>& mu,
                                         const std::vector<double>& nu,
                                         double energy_cap,
                                         double collision_tol = 1e-9,
                                         double degeneracy_tol = 1e-9);

// Fourier transform (2 pi)^{-1/2} int e^{-ikx} f(x) dx at k = sigma sqrt(E).
std::complex<double> trace_amplitude(std::span<const std::complex<double>> f,
                                     const Grid& grid, double E, int sigma);

// Nystrom factorization of the second-kind integral operator
// I + |V|^{1/2} R0(E+i0) |V|^{1/2} sgn V on the support window of V.
class WaveOperator {
 public:
  WaveOperator(const PotentialModel& model, const Grid& grid, double E,
               double support_cutoff_rel = 1e-12);
  ~WaveOperator();
  WaveOperator(WaveOperator&&) noexcept;
  WaveOperator& operator=(WaveOperator&&) noexcept;

  // omega(E+i0) f
  std::vector<std::complex<double>> apply(
      std::span<const std::complex<double>> f) const;

  // tau^{sigma}( (I + V R0(E+i0))^{-1} f ) for sigma = +, -. These amplitudes
  // carry the positive-energy spectral density of f with respect to h^V:
  // Im <f, (h^V - E - i0)^{-1} f> = (pi / 2 sqrt(E)) sum_sigma |.|^2.
  std::array<std::complex<double>, 2> scattering_amplitudes(
      std::span<const std::complex<double>> f) const;

  double energy() const { return E_; }
  double rcond() const { return rcond_; }

 private:
  Grid grid_;
  double E_;
  double sqrtE_;
  std::vector<double> absroot_;  // |V|^{1/2}
  std::vector<double> signed_;   // |V|^{1/2} sgn V
  std::size_t win_lo_ = 0, win_hi_ = 0;  // inclusive node window
  std::unique_ptr<detail::DenseLU> lu_;
  double rcond_ = 0.0;
};

struct GoldenRuleWidth {
  double total = 0.0;  // Im e2, nonpositive
  std::vector<double> per_channel;
  std::vector<std::array<double, 2>> per_sigma;  // {sigma=+, sigma=-} per channel
};

struct PerturbationOptions {
  double near_threshold = 1e-4;  // refuse open channels closer than this
  double eta_half_length = 1600.0;  // box half-length for the regularized resolvent
  int eta_points = 5;
  double eta_floor_scale = 3.0;  // floor = scale * (2 sqrt(E) pi / half_length)
};

// Per-level factorization: wave operators, trace amplitudes, and resolvent
// Gram matrices for the coupling basis {phi', phi, U_jk phi}; evaluations in
// (B, lambda) are then closed-form quadratic expressions.
class LevelPerturbation {
 public:
  LevelPerturbation(const PotentialModel& model,
                    const std::vector<SpectralPair>& modes, const Grid& ygrid,
                    const Grid& xgrid, int n_index, int j_index,
                    double energy_cap, PerturbationOptions opts = {});

  const LevelRecord& level() const { return level_; }
  const SpectralPair& phi() const { return phi_; }
  double mu() const { return phi_.eigenvalue; }

  double first_order_shift(double B, double lambda) const;
  GoldenRuleWidth golden_rule_width(double B, double lambda) const;
  std::complex<double> second_order_full(double B, double lambda) const;

 private:
  struct Channel {
    double Ek = 0.0;
    bool open = false;
    std::array<std::complex<double>, 2> amp_dphi{};  // tau^pm of projected phi'
    std::array<std::complex<double>, 2> amp_phi{};
    std::array<std::complex<double>, 2> amp_uphi{};
    std::array<std::array<std::complex<double>, 3>, 3> gram{};  // <b_a, R b_b>
  };

  std::array<std::complex<double>, 3> coefficients(int k, double B,
                                                   double lambda) const;

  PotentialModel model_;
  Grid xgrid_;
  PerturbationOptions opts_;
  LevelRecord level_;
  SpectralPair phi_;
  std::vector<double> phi_prime_;
  std::vector<double> m1_, m2_;
  std::size_t J_ = 0;
  std::vector<std::vector<double>> uprof_;  // U_jk phi profiles (j = level row)
  std::vector<Channel> channels_;
};

std::vector<std::complex<double>> wave_operator_apply(
    const PotentialModel& model, const Grid& grid, double E,
    std::span<const std::complex<double>> f);

// One level's perturbative record at a coupling point.
struct ResonanceEstimate {
  LevelRecord level;
  double B = 0.0;
  double lambda = 0.0;
  double e1 = 0.0;
  std::complex<double> e2{0.0, 0.0};
  std::vector<double> im_e2_by_channel;
  std::complex<double> predicted_pole{0.0, 0.0};  // e0 + e1 + e2
};

ResonanceEstimate estimate_resonance(const LevelPerturbation& lp, double B,
                                     double lambda);

}  // namespace qdot
