#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qdot/strongfield.hpp"

using namespace qdot;

namespace {

PotentialModel line_model(double dot_amp = 0.0) {
  PotentialModel m;
  m.well.depth = 0.0;
  m.confinement = {true, 0.0, 1.0, 0.0};  // W = y^2 on the line
  if (dot_amp != 0.0) {
    m.dot.family = DotFamily::GaussianGaussian;
    m.dot.amplitude = dot_amp;
    m.dot.x_width = 1.0;
    m.dot.y_width = 1.0;
  }
  return m;
}

Grid ygrid_line(std::size_t n = 8001) { return build_uniform_grid(-8.0, 8.0, n); }
Grid xgrid_line(std::size_t n = 1201) { return build_uniform_grid(-30.0, 30.0, n); }

}  // namespace

TEST_CASE("dispersion curve of the harmonic fiber") {
  const Grid y = ygrid_line(12001);
  const double B = 1.0;
  const auto curve = dispersion_curve(line_model(), B, 1, -3.0, 3.0, 41, y);
  for (std::size_t i = 0; i < curve.p.size(); ++i) {
    const double exact = std::sqrt(2.0) + curve.p[i] * curve.p[i] / 2.0;
    CHECK(curve.value[i] == doctest::Approx(exact).epsilon(1e-6));
  }
  REQUIRE(curve.minima.size() == 1);
  CHECK(std::abs(curve.minima[0].first) < 1e-4);
  CHECK(curve.minima[0].second == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("dispersion lower bounds") {
  const Grid y = ygrid_line();

  SUBCASE("line: nu_1^B(p) >= c p^2 / (c + B^2)") {
    for (double B : {0.5, 2.0})
      for (double p : {-2.0, 0.0, 1.0, 3.0}) {
        const double v = solve_fiber(line_model(), B, p, y, 1)[0].eigenvalue;
        CHECK(v >= p * p / (1.0 + B * B) - 1e-10);
      }
  }

  SUBCASE("strip: nu_j^B(p) >= inf (By-p)^2 + (pi j / 2a)^2") {
    PotentialModel strip;
    strip.confinement = {false, 1.0, 0.0, 0.0};
    const Grid ys = build_uniform_grid(-1.0, 1.0, 2001);
    for (double B : {0.5, 1.0})
      for (double p : {-1.0, 0.4, 2.0})
        for (int j = 1; j <= 2; ++j) {
          const double v = solve_fiber(strip, B, p, ys, j)[j - 1].eigenvalue;
          const double inf_shift =
              std::abs(p) <= B ? 0.0 : std::pow(B - std::abs(p), 2);
          const double lb = inf_shift + std::pow(std::numbers::pi * j / 2.0, 2);
          CHECK(v >= lb - 1e-9);
        }
  }

  SUBCASE("nu_1^B(0) grows with B for the harmonic well") {
    double prev = 0.0;
    for (double B : {0.0, 0.5, 1.0, 2.0, 5.0}) {
      const double v = solve_fiber(line_model(), B, 0.0, y, 1)[0].eigenvalue;
      CHECK(v >= prev);
      CHECK(v == doctest::Approx(std::sqrt(1.0 + B * B)).epsilon(1e-5));
      prev = v;
    }
  }
}

TEST_CASE("essential bottom") {
  const Grid y = ygrid_line(12001);

  SUBCASE("harmonic well at B = 1") {
    const auto curve = dispersion_curve(line_model(), 1.0, 1, -3.0, 3.0, 41, y);
    const auto [bottom, p0s] = essential_bottom(curve);
    CHECK(bottom == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    REQUIRE(p0s.size() == 1);
    CHECK(std::abs(p0s[0]) < 1e-4);
  }

  SUBCASE("B = 0 reduces to the transverse threshold") {
    const auto curve = dispersion_curve(line_model(), 0.0, 1, -3.0, 3.0, 41, y);
    const auto [bottom, p0s] = essential_bottom(curve);
    CHECK(bottom == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::abs(p0s[0]) < 1e-4);
  }

  SUBCASE("double-well confinement splits the minimizer") {
    PotentialModel dw;
    dw.confinement = {true, 0.0, -2.0, 1.0};  // y^4 - 2 y^2
    const Grid yd = build_uniform_grid(-6.0, 6.0, 6001);
    const auto curve = dispersion_curve(dw, 1.5, 1, -4.0, 4.0, 81, yd);
    const auto [bottom, p0s] = essential_bottom(curve);
    REQUIRE(p0s.size() == 2);
    CHECK(p0s[0] == doctest::Approx(-p0s[1]).epsilon(1e-3));
    CHECK(std::abs(p0s[1]) > 0.1);
    (void)bottom;
  }

  SUBCASE("too narrow a momentum range is refused") {
    CHECK_THROWS_AS(dispersion_curve(line_model(), 1.0, 1, -0.3, 0.3, 11, y), Error);
  }
}

TEST_CASE("gauge shift leaves the essential bottom unchanged") {
  const Grid y = ygrid_line(12001);
  const auto a = dispersion_curve(line_model(), 1.0, 1, -3.0, 3.0, 41, y);
  const auto b = dispersion_curve(line_model(), 1.0, 1, -3.0 + 0.7, 3.0 + 0.7, 41, y);
  const double va = essential_bottom(a).first;
  const double vb = essential_bottom(b).first;
  CHECK(std::abs(va - vb) < 1e-10);
}

TEST_CASE("attractivity integral") {
  const Grid y = ygrid_line();
  const Grid x = xgrid_line();

  SUBCASE("purely attractive dot") {
    for (double B : {0.5, 2.0})
      CHECK(attractivity_integral(line_model(4.0), B, 0.0, y, x) < 0.0);
  }

  SUBCASE("x-only dot integrates to int u") {
    PotentialModel m = line_model();
    m.dot.family = DotFamily::GaussianXOnly;
    m.dot.amplitude = 4.0;
    m.dot.x_width = 1.0;
    const double got = attractivity_integral(m, 1.0, 0.0, y, x);
    CHECK(got == doctest::Approx(-4.0 * std::sqrt(std::numbers::pi)).epsilon(1e-8));
  }

  SUBCASE("sign-indefinite dot against a refined-grid oracle") {
    PotentialModel m;
    m.confinement = {false, 1.0, 0.0, 0.0};
    m.dot = {DotFamily::GaussianTilted, 2.0, 0.0, 1.0, 1.0, 0.0, 0.0, 2.0};
    const Grid ys = build_uniform_grid(-1.0, 1.0, 2001);
    const Grid ysf = build_uniform_grid(-1.0, 1.0, 8001);
    const Grid xf = build_uniform_grid(-30.0, 30.0, 4001);
    for (double B : {0.5, 2.0}) {
      const double coarse = attractivity_integral(m, B, 0.0, ys, x);
      const double fine = attractivity_integral(m, B, 0.0, ysf, xf);
      CHECK(coarse == doctest::Approx(fine).epsilon(1e-4));
    }
  }
}

TEST_CASE("variational certificate") {
  const Grid y = ygrid_line();
  const Grid x = xgrid_line();
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const std::vector<double> ds{5.0, 10.0, 20.0, 40.0};

  SUBCASE("attractive Gaussian dot certifies across fields") {
    for (double B : {0.5, 2.0}) {
      const auto cert = variational_certificate(line_model(4.0), B, 0.0, eps, ds, y, x);
      CHECK(cert.verdict == Verdict::Certified);
      CHECK(cert.chosen.q < 0.0);
      CHECK(cert.attractivity < 0.0);
      CHECK(cert.eps_rule_satisfied);
      CHECK(cert.fh_derivative < 1e-6);
      CHECK(cert.grid_values.size() == eps.size() * ds.size());
    }
  }

  SUBCASE("no dot, no certificate") {
    const auto cert = variational_certificate(line_model(0.0), 1.0, 0.0, eps, ds, y, x);
    CHECK(cert.verdict == Verdict::Inconclusive);
    for (const auto& tp : cert.grid_values) CHECK(tp.q > 0.0);
  }

  SUBCASE("plateau expectation approaches the full integral") {
    const auto cert = variational_certificate(line_model(4.0), 1.0, 0.0, {1e-2},
                                              {40.0}, y, x);
    const double plateau_q = cert.grid_values[0].q - 1e-2 * std::numbers::pi *
                                                         std::numbers::pi / 4.0;
    CHECK(std::abs(plateau_q - cert.attractivity) <= 0.01 * std::abs(cert.attractivity));
  }

  SUBCASE("unreduced form matches the reduced one") {
    const auto cert = variational_certificate(line_model(4.0), 1.0, 0.0, {1e-1},
                                              {5.0, 10.0}, y, x);
    REQUIRE(cert.verdict == Verdict::Certified);
    CHECK(std::abs(cert.consistency_gap) < 5e-4 * (1.0 + std::abs(cert.chosen.q)));
  }
}

TEST_CASE("direct 2D oracle") {
  SUBCASE("bound state below the essential bottom for an attractive dot") {
    const double B = 2.0;
    const Grid ox = build_uniform_grid(-10.0, 10.0, 161);
    const Grid oy = build_uniform_grid(-4.0, 4.0, 81);
    const double ev = direct_ground_state(line_model(4.0), B, ox, oy);
    const double bottom = solve_fiber(line_model(), B, 0.0, oy, 1)[0].eigenvalue;
    CHECK(ev < bottom - 1e-4);
  }

  SUBCASE("no dot keeps the spectrum above the bottom") {
    const double B = 1.0;
    const Grid ox = build_uniform_grid(-10.0, 10.0, 121);
    const Grid oy = build_uniform_grid(-4.0, 4.0, 81);
    const double ev = direct_ground_state(line_model(0.0), B, ox, oy);
    const double bottom = solve_fiber(line_model(), B, 0.0, oy, 1)[0].eigenvalue;
    CHECK(ev >= bottom - 5e-3);
  }

  SUBCASE("zero-field binding for a shallow dot") {
    const Grid ox = build_uniform_grid(-14.0, 14.0, 181);
    const Grid oy = build_uniform_grid(-5.0, 5.0, 81);
    const double ev = direct_ground_state(line_model(2.0), 0.0, ox, oy);
    const double nu1 = solve_fiber(line_model(), 0.0, 0.0, oy, 1)[0].eigenvalue;
    CHECK(ev < nu1 - 1e-3);
  }

  SUBCASE("budget guard") {
    const Grid big = build_uniform_grid(-10.0, 10.0, 401);
    const Grid oy = build_uniform_grid(-4.0, 4.0, 81);
    CHECK_THROWS_AS(direct_ground_state(line_model(4.0), 1.0, big, oy), Error);
  }
}
