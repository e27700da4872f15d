#include "qdot/grid.hpp"

#include <cmath>

namespace qdot {

Grid build_uniform_grid(double lo, double hi, std::size_t n) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidBounds, "grid: lo must be < hi");
  if (n < 3) throw Error(ErrorCode::TooFewPoints, "grid: need at least 3 nodes");
  Grid g;
  g.lo = lo;
  g.hi = hi;
  g.n = n;
  g.h = (hi - lo) / static_cast<double>(n - 1);
  g.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    g.nodes[i] = lo + g.h * static_cast<double>(i);
  g.nodes.back() = hi;
  return g;
}

TridiagonalOperator second_difference(const Grid& grid, BoundaryTag bc) {
  TridiagonalOperator op;
  op.bc = bc;
  op.h = grid.h;
  const double w = 1.0 / (grid.h * grid.h);
  op.diag.assign(grid.n, 2.0 * w);
  op.off.assign(grid.n - 1, -w);
  return op;
}

double quadrature(const Grid& grid, std::span<const double> samples) {
  if (samples.size() != grid.n)
    throw Error(ErrorCode::LengthMismatch, "quadrature: samples/grid size mismatch");
  double s = 0.5 * (samples.front() + samples.back());
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) s += samples[i];
  return s * grid.h;
}

std::complex<double> quadrature(const Grid& grid,
                                std::span<const std::complex<double>> samples) {
  if (samples.size() != grid.n)
    throw Error(ErrorCode::LengthMismatch, "quadrature: samples/grid size mismatch");
  std::complex<double> s = 0.5 * (samples.front() + samples.back());
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) s += samples[i];
  return s * grid.h;
}

namespace {
template <typename T>
std::vector<T> centered_impl(const Grid& grid, std::span<const T> f) {
  if (f.size() != grid.n)
    throw Error(ErrorCode::LengthMismatch, "derivative: samples/grid size mismatch");
  std::vector<T> d(f.size());
  const double w = 1.0 / (2.0 * grid.h);
  d.front() = f[1] * w;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) d[i] = (f[i + 1] - f[i - 1]) * w;
  d.back() = -f[f.size() - 2] * w;
  return d;
}
}  // namespace

std::vector<double> centered_derivative(const Grid& grid,
                                        std::span<const double> samples) {
  return centered_impl<double>(grid, samples);
}

std::vector<std::complex<double>> centered_derivative(
    const Grid& grid, std::span<const std::complex<double>> samples) {
  return centered_impl<std::complex<double>>(grid, samples);
}

}  // namespace qdot
