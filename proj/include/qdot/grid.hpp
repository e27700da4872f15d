#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qdot/errors.hpp"

namespace qdot {

// Uniform 1D grid including both endpoints.
struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  double h = 0.0;
  std::vector<double> nodes;
};

enum class BoundaryTag { Dirichlet, TruncatedLine };

// Symmetric 3-point stencil of -d^2/dx^2 on the grid nodes. Endpoint rows
// carry the Dirichlet closure; eigen-solvers act on the interior block and
// keep zero values at the endpoints.
struct TridiagonalOperator {
  std::vector<double> diag;  // length n
  std::vector<double> off;   // length n-1, shared by both sides
  BoundaryTag bc = BoundaryTag::Dirichlet;
  double h = 0.0;
};

Grid build_uniform_grid(double lo, double hi, std::size_t n);

TridiagonalOperator second_difference(const Grid& grid, BoundaryTag bc);

// Composite trapezoid rule over the full grid.
double quadrature(const Grid& grid, std::span<const double> samples);
std::complex<double> quadrature(const Grid& grid,
                                std::span<const std::complex<double>> samples);

// Centered antisymmetric first derivative with zero beyond the endpoints.
std::vector<double> centered_derivative(const Grid& grid,
                                        std::span<const double> samples);
std::vector<std::complex<double>> centered_derivative(
    const Grid& grid, std::span<const std::complex<double>> samples);

}  // namespace qdot
