#pragma once

#include <complex>
#include <vector>

namespace qdot::detail {

using cplx = std::complex<double>;

struct RealEigs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // one l2-normalized vector per value
};

// Lowest `count` eigenpairs of the symmetric tridiagonal matrix (diag, off).
RealEigs sym_tridiag_lowest(const std::vector<double>& diag,
                            const std::vector<double>& off, int count);

// All eigenpairs with eigenvalue < vu.
RealEigs sym_tridiag_below(const std::vector<double>& diag,
                           const std::vector<double>& off, double vu);

// Eigenvalues of a general complex dense matrix (row-major, destroyed).
std::vector<cplx> dense_eigenvalues(std::vector<cplx>& a, int n);

// Eigenvalues of a complex upper-Hessenberg matrix (row-major, destroyed).
// Tridiagonal matrices qualify; much cheaper than the general path.
std::vector<cplx> hessenberg_eigenvalues(std::vector<cplx>& a, int n);

// Solve a complex tridiagonal system in place (Thomas via zgtsv).
void tridiag_solve(std::vector<cplx> lower, std::vector<cplx> diag,
                   std::vector<cplx> upper, std::vector<cplx>& rhs);

// Dense complex LU with reuse and a condition estimate.
class DenseLU {
 public:
  DenseLU(std::vector<cplx> a, int n);  // row-major
  void solve(std::vector<cplx>& b) const;
  double rcond() const { return rcond_; }

 private:
  int n_;
  std::vector<cplx> lu_;
  std::vector<int> ipiv_;
  double rcond_ = 0.0;
};

// Complex banded LU (column-major LAPACK band storage) for 2D stencils.
class BandLU {
 public:
  // fill(i, j) must return entry (i, j) for |i-j| <= band.
  template <typename F>
  BandLU(int n, int band, F fill) : n_(n), kl_(band), ku_(band) {
    ldab_ = 2 * kl_ + ku_ + 1;
    ab_.assign(static_cast<std::size_t>(ldab_) * n_, cplx{0.0});
    for (int j = 0; j < n_; ++j)
      for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
        ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)] = fill(i, j);
    factor();
  }
  void solve(std::vector<cplx>& b) const;

 private:
  void factor();
  int n_, kl_, ku_, ldab_;
  std::vector<cplx> ab_;
  std::vector<int> ipiv_;
};

}  // namespace qdot::detail
