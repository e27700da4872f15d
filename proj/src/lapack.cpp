#include "qdot/detail/lapack.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_float_real(z) ((z).real())
#define lapack_complex_float_imag(z) ((z).imag())
#define lapack_complex_double std::complex<double>
#define lapack_complex_double_real(z) ((z).real())
#define lapack_complex_double_imag(z) ((z).imag())
#include <lapacke.h>

#include <stdexcept>
#include <string>

#include "qdot/errors.hpp"

namespace qdot::detail {

namespace {
[[noreturn]] void fail(const char* routine, int info) {
  throw Error(ErrorCode::SingularSystem,
              std::string(routine) + " failed with info=" + std::to_string(info));
}
}  // namespace

static RealEigs stevr(const std::vector<double>& diag,
                      const std::vector<double>& off, char range, int il, int iu,
                      double vl, double vu) {
  const int n = static_cast<int>(diag.size());
  std::vector<double> d(diag), e(off);
  e.resize(n > 0 ? n : 1);
  std::vector<double> w(n);
  const int zcols = (range == 'I') ? (iu - il + 1) : n;
  std::vector<double> z(static_cast<std::size_t>(n) * std::max(zcols, 1));
  std::vector<int> isuppz(2 * std::max(zcols, 1));
  int m = 0;
  int info = LAPACKE_dstevr(LAPACK_ROW_MAJOR, 'V', range, n, d.data(), e.data(),
                            vl, vu, il, iu, 0.0, &m, w.data(), z.data(),
                            std::max(zcols, 1), isuppz.data());
  if (info != 0) fail("dstevr", info);
  RealEigs out;
  out.values.assign(w.begin(), w.begin() + m);
  out.vectors.resize(m);
  for (int k = 0; k < m; ++k) {
    out.vectors[k].resize(n);
    for (int i = 0; i < n; ++i)
      out.vectors[k][i] = z[static_cast<std::size_t>(i) * zcols + k];
  }
  return out;
}

RealEigs sym_tridiag_lowest(const std::vector<double>& diag,
                            const std::vector<double>& off, int count) {
  return stevr(diag, off, 'I', 1, count, 0.0, 0.0);
}

RealEigs sym_tridiag_below(const std::vector<double>& diag,
                           const std::vector<double>& off, double vu) {
  return stevr(diag, off, 'V', 0, 0, -1e300, vu);
}

std::vector<cplx> dense_eigenvalues(std::vector<cplx>& a, int n) {
  std::vector<cplx> w(n);
  // Eigenvalues are transpose-invariant, so row-major data can be handed to
  // the column-major routine directly without the LAPACKE transposing copy.
  int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(),
                           nullptr, 1, nullptr, 1);
  if (info != 0) fail("zgeev", info);
  return w;
}

std::vector<cplx> hessenberg_eigenvalues(std::vector<cplx>& a, int n) {
  // Same transpose argument; a tridiagonal matrix stays Hessenberg either way.
  std::vector<cplx> w(n);
  int info = LAPACKE_zhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, a.data(), n,
                            w.data(), nullptr, 1);
  if (info != 0) fail("zhseqr", info);
  return w;
}

void tridiag_solve(std::vector<cplx> lower, std::vector<cplx> diag,
                   std::vector<cplx> upper, std::vector<cplx>& rhs) {
  const int n = static_cast<int>(diag.size());
  int info = LAPACKE_zgtsv(LAPACK_COL_MAJOR, n, 1, lower.data(), diag.data(),
                           upper.data(), rhs.data(), n);
  if (info != 0) fail("zgtsv", info);
}

DenseLU::DenseLU(std::vector<cplx> a, int n) : n_(n), lu_(std::move(a)), ipiv_(n) {
  double anorm = 0.0;  // 1-norm of the row-major matrix = inf-norm of its transpose
  for (int j = 0; j < n_; ++j) {
    double col = 0.0;
    for (int i = 0; i < n_; ++i) col += std::abs(lu_[static_cast<std::size_t>(i) * n_ + j]);
    anorm = std::max(anorm, col);
  }
  // Factor the transpose (column-major view of row-major data); solves are
  // redirected through the 'T' option below.
  int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n_, n_, lu_.data(), n_, ipiv_.data());
  if (info != 0) fail("zgetrf", info);
  double rc = 0.0;
  info = LAPACKE_zgecon(LAPACK_COL_MAJOR, 'I', n_, lu_.data(), n_, anorm, &rc);
  if (info != 0) fail("zgecon", info);
  rcond_ = rc;
}

void DenseLU::solve(std::vector<cplx>& b) const {
  int info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'T', n_, 1,
                            const_cast<cplx*>(lu_.data()), n_,
                            const_cast<int*>(ipiv_.data()), b.data(), n_);
  if (info != 0) fail("zgetrs", info);
}

void BandLU::factor() {
  ipiv_.resize(n_);
  int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, ab_.data(), ldab_,
                            ipiv_.data());
  if (info != 0) fail("zgbtrf", info);
}

void BandLU::solve(std::vector<cplx>& b) const {
  int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1,
                            const_cast<cplx*>(ab_.data()), ldab_,
                            const_cast<int*>(ipiv_.data()), b.data(), n_);
  if (info != 0) fail("zgbtrs", info);
}

}  // namespace qdot::detail
