#include "cmv/banded.hpp"

#include <lapacke.h>

#include <string>

#include "cmv/errors.hpp"

namespace cmv {

namespace {
constexpr int kKl = 2;
constexpr int kKu = 2;
constexpr int kLdab = 2 * kKl + kKu + 1;

lapack_complex_double* lp(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }
const lapack_complex_double* lp(const cplx* p) {
  return reinterpret_cast<const lapack_complex_double*>(p);
}
}  // namespace

BandedLU::BandedLU(const BandMatrix& band, cplx shift, double min_rcond) : n_(band.size()) {
  if (n_ < 1) throw SizeError("empty banded system");
  const auto n = static_cast<std::size_t>(n_);
  ab_.assign(kLdab * n, cplx{});
  double anorm = 0.0;  // 1-norm, needed by gbcon
  std::vector<double> colsum(n, 0.0);
  for (long i = 0; i < n_; ++i) {
    for (long k = 0; k < 5; ++k) {
      const long j = i + k - 2;
      if (j < 0 || j >= n_) continue;
      cplx v = band.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (i == j) v -= shift;
      ab_[static_cast<std::size_t>(kKl + kKu + i - j + j * kLdab)] = v;
      colsum[static_cast<std::size_t>(j)] += std::abs(v);
    }
  }
  for (double s : colsum) anorm = std::max(anorm, s);

  ipiv_.assign(n, 0);
  const lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, static_cast<lapack_int>(n_),
                                         static_cast<lapack_int>(n_), kKl, kKu, lp(ab_.data()),
                                         kLdab, ipiv_.data());
  if (info > 0) {
    throw SingularError("banded system is exactly singular at pivot " + std::to_string(info));
  }
  if (info < 0) throw SingularError("zgbtrf rejected argument " + std::to_string(-info));

  // The condition estimate costs O(n^2) in common OpenBLAS builds; skip it
  // when the caller does not ask for a threshold.
  if (!(min_rcond > 0.0)) return;
  const lapack_int cinfo =
      LAPACKE_zgbcon(LAPACK_COL_MAJOR, '1', static_cast<lapack_int>(n_), kKl, kKu,
                     lp(ab_.data()), kLdab, ipiv_.data(), anorm, &rcond_);
  if (cinfo != 0) throw SingularError("zgbcon failed");
  if (rcond_ < min_rcond) {
    throw SingularError("banded system is numerically singular (rcond = " +
                        std::to_string(rcond_) + ")");
  }
}

std::vector<cplx> BandedLU::solve_impl(std::vector<cplx> rhs, char trans) const {
  if (static_cast<long>(rhs.size()) != n_) throw SizeError("right-hand side has wrong length");
  const lapack_int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, trans, static_cast<lapack_int>(n_),
                                         kKl, kKu, 1, lp(ab_.data()), kLdab, ipiv_.data(),
                                         lp(rhs.data()), static_cast<lapack_int>(n_));
  if (info != 0) throw SingularError("zgbtrs failed");
  return rhs;
}

std::vector<cplx> BandedLU::solve(std::vector<cplx> rhs) const {
  return solve_impl(std::move(rhs), 'N');
}

std::vector<cplx> BandedLU::solve_transpose(std::vector<cplx> rhs) const {
  return solve_impl(std::move(rhs), 'T');
}

}  // namespace cmv
