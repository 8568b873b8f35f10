#pragma once

#include <limits>
#include <vector>

#include "cmv/operator.hpp"
#include "cmv/types.hpp"

namespace cmv {

/// Partially pivoted LU of a pentadiagonal band (LAPACK gbtrf storage).
class BandedLU {
 public:
  /// Factors band - shift * I. Throws SingularError on an exactly zero pivot
  /// or when the reciprocal condition estimate drops below min_rcond.
  /// min_rcond <= 0 skips the estimate; rcond() is then NaN.
  BandedLU(const BandMatrix& band, cplx shift, double min_rcond = 1e-14);

  [[nodiscard]] std::vector<cplx> solve(std::vector<cplx> rhs) const;
  /// Solves the transposed (not conjugated) system.
  [[nodiscard]] std::vector<cplx> solve_transpose(std::vector<cplx> rhs) const;
  [[nodiscard]] double rcond() const noexcept { return rcond_; }
  [[nodiscard]] long size() const noexcept { return n_; }

 private:
  [[nodiscard]] std::vector<cplx> solve_impl(std::vector<cplx> rhs, char trans) const;

  long n_;
  std::vector<cplx> ab_;
  std::vector<int> ipiv_;
  double rcond_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace cmv
