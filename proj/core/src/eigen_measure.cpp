// Spectral measure of delta_0 for a finite CMV truncation.
//
// A unitary matrix C and its Hermitian part H = Re(e^{-i phi} C) share
// eigenvectors, so a Hermitian solver does the heavy lifting.
// Eigenvalues of H collide whenever two eigenangles are mirror images about
// phi; such clusters are re-diagonalized through the compressed matrix
// V* C V, which is small and normal.

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "cmv/caratheodory.hpp"
#include "cmv/errors.hpp"
#include "cmv/operator.hpp"

namespace cmv {

namespace {

constexpr double kRotation = 0.7390851332151607;  // arbitrary, avoids real-spectrum symmetry
constexpr double kClusterGap = 1e-7;

lapack_complex_double* lp(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

}  // namespace

EigenMeasure::EigenMeasure(const VerblunskySequence& seq, long N, cplx eta_b) {
  const FiniteCMV C = build_finite_cmv(seq, N, eta_b);
  const BandMatrix& band = C.band;
  const auto n = static_cast<std::size_t>(N);
  constexpr int kd = 2;
  const cplx rot = std::polar(1.0, -kRotation);

  // Dense upper triangle: the divide-and-conquer band drivers in common
  // OpenBLAS builds return unnormalized vectors for N >= 500, MRRR does not.
  std::vector<cplx> A(n * n);
  for (long j = 0; j < N; ++j) {
    for (long i = std::max(0L, j - kd); i <= j; ++i) {
      A[static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * n] =
          0.5 * (rot * band.at(i, j) + std::conj(rot * band.at(j, i)));
    }
  }
  std::vector<double> w(n);
  std::vector<cplx> Z(n * n);
  std::vector<lapack_int> support(2 * n);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, 'V', 'A', 'U', static_cast<lapack_int>(N), lp(A.data()),
      static_cast<lapack_int>(N), 0.0, 0.0, 0, 0, 0.0, &found, w.data(), lp(Z.data()),
      static_cast<lapack_int>(N), support.data());
  if (info != 0 || found != static_cast<lapack_int>(N)) {
    throw SingularError("zheevr failed with info " + std::to_string(info));
  }

  eig_.reserve(n);
  weight_.reserve(n);
  std::vector<cplx> col(n);
  const auto column = [&](std::size_t k) {
    std::copy(Z.begin() + static_cast<long>(k * n), Z.begin() + static_cast<long>((k + 1) * n),
              col.begin());
    return col;
  };

  std::size_t k = 0;
  while (k < n) {
    std::size_t end = k + 1;
    while (end < n && w[end] - w[end - 1] < kClusterGap) ++end;
    const std::size_t g = end - k;
    if (g == 1) {
      const std::vector<cplx> v = column(k);
      const std::vector<cplx> Cv = band.apply(v);
      cplx rq{};
      for (std::size_t i = 0; i < n; ++i) rq += std::conj(v[i]) * Cv[i];
      modulus_defect_ = std::max(modulus_defect_, std::abs(std::abs(rq) - 1.0));
      eig_.push_back(rq / std::abs(rq));
      weight_.push_back(std::norm(v[0]));
    } else {
      ++clusters_;
      // S = V* C V, column-major g x g.
      std::vector<cplx> S(g * g);
      std::vector<std::vector<cplx>> CV(g);
      for (std::size_t b = 0; b < g; ++b) CV[b] = band.apply(column(k + b));
      for (std::size_t b = 0; b < g; ++b) {
        for (std::size_t a = 0; a < g; ++a) {
          cplx s{};
          const cplx* va = &Z[(k + a) * n];
          for (std::size_t i = 0; i < n; ++i) s += std::conj(va[i]) * CV[b][i];
          S[a + b * g] = s;
        }
      }
      std::vector<cplx> mu(g), vr(g * g);
      const auto gi = static_cast<lapack_int>(g);
      const lapack_int ginfo = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', gi, lp(S.data()), gi,
                                             lp(mu.data()), nullptr, 1, lp(vr.data()), gi);
      if (ginfo != 0) throw SingularError("zgeev failed on an eigenvalue cluster");
      for (std::size_t b = 0; b < g; ++b) {
        cplx first{};
        for (std::size_t a = 0; a < g; ++a) first += Z[(k + a) * n] * vr[a + b * g];
        modulus_defect_ = std::max(modulus_defect_, std::abs(std::abs(mu[b]) - 1.0));
        eig_.push_back(mu[b] / std::abs(mu[b]));
        weight_.push_back(std::norm(first));
      }
    }
    k = end;
  }
}

CaratheodoryValue EigenMeasure::F(cplx z) const {
  if (!(std::abs(z) < 1.0)) throw DiskError("measure oracle needs |z| < 1");
  cplx s{};
  for (std::size_t j = 0; j < eig_.size(); ++j) s += weight_[j] * (eig_[j] + z) / (eig_[j] - z);
  return {s, false, 0};
}

double EigenMeasure::weight_sum() const {
  double s = 0.0;
  for (double w : weight_) s += w;
  return s;
}

double EigenMeasure::max_modulus_defect() const { return modulus_defect_; }

CaratheodoryValue measure_oracle_F(const VerblunskySequence& seq, cplx z, long N, cplx eta_b) {
  if (!(std::abs(z) < 1.0)) throw DiskError("measure oracle needs |z| < 1");
  return EigenMeasure(seq, N, eta_b).F(z);
}

}  // namespace cmv
