#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "cmv/coeffs.hpp"
#include "cmv/types.hpp"

namespace cmv {

/// 2x2 complex matrix [[a, b], [c, d]] with a cached determinant.
class Mat2C {
 public:
  Mat2C() : Mat2C(1.0, 0.0, 0.0, 1.0) {}
  Mat2C(cplx a, cplx b, cplx c, cplx d) : a_(a), b_(b), c_(c), d_(d), det_(a * d - b * c) {}
  static Mat2C identity() { return {}; }

  [[nodiscard]] cplx a() const noexcept { return a_; }
  [[nodiscard]] cplx b() const noexcept { return b_; }
  [[nodiscard]] cplx c() const noexcept { return c_; }
  [[nodiscard]] cplx d() const noexcept { return d_; }
  [[nodiscard]] cplx det() const noexcept { return det_; }
  [[nodiscard]] cplx trace() const noexcept { return a_ + d_; }
  /// Spectral (largest singular value) norm.
  [[nodiscard]] double norm() const;
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] bool finite() const;

  /// Determinant recomputed from the entries (the cache tracks products exactly
  /// as det(A) det(B), so the two can be compared).
  [[nodiscard]] cplx det_from_entries() const noexcept { return a_ * d_ - b_ * c_; }

  [[nodiscard]] std::pair<cplx, cplx> apply(cplx x, cplx y) const {
    return {a_ * x + b_ * y, c_ * x + d_ * y};
  }

  friend Mat2C operator*(const Mat2C& l, const Mat2C& r);
  friend Mat2C operator*(cplx s, const Mat2C& m);

 private:
  Mat2C(cplx a, cplx b, cplx c, cplx d, cplx det) : a_(a), b_(b), c_(c), d_(d), det_(det) {}

  cplx a_, b_, c_, d_;
  cplx det_;
};

double max_entry_diff(const Mat2C& x, const Mat2C& y);

/// Product held as exp(log_scale) * matrix to survive large L.
struct CocycleProduct {
  Mat2C matrix;
  double log_scale = 0.0;

  /// exp(log_scale) * matrix; throws OverflowError when not representable.
  [[nodiscard]] Mat2C value() const;
  /// log of the spectral norm.
  [[nodiscard]] double log_norm() const;
  /// log det, compared against L log z by callers.
  [[nodiscard]] cplx log_det() const;
};

/// (1/rho(n)) [[z, -conj(alpha(n))], [-alpha(n) z, 1]].
Mat2C one_step(const VerblunskySequence& seq, cplx z, long n);
Mat2C one_step(cplx alpha, cplx z);

/// T(start + L - 1) ... T(start), renormalized every 64 steps.
CocycleProduct cocycle_product(const VerblunskySequence& seq, cplx z, long L, long start = 0);

/// z^{1/2} = |z|^{1/2} e^{i theta / 2}, theta = arg z in [0, 2 pi).
cplx sqrt_branch(cplx z);
/// (z^{1/2})^n on the same branch.
cplx sqrt_branch_power(cplx z, long n);

/// T / z^{n/2}; determinant becomes 1 when det T = z^n.
Mat2C normalize_sl2(const Mat2C& T, cplx z, long n);
CocycleProduct normalize_sl2(const CocycleProduct& T, cplx z, long n);

/// Solution of the one-step recursion (eta_{j+1}, eta*_{j+1}) = T(j)(eta_j, eta*_j)
/// started from (eta_0, eta*_0) = initial, with |initial|^2 = 2.
class SolutionTrace {
 public:
  SolutionTrace(const VerblunskySequence& seq, cplx z, std::pair<cplx, cplx> initial);

  /// Makes pairs 0..n available.
  void extend(long n);
  [[nodiscard]] long horizon() const noexcept { return static_cast<long>(eta_.size()) - 1; }
  [[nodiscard]] std::pair<cplx, cplx> pair(long j) const;
  /// sum_{j<=n} (|eta_j|^2 + |eta*_j|^2) / 2, extending as needed.
  [[nodiscard]] double squared_norm(long n);
  /// ||eta||_L with squared norms linearly interpolated in L.
  [[nodiscard]] double norm(double L);
  /// Same as norm() but never extends; throws HorizonError beyond the horizon.
  [[nodiscard]] double norm_within(double L) const;

 private:
  VerblunskySequence seq_;
  cplx z_;
  std::vector<std::pair<cplx, cplx>> eta_;
  std::vector<double> partial_;
};

double solution_norm(const VerblunskySequence& seq, cplx z, std::pair<cplx, cplx> initial,
                     double L);

struct FitResult {
  double gamma_low = 0.0;
  double gamma_high = 0.0;
  double c_low = 0.0;
  double c_high = 0.0;
  double beta = 0.0;
  double gamma_ls = 0.0;  // plain least-squares slope, for reference
  std::size_t samples = 0;

  [[nodiscard]] bool bounds_hold(double L, double norm, double rel_tol = 1e-12) const;
};

/// Two-sided power-law envelope c_low L^gamma_low <= norm <= c_high L^gamma_high,
/// anchored at the smallest sampled L (slopes measured from the anchor).
FitResult fit_power_law(const std::vector<std::pair<double, double>>& samples);

/// Samples at L = base * 2^k, k = 0..count-1.
std::vector<std::pair<double, double>> dyadic_norm_samples(SolutionTrace& trace, double base,
                                                           int count);

/// Growth exponents of the Alexandrov solution pairs (1, +-conj(lambda)) for
/// lambda_count unimodular lambdas: the smallest gamma_low and largest gamma_high
/// over all fits, and the same extremes of the least-squares slopes.
struct SolutionExponents {
  double gamma1 = 0.0, gamma2 = 0.0;
  double gamma1_ls = 0.0, gamma2_ls = 0.0;
  [[nodiscard]] double beta() const { return 2.0 * gamma1 / (gamma1 + gamma2); }
  [[nodiscard]] double beta_ls() const { return 2.0 * gamma1_ls / (gamma1_ls + gamma2_ls); }
};
/// Samples are geometric on [L_min, L_max].
SolutionExponents solution_exponents(const VerblunskySequence& seq, cplx z, int lambda_count = 4,
                                     double L_min = 16.0, double L_max = 1e4, int samples = 12);

/// CSV L,norm,log_L,log_norm.
void write_norm_csv(std::ostream& os, const std::vector<std::pair<double, double>>& samples);
/// JSON object with the FitResult fields.
void write_fit_json(std::ostream& os, const FitResult& fit);

}  // namespace cmv
