#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "cmv/coeffs.hpp"
#include "cmv/types.hpp"

namespace cmv {

/// Value of a Caratheodory (Re > 0) or anti-Caratheodory (Re < 0) function.
struct CaratheodoryValue {
  cplx value;
  bool anti = false;
  int depth = 0;  // Schur depth used, 0 when not applicable

  [[nodiscard]] bool sign_ok() const noexcept {
    return anti ? value.real() < 0.0 : value.real() > 0.0;
  }
};

/// Schur-algorithm evaluator for a one-sided sequence, zero tail.
/// Coefficients are cached lazily; call warm() before sharing across threads.
class SchurEvaluator {
 public:
  explicit SchurEvaluator(const VerblunskySequence& seq, int max_depth = 1 << 18);

  /// Schur function f(z) at a fixed depth (|z| < 1).
  [[nodiscard]] cplx schur_function(cplx z, int depth) const;
  /// F = (1 + z f) / (1 - z f) at a fixed depth.
  [[nodiscard]] CaratheodoryValue evaluate(cplx z, int depth) const;
  /// Doubles the depth from 64 until two successive values differ by < tol.
  [[nodiscard]] CaratheodoryValue evaluate_adaptive(cplx z, double tol = 1e-12) const;
  /// Adaptive value on |z| < 1 and -conj(F(1/conj z)) for |z| > 1.
  [[nodiscard]] CaratheodoryValue evaluate_anywhere(cplx z, double tol = 1e-12) const;

  [[nodiscard]] int max_depth() const noexcept { return max_depth_; }
  void warm(int depth) const { ensure(depth); }

 private:
  void ensure(int depth) const;

  VerblunskySequence seq_;
  int max_depth_;
  mutable std::vector<cplx> alpha_;
};

CaratheodoryValue schur_eval_F(const VerblunskySequence& seq, cplx z, int depth);
CaratheodoryValue schur_eval_F_adaptive(const VerblunskySequence& seq, cplx z,
                                        double tol = 1e-12);

/// Spectral measure of delta_0 for the N x N truncation, from a full eigen-decomposition.
class EigenMeasure {
 public:
  EigenMeasure(const VerblunskySequence& seq, long N, cplx eta_b = {1.0, 0.0});

  [[nodiscard]] CaratheodoryValue F(cplx z) const;
  [[nodiscard]] const std::vector<cplx>& eigenvalues() const noexcept { return eig_; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weight_; }
  [[nodiscard]] double weight_sum() const;
  /// max ||lambda_j| - 1| before projection onto the circle.
  [[nodiscard]] double max_modulus_defect() const;
  [[nodiscard]] std::size_t clusters_resolved() const noexcept { return clusters_; }

 private:
  std::vector<cplx> eig_;
  std::vector<double> weight_;
  std::size_t clusters_ = 0;
  double modulus_defect_ = 0.0;
};

CaratheodoryValue measure_oracle_F(const VerblunskySequence& seq, cplx z, long N,
                                   cplx eta_b = {1.0, 0.0});

/// M- = [Re(1 - a) - i Im(1 + a) F-] / [i Im(1 - a) - Re(1 + a) F-], a = conj(alpha0).
CaratheodoryValue m_minus(const CaratheodoryValue& F_minus, cplx alpha0);

/// (||phi^lambda||_L, ||psi^lambda||_L) with initial pairs (1, conj l), (1, -conj l).
std::pair<double, double> alexandrov_norms(const VerblunskySequence& seq, cplx lambda, cplx z,
                                           double L);

struct XOfR {
  double x = 0.0;
  bool clamped_at_zero = false;  // product already >= sqrt2 at x = 0
  double residual = 0.0;         // (1-r)||phi||_x ||psi||_x - sqrt2
  double phi_norm = 0.0;
  double psi_norm = 0.0;
  long horizon = 0;
};

/// Solves (1 - r) ||phi^lambda||_x ||psi^lambda||_x = sqrt2 for x >= 0.
XOfR solve_x_of_r(const VerblunskySequence& seq, cplx lambda, cplx z, double r,
                  long max_horizon = 1L << 22);

struct JLRatio {
  double ratio = 0.0;
  double abs_F = 0.0;
  XOfR x;
};

/// |F^lambda(r z)| ||phi^lambda||_x / ||psi^lambda||_x at x = x(r).
JLRatio jl_ratio_detail(const VerblunskySequence& seq, cplx lambda, cplx z, double r);
double jl_ratio(const VerblunskySequence& seq, cplx lambda, cplx z, double r);

/// sup over |lambda| = 1 of |((1-l) + (1+l)F) / ((1+l) + (1-l)F)|, closed form.
double mobius_sup(const CaratheodoryValue& F);
double mobius_map_abs(cplx F, cplx lambda);
/// Largest value over an equispaced lambda grid (no refinement).
double mobius_sup_grid(cplx F, int points = 4096);
/// Grid maximum refined by golden-section search around the best grid point.
double mobius_sup_refined(cplx F, int points = 4096);

/// CSV r,theta,re_F,im_F,x_of_r,jl_ratio,mobius_sup.
struct CaratheodoryRow {
  double r, theta;
  cplx F;
  double x_of_r, jl, mobius;
};
void write_caratheodory_csv(std::ostream& os, const std::vector<CaratheodoryRow>& rows);

}  // namespace cmv
