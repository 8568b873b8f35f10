#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "cmv/coeffs.hpp"
#include "cmv/types.hpp"

namespace cmv {

/// Coefficient lookup n -> alpha(n). Window builders call it on [lo - 1, hi].
using CoefficientFn = std::function<cplx(long)>;

/// Pentadiagonal matrix on the index range [lo, hi].
/// rows[i][k] holds the entry (lo + i, lo + i + k - 2).
struct BandMatrix {
  long lo = 0;
  long hi = -1;
  std::vector<std::array<cplx, 5>> rows;

  [[nodiscard]] long size() const noexcept { return hi - lo + 1; }
  [[nodiscard]] cplx at(long r, long c) const;
  /// y = A x for x indexed from lo.
  [[nodiscard]] std::vector<cplx> apply(const std::vector<cplx>& x) const;
  [[nodiscard]] std::vector<cplx> apply_adjoint(const std::vector<cplx>& x) const;
  /// Dense row-major copy, for tests and small diagnostics.
  [[nodiscard]] std::vector<cplx> dense() const;
  /// max |(A*A - I)_{ij}| and max |(AA* - I)_{ij}|.
  [[nodiscard]] std::pair<double, double> unitarity_defect() const;
};

/// Pentadiagonal CMV band on [lo, hi]; alpha(lo - 1) and alpha(hi) act as
/// closures and should be unimodular for a unitary result.
BandMatrix cmv_band(const CoefficientFn& alpha, long lo, long hi);

struct FiniteCMV {
  BandMatrix band;
  cplx eta_b{1.0, 0.0};
  [[nodiscard]] long size() const noexcept { return band.size(); }
};

/// N x N truncation of the one-sided CMV matrix built from alpha(0..N-2),
/// closed with alpha(N-1) := eta_b.
FiniteCMV build_finite_cmv(const VerblunskySequence& seq, long N, cplx eta_b = {1.0, 0.0});

struct ExtendedCMVWindow {
  BandMatrix band;
  cplx eta_b{1.0, 0.0};
};

/// Two-sided CMV restricted to [lo, hi], closed with alpha(lo-1) = alpha(hi) = eta_b.
/// Rows lo+2 .. hi-2 agree with the infinite operator.
ExtendedCMVWindow build_extended_window(const VerblunskySequence& seq, long lo, long hi,
                                        cplx eta_b = {1.0, 0.0});

/// Finitely supported vector: amp[i] is the value at site first + i.
struct State {
  long first = 0;
  std::vector<cplx> amp;

  [[nodiscard]] long last() const noexcept { return first + static_cast<long>(amp.size()) - 1; }
  [[nodiscard]] cplx at(long n) const noexcept;
  [[nodiscard]] double norm() const;
  static State delta(long n, cplx value = {1.0, 0.0});
};

State add(const State& a, const State& b);
State scale(cplx c, const State& a);
/// sum_k c_k s_k
State combine(const std::vector<std::pair<cplx, State>>& terms);
double max_abs_diff(const State& a, const State& b);

/// Coefficient lookup for operator actions. One-sided sequences are closed at
/// the origin with alpha(-1) = -1, which decouples the half line.
CoefficientFn operator_coefficients(const VerblunskySequence& seq);

/// Exact action of the (two-sided or half-line) CMV operator on a finite vector.
State apply_extended(const VerblunskySequence& seq, const State& v);
State apply_extended_adjoint(const VerblunskySequence& seq, const State& v);
State apply_extended_transpose(const VerblunskySequence& seq, const State& v);

State apply_with(const CoefficientFn& alpha, const State& v);
State apply_adjoint_with(const CoefficientFn& alpha, const State& v);
State apply_transpose_with(const CoefficientFn& alpha, const State& v);

/// Right half alpha(0), alpha(1), ... and reflected left half
/// beta(k) = conj(alpha(-2 - k)), both one-sided.
std::pair<VerblunskySequence, VerblunskySequence> split_at_origin(const VerblunskySequence& seq);

/// Band of the two-sided operator on [lo, hi] with alpha(-1) forced to -1.
BandMatrix decoupled_band(const VerblunskySequence& seq, long lo, long hi);

class BandedLU;

/// Dense-window resolvent (E_W - z)^{-1} on [-half_width, half_width].
class ResolventOracle {
 public:
  ResolventOracle(const VerblunskySequence& seq, cplx z, long half_width,
                  cplx eta_b = {1.0, 0.0});
  ~ResolventOracle();
  ResolventOracle(ResolventOracle&&) noexcept;
  ResolventOracle& operator=(ResolventOracle&&) noexcept;

  [[nodiscard]] cplx entry(long x, long y) const;
  /// Full column y of the window resolvent, indexed from -half_width.
  [[nodiscard]] const std::vector<cplx>& column(long y) const;
  /// max |((E_W - z) G)(x, y) - delta_xy| over interior columns.
  [[nodiscard]] double residual() const;
  [[nodiscard]] long half_width() const noexcept { return half_width_; }
  [[nodiscard]] cplx z() const noexcept { return z_; }

 private:
  void check_interior(long x) const;

  BandMatrix shifted_;
  std::unique_ptr<BandedLU> lu_;
  cplx z_;
  long half_width_;
  mutable std::vector<std::pair<long, std::vector<cplx>>> columns_;
};

cplx resolvent_oracle(const VerblunskySequence& seq, cplx z, long half_width, long x, long y);

struct SpectralBasisReport {
  long n = 0;
  double residual_2n_plus_2 = 0.0;
  double residual_2n_minus_1 = 0.0;
  double residual_2n_plus_3 = 0.0;
  double residual_2n_minus_2 = 0.0;
  double min_rho = 1.0;
  [[nodiscard]] double max_residual() const;
};

/// Rebuilds delta_{2n+2}, delta_{2n-1}, delta_{2n+3}, delta_{2n-2} as explicit
/// combinations of E^k delta_{2n}, E^k delta_{2n+1} and reports the residuals.
SpectralBasisReport spectral_basis_reach(const VerblunskySequence& seq, long n);

/// Repeated band application with coefficients cached over the reachable range.
class WalkEvolver {
 public:
  WalkEvolver(const VerblunskySequence& seq, State psi0, long max_steps);
  void step();
  void advance(long k);
  [[nodiscard]] const State& state() const noexcept { return psi_; }
  [[nodiscard]] long steps() const noexcept { return steps_; }

 private:
  [[nodiscard]] cplx alpha(long n) const;

  std::vector<cplx> cache_;
  long cache_first_;
  State psi_;
  long steps_ = 0;
  long max_steps_;
};

State evolve_walk(const VerblunskySequence& seq, const State& psi0, long k);

/// CSV row,col,re,im over nonzero band entries.
void write_band_csv(std::ostream& os, const BandMatrix& band);
/// CSV n,re,im,abs2.
void write_state_csv(std::ostream& os, const State& s);

}  // namespace cmv
