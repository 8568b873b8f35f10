#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cmv/caratheodory.hpp"
#include "cmv/coeffs.hpp"
#include "cmv/types.hpp"

namespace cmv {

/// How alpha0 in the M- relation is read off the two-sided sequence.
enum class MMinusConvention {
  direct,       // alpha0 = alpha(-1)
  gz_relabeled  // alpha0 = -conj(alpha(-1))
};

std::string to_string(MMinusConvention c);

struct GZOptions {
  long half_width = 0;         // 0: chosen from |z|
  long max_half_width = 1L << 20;
  cplx eta_b{1.0, 0.0};
  double decay_tol = 1e-12;    // |solution at far edge| / |solution at origin|
  double consistency_tol = 1e-6;
};

/// Weyl-type solutions and Caratheodory data at a fixed z, |z| != 1, z != 0.
struct GZContext {
  cplx z;
  CaratheodoryValue F_plus;
  CaratheodoryValue F_minus;
  CaratheodoryValue M_minus;
  MMinusConvention convention = MMinusConvention::direct;
  cplx alpha0;       // alpha(0)
  cplx alpha_m1;     // alpha(-1)
  double rho0 = 1.0;

  long lo = 0, hi = -1;  // window; solutions indexed from lo
  std::vector<cplx> u_plus, u_minus, v_plus, v_minus;

  // Diagnostics (relative to the largest solution value on the interior).
  double residual_u_plus = 0, residual_u_minus = 0, residual_v_plus = 0, residual_v_minus = 0;
  double decay_u_plus = 0, decay_u_minus = 0, decay_v_plus = 0, decay_v_minus = 0;
  double origin_mismatch = 0;  // worst relative mismatch at the non-anchor site

  [[nodiscard]] bool in_interior(long x) const noexcept { return x >= lo + 4 && x <= hi - 4; }
  [[nodiscard]] cplx u_p(long x) const;
  [[nodiscard]] cplx u_m(long x) const;
  [[nodiscard]] cplx v_p(long x) const;
  [[nodiscard]] cplx v_m(long x) const;
  [[nodiscard]] double max_residual() const;
};

/// Target values of u+-, v+- at sites 0 and 1 for a given F in {F+, M-}.
struct OriginValues {
  cplx u0, u1, v0, v1;
};
OriginValues origin_values(cplx z, cplx alpha0, cplx F);

GZContext build_gz_context(const VerblunskySequence& seq, cplx z, const GZOptions& opt = {});

/// (E - z)^{-1}(x, y) from the context solutions.
cplx gz_entry(const GZContext& ctx, long x, long y);

/// Closed-form G00 + G11 from F+, M-, alpha(0) and z.
cplx corner_trace_closed(cplx z, cplx F_plus, cplx M_minus, cplx alpha0);
cplx corner_trace(const GZContext& ctx);

/// F = 1 + z (G00 + G11): the Caratheodory function of (mu_0 + mu_1) / 2.
CaratheodoryValue F_extended(const GZContext& ctx);

/// Evaluates F_extended on the open disk from the two Schur evaluators only.
class ExtendedCaratheodory {
 public:
  explicit ExtendedCaratheodory(const VerblunskySequence& seq,
                                MMinusConvention convention = MMinusConvention::direct);
  [[nodiscard]] CaratheodoryValue F(cplx z) const;
  [[nodiscard]] cplx corner(cplx z) const;
  [[nodiscard]] CaratheodoryValue F_plus(cplx z) const { return right_.evaluate_adaptive(z); }
  [[nodiscard]] CaratheodoryValue M_minus(cplx z) const;

 private:
  SchurEvaluator right_;
  SchurEvaluator left_;
  cplx alpha0_;
  cplx alpha_m1_;
  MMinusConvention convention_;
};

struct MeasureProfile {
  double r = 0.0;
  std::vector<double> theta;       // increasing
  std::vector<double> density;     // Re F(r e^{i theta}) / 2 pi
  std::vector<double> cumulative;  // trapezoid masses from theta.front()
  bool periodic = false;           // uniform grid on [0, 2 pi)

  [[nodiscard]] double total_mass() const;
  /// Mass of [a, b] by the trapezoid rule with linear interpolation at the ends.
  [[nodiscard]] double arc_mass(double a, double b) const;
};

MeasureProfile profile_from(const ExtendedCaratheodory& F, double r,
                            const std::vector<double>& theta_grid, bool periodic);
MeasureProfile lambda_r_profile(const VerblunskySequence& seq, double r,
                                const std::vector<double>& theta_grid);
/// Local profile on [Theta - eps, Theta + eps] with `points` samples.
MeasureProfile arc_profile(const ExtendedCaratheodory& F, double r, double Theta, double eps,
                           int points);

struct HolderFit {
  double beta_hat = 0.0;       // least-squares slope of log mass vs log eps
  double envelope_beta = 0.0;  // smallest slope between consecutive eps values
  std::vector<double> eps;
  std::vector<double> mass;
  int points = 0;              // arc samples used (after refinement)
};

/// Profiles[i] must cover [Theta - eps[i], Theta + eps[i]].
HolderFit holder_exponent(const std::vector<MeasureProfile>& profiles, double Theta,
                          const std::vector<double>& eps);

/// Pairs each eps with r = 1 - eps and doubles the arc resolution until beta_hat
/// moves by less than `tol`.
HolderFit holder_at(const ExtendedCaratheodory& F, double Theta, const std::vector<double>& eps,
                    int start_points = 65, double tol = 0.01, int max_points = 1 << 14);

std::vector<double> geometric_eps(double eps_min, double eps_max, int count);

void write_profile_csv(std::ostream& os, const MeasureProfile& p);
void write_holder_csv(std::ostream& os, const HolderFit& fit);
void write_holder_json(std::ostream& os, const HolderFit& fit, double gamma_cross_check);

}  // namespace cmv
