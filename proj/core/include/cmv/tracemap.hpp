#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "cmv/transfer.hpp"
#include "cmv/types.hpp"

namespace cmv {

using Alphabet = std::pair<cplx, cplx>;  // (alpha, beta): letters 1 and 0

struct ContinuedFractionData {
  std::vector<long> a;          // a[k] = a_{k+1}
  std::vector<long long> q;     // q[0] = q[1] = 1, q[n+1] = a_{n+1} q[n] + q[n-1]
  double d = 0.0;               // density: max running average of a over the tail half
  double B = 0.0;               // growth base with q_n <= B^n
  bool bound_verified = false;  // q_n <= B^n held on the computed range

  [[nodiscard]] int n_max() const noexcept { return static_cast<int>(q.size()) - 1; }
  [[nodiscard]] bool all_ones() const;
};

/// a holds a_1, a_2, ...; at least n_max entries are required.
ContinuedFractionData cf_data(const std::vector<long>& a, int n_max,
                              std::optional<double> B_override = std::nullopt);
/// Partial quotients a_1 .. a_count of omega in (0, 1); exact ones for the golden mean.
std::vector<long> partial_quotients(double omega, int count);

/// a_n = 1 for all n (golden mean).
ContinuedFractionData golden_cf(int n_max);

/// SL(2,C) letter matrix one_step(letter, z) / z^{1/2}.
Mat2C letter_matrix(cplx letter, cplx z);

struct TraceRecord {
  int n = 0;
  long long q = 0;
  cplx x;   // tr M_{q_n}
  cplx zt;  // tr M_{q_{n-1}} M_{q_n}
  cplx I;   // Fricke invariant
  double norm = 0.0;  // ||M_{q_n}||
};

struct TraceOrbit {
  cplx z;
  Alphabet alphabet;
  std::vector<TraceRecord> records;  // n = 1 .. n_max (or until overflow)
  std::vector<Mat2C> matrices;       // M_{q_0} .. M_{q_last}
  bool overflow = false;

  [[nodiscard]] double invariant_drift() const;  // max |I_n - I_1| / (1 + |I_1|)
  /// max |I_n - I_1| / (1 + |I_1| + sum of the magnitudes of the four terms of I_n):
  /// the drift relative to what double precision can resolve.
  [[nodiscard]] double invariant_drift_scaled() const;
};

/// Seeds M_{q_0} = A(beta), M_{q_1} = A(alpha); M_{q_{n+1}} = M_{q_{n-1}} M_{q_n}^{a_{n+1}}.
/// For the golden mean, M_{q_n} (n >= 1) is the normalized transfer product over
/// alpha(1), ..., alpha(q_n) of the Sturmian sequence.
TraceOrbit trace_orbit(const Alphabet& alphabet, const ContinuedFractionData& cf, cplx z,
                       int n_max, double overflow_at = 1e150);

cplx fricke_invariant(cplx x_prev, cplx x_cur, cplx z_cur);

/// Per grid point: first m in 1..n with |x_m| > K and |z_m| > K (n + 1 if none;
/// orbits cut short by overflow fail at the overflow index).
struct SpectrumAtlas {
  std::vector<double> theta;
  std::vector<int> first_fail;
  std::vector<TraceOrbit> orbits;
  double K = 0.0;
  int n = 0;

  [[nodiscard]] std::vector<bool> mask(int m) const;
  [[nodiscard]] std::size_t count(int m) const;
};

SpectrumAtlas spectrum_atlas(const Alphabet& alphabet, const ContinuedFractionData& cf,
                             const std::vector<double>& theta_grid, int n, double K);
std::vector<bool> spectrum_approx(const Alphabet& alphabet, const ContinuedFractionData& cf,
                                  const std::vector<double>& theta_grid, int n, double K);

struct GammaInputs {
  double I_sup = 0.0;        // max |I(z)| over the circle grid
  double I_imag_max = 0.0;   // max |Im I(z)|, diagnostic
  double trace_sup = 2.0;    // sup |x_n|, |z_n| over spectrum points
  double norm_M0 = 1.0;      // sup ||M_0||
  double norm_M1 = 1.0;      // sup ||M_1||
  double norm_M0M1 = 1.0;    // sup ||M_0 M_1||
};

struct GammaConstants {
  double d = 0.0, B = 0.0, C_alphabeta = 0.0, L = 0.0;
  double gamma1 = 0.0, gamma2 = 0.0, C_upper = 0.0, beta = 0.0;
  double K = 0.0;
  GammaInputs inputs;
};

GammaConstants gamma_constants(const Alphabet& alphabet, const ContinuedFractionData& cf,
                               const GammaInputs& in);

/// Runs orbits on the grid, takes K = 2 + sqrt(8 + I_sup) unless given, and
/// collects the suprema entering L over the depth-n spectrum approximation.
struct GammaSweep {
  GammaConstants constants;
  SpectrumAtlas atlas;
};
GammaSweep gamma_sweep(const Alphabet& alphabet, const ContinuedFractionData& cf,
                       const std::vector<double>& theta_grid, int n,
                       std::optional<double> K = std::nullopt);

/// `count` evenly spread angles of the depth-n spectrum approximation on a
/// uniform grid of theta_count points.
std::vector<double> spectrum_sample_points(const Alphabet& alphabet,
                                           const ContinuedFractionData& cf, int n,
                                           int theta_count, int count);

/// CSV theta,n,q_n,abs_x,abs_z,re_I,im_I,in_spectrum.
void write_atlas_csv(std::ostream& os, const SpectrumAtlas& atlas);
void write_gamma_json(std::ostream& os, const GammaConstants& g);

std::vector<double> uniform_theta_grid(int count);

}  // namespace cmv
