#include "cmv/tracemap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include <json.hpp>

#include "cmv/coeffs.hpp"
#include "cmv/errors.hpp"

namespace cmv {

// ------------------------------------------------------- continued fractions

bool ContinuedFractionData::all_ones() const {
  return std::all_of(a.begin(), a.end(), [](long v) { return v == 1; });
}

ContinuedFractionData cf_data(const std::vector<long>& a, int n_max,
                              std::optional<double> B_override) {
  if (n_max < 1) throw DomainError("cf_data needs n_max >= 1");
  if (static_cast<int>(a.size()) < n_max) {
    throw InsufficientDataError("cf_data needs partial quotients a_1 .. a_n_max");
  }
  ContinuedFractionData cf;
  cf.a.assign(a.begin(), a.begin() + n_max);
  for (long v : cf.a) {
    if (v < 1) throw DomainError("partial quotients must be >= 1");
  }

  cf.q = {1, 1};
  for (int n = 1; n < n_max; ++n) {
    const long long an1 = cf.a[static_cast<std::size_t>(n)];  // a_{n+1}
    const long long qn = cf.q[static_cast<std::size_t>(n)];
    const long long qm = cf.q[static_cast<std::size_t>(n - 1)];
    if (qn > (std::numeric_limits<long long>::max() - qm) / an1) {
      throw OverflowError("q_n exceeds 64-bit range");
    }
    cf.q.push_back(an1 * qn + qm);
  }

  // limsup realization: largest running average over N in the tail half.
  double sum = 0.0;
  cf.d = 0.0;
  for (int N = 1; N <= n_max; ++N) {
    sum += static_cast<double>(cf.a[static_cast<std::size_t>(N - 1)]);
    if (2 * N >= n_max) cf.d = std::max(cf.d, sum / N);
  }

  if (B_override) {
    cf.B = *B_override;
  } else if (cf.all_ones()) {
    cf.B = kGoldenRatio;
  } else {
    cf.B = 1.0;
    for (int n = 1; n < static_cast<int>(cf.q.size()); ++n) {
      cf.B = std::max(cf.B, std::pow(static_cast<double>(cf.q[static_cast<std::size_t>(n)]),
                                     1.0 / n));
    }
  }
  if (!(cf.B > 1.0)) throw DomainError("growth base B must exceed 1");
  cf.bound_verified = true;
  for (int n = 0; n < static_cast<int>(cf.q.size()); ++n) {
    const double bound = std::pow(cf.B, n) * (1.0 + 1e-12);
    if (static_cast<double>(cf.q[static_cast<std::size_t>(n)]) > bound) cf.bound_verified = false;
  }
  return cf;
}

std::vector<long> partial_quotients(double omega, int count) {
  if (!(omega > 0.0 && omega < 1.0)) throw FrequencyRangeError("omega must lie in (0, 1)");
  if (count < 1) throw DomainError("need at least one partial quotient");
  if (is_golden_frequency(omega)) return std::vector<long>(static_cast<std::size_t>(count), 1L);
  std::vector<long> a;
  long double x = omega;
  for (int k = 0; k < count; ++k) {
    if (x <= 1e-15L) throw DomainError("omega is rational to working precision");
    const long double inv = 1.0L / x;
    const long double fl = std::floor(inv);
    if (fl > 1e9L) throw OverflowError("partial quotient out of range");
    a.push_back(static_cast<long>(fl));
    x = inv - fl;
  }
  return a;
}

ContinuedFractionData golden_cf(int n_max) {
  return cf_data(std::vector<long>(static_cast<std::size_t>(std::max(n_max, 1)), 1L), n_max);
}

// ------------------------------------------------------------------- orbits

Mat2C letter_matrix(cplx letter, cplx z) { return normalize_sl2(one_step(letter, z), z, 1); }

cplx fricke_invariant(cplx x_prev, cplx x_cur, cplx z_cur) {
  return x_prev * x_prev + x_cur * x_cur + z_cur * z_cur - x_prev * x_cur * z_cur;
}

double TraceOrbit::invariant_drift() const {
  if (records.empty()) return 0.0;
  const cplx I1 = records.front().I;
  double worst = 0.0;
  for (const auto& r : records) worst = std::max(worst, std::abs(r.I - I1) / (1.0 + std::abs(I1)));
  return worst;
}

double TraceOrbit::invariant_drift_scaled() const {
  if (records.empty()) return 0.0;
  const cplx I1 = records.front().I;
  double worst = 0.0;
  cplx x_prev = matrices.front().trace();
  for (const auto& r : records) {
    const double terms = std::norm(x_prev) + std::norm(r.x) + std::norm(r.zt) +
                         std::abs(x_prev * r.x * r.zt);
    worst = std::max(worst, std::abs(r.I - I1) / (1.0 + std::abs(I1) + terms));
    x_prev = r.x;
  }
  return worst;
}

TraceOrbit trace_orbit(const Alphabet& alphabet, const ContinuedFractionData& cf, cplx z,
                       int n_max, double overflow_at) {
  if (!(std::abs(alphabet.first) < 1.0) || !(std::abs(alphabet.second) < 1.0)) {
    throw ModulusError("alphabet letters must lie in the open unit disk");
  }
  if (z == cplx{}) throw DomainError("trace orbit needs z != 0");
  if (n_max > cf.n_max()) throw InsufficientDataError("trace orbit deeper than cf data");

  TraceOrbit orbit;
  orbit.z = z;
  orbit.alphabet = alphabet;
  orbit.matrices.push_back(letter_matrix(alphabet.second, z));  // M_{q_0}
  orbit.matrices.push_back(letter_matrix(alphabet.first, z));   // M_{q_1}

  for (int n = 1;; ++n) {
    const Mat2C& prev = orbit.matrices[static_cast<std::size_t>(n - 1)];
    const Mat2C& cur = orbit.matrices[static_cast<std::size_t>(n)];
    const cplx x_prev = prev.trace();
    const cplx x = cur.trace();
    const cplx zt = (prev * cur).trace();
    orbit.records.push_back(
        {n, cf.q[static_cast<std::size_t>(n)], x, zt, fricke_invariant(x_prev, x, zt), cur.norm()});
    if (n >= n_max) break;

    Mat2C power = cur;
    for (long k = 1; k < cf.a[static_cast<std::size_t>(n)]; ++k) power = power * cur;
    const Mat2C next = prev * power;
    if (!next.finite() || next.max_abs() > overflow_at) {
      orbit.overflow = true;
      break;
    }
    orbit.matrices.push_back(next);
  }
  return orbit;
}

// ----------------------------------------------------------------- spectrum

std::vector<double> uniform_theta_grid(int count) {
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) g.push_back(2.0 * std::numbers::pi * k / count);
  return g;
}

std::vector<bool> SpectrumAtlas::mask(int m) const {
  std::vector<bool> out(first_fail.size());
  for (std::size_t i = 0; i < first_fail.size(); ++i) out[i] = first_fail[i] > m;
  return out;
}

std::size_t SpectrumAtlas::count(int m) const {
  return static_cast<std::size_t>(
      std::count_if(first_fail.begin(), first_fail.end(), [m](int f) { return f > m; }));
}

SpectrumAtlas spectrum_atlas(const Alphabet& alphabet, const ContinuedFractionData& cf,
                             const std::vector<double>& theta_grid, int n, double K) {
  if (!(K > 2.0)) throw DomainError("spectrum threshold K must exceed 2");
  SpectrumAtlas atlas;
  atlas.theta = theta_grid;
  atlas.K = K;
  atlas.n = n;
  for (double th : theta_grid) {
    TraceOrbit orbit = trace_orbit(alphabet, cf, std::polar(1.0, th), n);
    int fail = n + 1;
    for (const auto& r : orbit.records) {
      if (std::abs(r.x) > K && std::abs(r.zt) > K) {
        fail = r.n;
        break;
      }
    }
    // An orbit that overflowed before depth n has left every bounded region.
    if (fail == n + 1 && orbit.overflow) fail = static_cast<int>(orbit.records.size()) + 1;
    atlas.first_fail.push_back(fail);
    atlas.orbits.push_back(std::move(orbit));
  }
  return atlas;
}

std::vector<bool> spectrum_approx(const Alphabet& alphabet, const ContinuedFractionData& cf,
                                  const std::vector<double>& theta_grid, int n, double K) {
  return spectrum_atlas(alphabet, cf, theta_grid, n, K).mask(n);
}

// ---------------------------------------------------------------- constants

GammaConstants gamma_constants(const Alphabet& alphabet, const ContinuedFractionData& cf,
                               const GammaInputs& in) {
  if (8.0 + in.I_sup < 0.0) throw DomainError("8 + I_sup is negative; sqrt would be complex");
  GammaConstants g;
  g.inputs = in;
  g.d = cf.d;
  g.B = cf.B;
  const double ra = std::sqrt(1.0 - std::norm(alphabet.first));
  const double rb = std::sqrt(1.0 - std::norm(alphabet.second));
  g.C_alphabeta = std::max(2.0 + std::sqrt(8.0 + in.I_sup), 4.0 / (ra * rb));
  const double t = std::max(2.0, in.trace_sup);
  g.L = std::max({4.0 * t, 4.0 * in.norm_M1, 4.0 * in.norm_M0, 4.0 * in.norm_M0M1}) *
        (4.0 + 2.0 * t);
  g.gamma2 = 4.0 * g.d * std::log2(g.L);
  g.C_upper = std::pow(g.L, 4.0 * g.d);
  g.gamma1 = std::log(1.0 + 1.0 / (4.0 * g.C_alphabeta * g.C_alphabeta)) / (16.0 * std::log(g.B));
  g.beta = 2.0 * g.gamma1 / (g.gamma1 + g.gamma2);
  g.K = 2.0 + std::sqrt(8.0 + in.I_sup);
  return g;
}

GammaSweep gamma_sweep(const Alphabet& alphabet, const ContinuedFractionData& cf,
                       const std::vector<double>& theta_grid, int n, std::optional<double> K) {
  GammaInputs in;
  for (double th : theta_grid) {
    const TraceOrbit o = trace_orbit(alphabet, cf, std::polar(1.0, th), 1);
    const cplx I = o.records.front().I;
    in.I_sup = std::max(in.I_sup, std::abs(I));
    in.I_imag_max = std::max(in.I_imag_max, std::abs(I.imag()));
  }
  const double k_used = K.value_or(2.0 + std::sqrt(8.0 + in.I_sup));

  GammaSweep out;
  out.atlas = spectrum_atlas(alphabet, cf, theta_grid, n, k_used);
  const auto mask = out.atlas.mask(n);
  const bool any = std::any_of(mask.begin(), mask.end(), [](bool b) { return b; });
  in.trace_sup = 2.0;
  in.norm_M0 = in.norm_M1 = in.norm_M0M1 = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (any && !mask[i]) continue;
    const TraceOrbit& o = out.atlas.orbits[i];
    for (const auto& r : o.records) {
      in.trace_sup = std::max({in.trace_sup, std::abs(r.x), std::abs(r.zt)});
    }
    const Mat2C& M0 = o.matrices[0];
    const Mat2C& M1 = o.matrices[1];
    in.norm_M0 = std::max(in.norm_M0, M0.norm());
    in.norm_M1 = std::max(in.norm_M1, M1.norm());
    in.norm_M0M1 = std::max(in.norm_M0M1, (M0 * M1).norm());
  }
  out.constants = gamma_constants(alphabet, cf, in);
  out.constants.K = k_used;
  return out;
}

std::vector<double> spectrum_sample_points(const Alphabet& alphabet,
                                           const ContinuedFractionData& cf, int n,
                                           int theta_count, int count) {
  const GammaSweep sweep = gamma_sweep(alphabet, cf, uniform_theta_grid(theta_count), n);
  std::vector<double> in;
  const auto mask = sweep.atlas.mask(n);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) in.push_back(sweep.atlas.theta[i]);
  }
  if (count < 1 || static_cast<int>(in.size()) < count) {
    throw InsufficientDataError("spectrum approximation has too few grid points");
  }
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(in[static_cast<std::size_t>(2 * k + 1) * in.size() /
                     static_cast<std::size_t>(2 * count)]);
  }
  return out;
}

// ---------------------------------------------------------------------- I/O

void write_atlas_csv(std::ostream& os, const SpectrumAtlas& atlas) {
  const auto old = os.precision(17);
  os << "theta,n,q_n,abs_x,abs_z,re_I,im_I,in_spectrum\n";
  for (std::size_t i = 0; i < atlas.theta.size(); ++i) {
    for (const auto& r : atlas.orbits[i].records) {
      os << atlas.theta[i] << ',' << r.n << ',' << r.q << ',' << std::abs(r.x) << ','
         << std::abs(r.zt) << ',' << r.I.real() << ',' << r.I.imag() << ','
         << (atlas.first_fail[i] > r.n ? 1 : 0) << '\n';
    }
  }
  os.precision(old);
}

void write_gamma_json(std::ostream& os, const GammaConstants& g) {
  const nlohmann::json j = {{"d", g.d},
                            {"B", g.B},
                            {"C_alphabeta", g.C_alphabeta},
                            {"L", g.L},
                            {"gamma1", g.gamma1},
                            {"gamma2", g.gamma2},
                            {"C_upper", g.C_upper},
                            {"beta", g.beta},
                            {"K", g.K},
                            {"I_sup", g.inputs.I_sup},
                            {"I_imag_max", g.inputs.I_imag_max},
                            {"trace_sup", g.inputs.trace_sup},
                            {"norm_M0", g.inputs.norm_M0},
                            {"norm_M1", g.inputs.norm_M1},
                            {"norm_M0M1", g.inputs.norm_M0M1}};
  os << j.dump(2) << '\n';
}

}  // namespace cmv
