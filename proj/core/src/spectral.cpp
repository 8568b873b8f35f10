#include "cmv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include <json.hpp>

#include "cmv/banded.hpp"
#include "cmv/errors.hpp"
#include "cmv/operator.hpp"

namespace cmv {

namespace {


cplx alpha0_for(MMinusConvention c, cplx alpha_m1) {
  return c == MMinusConvention::direct ? alpha_m1 : -std::conj(alpha_m1);
}

struct Scaled {
  std::vector<cplx> values;
  double mismatch = 0.0;
};

// Scales raw so that its sites 0 and 1 reproduce (t0, t1). The larger target
// is matched exactly; the other one measures consistency.
Scaled scale_to_origin(const std::vector<cplx>& raw, long lo, cplx t0, cplx t1) {
  const auto i0 = static_cast<std::size_t>(0 - lo);
  const auto i1 = static_cast<std::size_t>(1 - lo);
  const bool anchor0 = std::abs(t0) >= 1e-3 * std::abs(t1);
  const cplx r_anchor = anchor0 ? raw[i0] : raw[i1];
  if (r_anchor == cplx{}) throw ConventionError("solution vanishes at the scaling site");
  const cplx c = (anchor0 ? t0 : t1) / r_anchor;
  Scaled out;
  out.values.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out.values[i] = c * raw[i];
  const double ref = std::max(std::abs(t0), std::abs(t1));
  out.mismatch = anchor0 ? std::abs(out.values[i1] - t1) / ref : std::abs(out.values[i0] - t0) / ref;
  if (anchor0) out.values[i0] = t0;
  else out.values[i1] = t1;
  return out;
}

// Relative residual of (A - z) w (or (A^T - z) w) on rows lo+4 .. hi-4.
double interior_residual(const BandMatrix& band, cplx z, const std::vector<cplx>& w,
                         bool transpose) {
  double worst = 0.0, scale = 0.0;
  for (long x = band.lo + 4; x <= band.hi - 4; ++x) {
    cplx s = -z * w[static_cast<std::size_t>(x - band.lo)];
    for (long c = x - 2; c <= x + 2; ++c) {
      const cplx a = transpose ? band.at(c, x) : band.at(x, c);
      s += a * w[static_cast<std::size_t>(c - band.lo)];
    }
    worst = std::max(worst, std::abs(s));
    scale = std::max(scale, std::abs(w[static_cast<std::size_t>(x - band.lo)]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

double decay_ratio(const std::vector<cplx>& w, long lo, long far_site) {
  const double origin = std::max(std::abs(w[static_cast<std::size_t>(-lo)]),
                                 std::abs(w[static_cast<std::size_t>(1 - lo)]));
  return std::abs(w[static_cast<std::size_t>(far_site - lo)]) / origin;
}

long default_half_width(cplx z) {
  const double k = std::abs(std::log(std::abs(z)));
  return std::max(64L, static_cast<long>(std::ceil(36.0 / k)) + 16);
}

}  // namespace

std::string to_string(MMinusConvention c) {
  return c == MMinusConvention::direct ? "alpha0 = alpha(-1)" : "alpha0 = -conj(alpha(-1))";
}

OriginValues origin_values(cplx z, cplx alpha0, cplx F) {
  const double rho0 = std::sqrt(1.0 - std::norm(alpha0));
  const cplx a0c = std::conj(alpha0);
  return {z * (1.0 + F), (-1.0 - alpha0 * z + F * (1.0 - alpha0 * z)) / rho0, -1.0 + F,
          (z + a0c + F * (z - a0c)) / rho0};
}

// ------------------------------------------------------------------- context

cplx GZContext::u_p(long x) const { return u_plus.at(static_cast<std::size_t>(x - lo)); }
cplx GZContext::u_m(long x) const { return u_minus.at(static_cast<std::size_t>(x - lo)); }
cplx GZContext::v_p(long x) const { return v_plus.at(static_cast<std::size_t>(x - lo)); }
cplx GZContext::v_m(long x) const { return v_minus.at(static_cast<std::size_t>(x - lo)); }

double GZContext::max_residual() const {
  return std::max({residual_u_plus, residual_u_minus, residual_v_plus, residual_v_minus});
}

GZContext build_gz_context(const VerblunskySequence& seq, cplx z, const GZOptions& opt) {
  if (seq.support() != Support::two_sided) {
    throw SupportError("resolvent assembly needs a two-sided sequence");
  }
  if (z == cplx{}) throw DomainError("z = 0 is excluded");
  if (std::abs(std::abs(z) - 1.0) < 1e-3) {
    throw DomainError("direct resolvent assembly needs ||z| - 1| >= 1e-3");
  }

  const auto [right, left] = split_at_origin(seq);
  const SchurEvaluator right_eval(right);
  const SchurEvaluator left_eval(left);

  GZContext ctx;
  ctx.z = z;
  ctx.alpha0 = seq.alpha(0);
  ctx.alpha_m1 = seq.alpha(-1);
  ctx.rho0 = seq.rho(0);
  ctx.F_plus = right_eval.evaluate_anywhere(z);
  ctx.F_minus = left_eval.evaluate_anywhere(z);

  long hw = opt.half_width > 0 ? opt.half_width : default_half_width(z);
  for (;;) {
    if (hw > opt.max_half_width) {
      throw WindowError("solutions did not decay within half-width " +
                        std::to_string(opt.max_half_width));
    }
    const long lo = -hw, hi = hw;
    const BandMatrix band = build_extended_window(seq, lo, hi, opt.eta_b).band;
    const BandedLU lu(band, z, 0.0);
    const auto n = static_cast<std::size_t>(hi - lo + 1);
    const auto source = [&](long site) {
      std::vector<cplx> e(n);
      e[static_cast<std::size_t>(site - lo)] = 1.0;
      return e;
    };
    const std::vector<cplx> up_raw = lu.solve(source(lo + 2));
    const std::vector<cplx> um_raw = lu.solve(source(hi - 2));
    const std::vector<cplx> vp_raw = lu.solve_transpose(source(lo + 2));
    const std::vector<cplx> vm_raw = lu.solve_transpose(source(hi - 2));

    const double dec_up = decay_ratio(up_raw, lo, hi - 4);
    const double dec_um = decay_ratio(um_raw, lo, lo + 4);
    const double dec_vp = decay_ratio(vp_raw, lo, hi - 4);
    const double dec_vm = decay_ratio(vm_raw, lo, lo + 4);
    if (std::max({dec_up, dec_um, dec_vp, dec_vm}) > opt.decay_tol && opt.half_width == 0) {
      hw *= 2;
      continue;
    }

    const OriginValues plus = origin_values(z, ctx.alpha0, ctx.F_plus.value);
    Scaled up = scale_to_origin(up_raw, lo, plus.u0, plus.u1);
    Scaled vp = scale_to_origin(vp_raw, lo, plus.v0, plus.v1);
    if (std::max(up.mismatch, vp.mismatch) > opt.consistency_tol) {
      throw ConventionError("F+ origin values disagree with the decaying solutions (mismatch " +
                            std::to_string(std::max(up.mismatch, vp.mismatch)) + ")");
    }

    bool resolved = false;
    std::string tried;
    for (MMinusConvention conv : {MMinusConvention::direct, MMinusConvention::gz_relabeled}) {
      const CaratheodoryValue M = m_minus(ctx.F_minus, alpha0_for(conv, ctx.alpha_m1));
      const OriginValues minus = origin_values(z, ctx.alpha0, M.value);
      Scaled um = scale_to_origin(um_raw, lo, minus.u0, minus.u1);
      Scaled vm = scale_to_origin(vm_raw, lo, minus.v0, minus.v1);
      const double mis = std::max(um.mismatch, vm.mismatch);
      tried += " " + to_string(conv) + ": " + std::to_string(mis) + ";";
      if (mis > opt.consistency_tol) continue;
      ctx.convention = conv;
      ctx.M_minus = M;
      ctx.u_minus = std::move(um.values);
      ctx.v_minus = std::move(vm.values);
      ctx.origin_mismatch = std::max({up.mismatch, vp.mismatch, mis});
      resolved = true;
      break;
    }
    if (!resolved) {
      throw ConventionError("no M- convention matches the decaying left solutions;" + tried);
    }

    ctx.lo = lo;
    ctx.hi = hi;
    ctx.u_plus = std::move(up.values);
    ctx.v_plus = std::move(vp.values);
    ctx.decay_u_plus = dec_up;
    ctx.decay_u_minus = dec_um;
    ctx.decay_v_plus = dec_vp;
    ctx.decay_v_minus = dec_vm;
    ctx.residual_u_plus = interior_residual(band, z, ctx.u_plus, false);
    ctx.residual_u_minus = interior_residual(band, z, ctx.u_minus, false);
    ctx.residual_v_plus = interior_residual(band, z, ctx.v_plus, true);
    ctx.residual_v_minus = interior_residual(band, z, ctx.v_minus, true);
    return ctx;
  }
}

cplx gz_entry(const GZContext& ctx, long x, long y) {
  if (!ctx.in_interior(x) || !ctx.in_interior(y)) {
    throw WindowError("gz_entry index outside the context interior");
  }
  const cplx den = ctx.F_plus.value - ctx.M_minus.value;
  if (std::abs(den) < 1e-13) throw DegenerateError("F+ - M- vanishes");
  const cplx pref = -1.0 / (2.0 * ctx.z * ctx.z * den);
  const bool odd = (x % 2) != 0;
  if (x > y || (x == y && odd)) return pref * ctx.u_p(x) * ctx.v_m(y);
  return pref * ctx.u_m(x) * ctx.v_p(y);
}

cplx corner_trace_closed(cplx z, cplx F_plus, cplx M_minus, cplx alpha0) {
  const cplx den = F_plus - M_minus;
  if (std::abs(den) < 1e-13) throw DegenerateError("F+ - M- vanishes");
  if (z == cplx{}) throw DomainError("closed-form corner trace needs z != 0");
  const double rho2 = 1.0 - std::norm(alpha0);
  const cplx a0c = std::conj(alpha0);
  const cplx t1 = -(-1.0 + F_plus) * (1.0 + M_minus) / (2.0 * z * den);
  const cplx t2 = (z + a0c + M_minus * (z - a0c)) * (-1.0 - alpha0 * z + F_plus * (1.0 - alpha0 * z)) /
                  (2.0 * rho2 * z * z * den);
  return t1 - t2;
}

cplx corner_trace(const GZContext& ctx) {
  return corner_trace_closed(ctx.z, ctx.F_plus.value, ctx.M_minus.value, ctx.alpha0);
}

CaratheodoryValue F_extended(const GZContext& ctx) {
  if (!(std::abs(ctx.z) < 1.0)) throw DiskError("F_extended needs |z| < 1");
  return {1.0 + ctx.z * corner_trace(ctx), false, ctx.F_plus.depth};
}

// ------------------------------------------------------- ExtendedCaratheodory

ExtendedCaratheodory::ExtendedCaratheodory(const VerblunskySequence& seq,
                                           MMinusConvention convention)
    : right_(split_at_origin(seq).first),
      left_(split_at_origin(seq).second),
      alpha0_(seq.alpha(0)),
      alpha_m1_(seq.alpha(-1)),
      convention_(convention) {}

CaratheodoryValue ExtendedCaratheodory::M_minus(cplx z) const {
  return m_minus(left_.evaluate_adaptive(z), alpha0_for(convention_, alpha_m1_));
}

cplx ExtendedCaratheodory::corner(cplx z) const {
  return corner_trace_closed(z, right_.evaluate_adaptive(z).value, M_minus(z).value, alpha0_);
}

CaratheodoryValue ExtendedCaratheodory::F(cplx z) const {
  if (!(std::abs(z) < 1.0)) throw DiskError("F_extended needs |z| < 1");
  if (z == cplx{}) return {1.0, false, 0};
  return {1.0 + z * corner(z), false, 0};
}

// ------------------------------------------------------------------ profiles

double MeasureProfile::total_mass() const {
  if (cumulative.empty()) return 0.0;
  double m = cumulative.back();
  if (periodic) {
    const double h = theta.front() + kTwoPi - theta.back();
    m += 0.5 * h * (density.back() + density.front());
  }
  return m;
}

double MeasureProfile::arc_mass(double a, double b) const {
  if (theta.size() < 2) throw InsufficientDataError("profile needs at least two samples");
  if (b < a) throw DomainError("arc end before arc start");
  const std::size_t n = theta.size();
  const double total = total_mass();

  // Mass from theta.front() to t for t inside the sampled range (one period).
  const auto local = [&](double t) {
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(theta.begin(), theta.end(), t) - theta.begin());
    i = (i == 0) ? 0 : i - 1;
    const double t0 = theta[i];
    double t1, d1;
    if (i + 1 < n) {
      t1 = theta[i + 1];
      d1 = density[i + 1];
    } else {
      if (!periodic) return cumulative.back();
      t1 = theta.front() + kTwoPi;
      d1 = density.front();
    }
    const double h = t1 - t0, s = t - t0;
    const double d0 = density[i];
    return cumulative[i] + d0 * s + (d1 - d0) * s * s / (2.0 * h);
  };
  const auto upto = [&](double t) {
    if (periodic) {
      const double k = std::floor((t - theta.front()) / kTwoPi);
      return k * total + local(t - k * kTwoPi);
    }
    const double tol = 1e-12 * (1.0 + std::abs(t));
    if (t < theta.front() - tol || t > theta.back() + tol) {
      throw DomainError("arc leaves the sampled range of the profile");
    }
    return local(std::clamp(t, theta.front(), theta.back()));
  };
  return upto(b) - upto(a);
}

MeasureProfile profile_from(const ExtendedCaratheodory& F, double r,
                            const std::vector<double>& theta_grid, bool periodic) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("profile radius must lie in (0, 1)");
  if (theta_grid.size() < 2) throw InsufficientDataError("profile needs at least two angles");
  MeasureProfile p;
  p.r = r;
  p.theta = theta_grid;
  p.periodic = periodic;
  if (!std::is_sorted(p.theta.begin(), p.theta.end())) {
    throw DomainError("profile angles must be increasing");
  }
  p.density.reserve(p.theta.size());
  for (double th : p.theta) p.density.push_back(F.F(std::polar(r, th)).value.real() / kTwoPi);
  p.cumulative.assign(p.theta.size(), 0.0);
  for (std::size_t i = 1; i < p.theta.size(); ++i) {
    p.cumulative[i] = p.cumulative[i - 1] +
                      0.5 * (p.theta[i] - p.theta[i - 1]) * (p.density[i] + p.density[i - 1]);
  }
  return p;
}

MeasureProfile lambda_r_profile(const VerblunskySequence& seq, double r,
                                const std::vector<double>& theta_grid) {
  const bool periodic = !theta_grid.empty() && theta_grid.front() >= 0.0 &&
                        theta_grid.back() < kTwoPi;
  return profile_from(ExtendedCaratheodory(seq), r, theta_grid, periodic);
}

MeasureProfile arc_profile(const ExtendedCaratheodory& F, double r, double Theta, double eps,
                           int points) {
  if (points < 2) throw InsufficientDataError("arc profile needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = Theta - eps + 2.0 * eps * k / (points - 1);
  return profile_from(F, r, grid, false);
}

// -------------------------------------------------------------------- Holder

HolderFit holder_exponent(const std::vector<MeasureProfile>& profiles, double Theta,
                          const std::vector<double>& eps) {
  if (eps.size() < 3 || profiles.size() != eps.size()) {
    throw InsufficientDataError("Holder fit needs >= 3 eps values with one profile each");
  }
  HolderFit fit;
  std::vector<std::size_t> order(eps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return eps[a] < eps[b]; });
  for (std::size_t i : order) {
    if (!(eps[i] > 0.0)) throw DomainError("eps must be positive");
    const double m = profiles[i].arc_mass(Theta - eps[i], Theta + eps[i]);
    if (!(m > 0.0)) throw DomainError("arc mass must be positive for a log fit");
    fit.eps.push_back(eps[i]);
    fit.mass.push_back(m);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(fit.eps.size());
  for (std::size_t i = 0; i < fit.eps.size(); ++i) {
    const double x = std::log(fit.eps[i]), y = std::log(fit.mass[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.beta_hat = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.envelope_beta = fit.beta_hat;
  for (std::size_t i = 1; i < fit.eps.size(); ++i) {
    const double s = std::log(fit.mass[i] / fit.mass[i - 1]) / std::log(fit.eps[i] / fit.eps[i - 1]);
    fit.envelope_beta = std::min(fit.envelope_beta, s);
  }
  return fit;
}

HolderFit holder_at(const ExtendedCaratheodory& F, double Theta, const std::vector<double>& eps,
                    int start_points, double tol, int max_points) {
  HolderFit prev;
  bool have_prev = false;
  for (int pts = start_points;; pts = 2 * pts - 1) {
    std::vector<MeasureProfile> profiles;
    profiles.reserve(eps.size());
    for (double e : eps) profiles.push_back(arc_profile(F, 1.0 - e, Theta, e, pts));
    HolderFit fit = holder_exponent(profiles, Theta, eps);
    fit.points = pts;
    if ((have_prev && std::abs(fit.beta_hat - prev.beta_hat) < tol) || 2 * pts - 1 > max_points) {
      return fit;
    }
    prev = std::move(fit);
    have_prev = true;
  }
}

std::vector<double> geometric_eps(double eps_min, double eps_max, int count) {
  if (count < 2 || !(eps_min > 0.0) || !(eps_max > eps_min)) {
    throw DomainError("geometric eps range needs 0 < eps_min < eps_max and count >= 2");
  }
  std::vector<double> out;
  const double ratio = std::pow(eps_max / eps_min, 1.0 / (count - 1));
  for (int k = 0; k < count; ++k) out.push_back(eps_min * std::pow(ratio, k));
  return out;
}

void write_profile_csv(std::ostream& os, const MeasureProfile& p) {
  const auto old = os.precision(17);
  os << "theta,r,density\n";
  for (std::size_t i = 0; i < p.theta.size(); ++i) {
    os << p.theta[i] << ',' << p.r << ',' << p.density[i] << '\n';
  }
  os.precision(old);
}

void write_holder_csv(std::ostream& os, const HolderFit& fit) {
  const auto old = os.precision(17);
  os << "eps,arc_mass,log_eps,log_mass\n";
  for (std::size_t i = 0; i < fit.eps.size(); ++i) {
    os << fit.eps[i] << ',' << fit.mass[i] << ',' << std::log(fit.eps[i]) << ','
       << std::log(fit.mass[i]) << '\n';
  }
  os.precision(old);
}

void write_holder_json(std::ostream& os, const HolderFit& fit, double gamma_cross_check) {
  const nlohmann::json j = {{"beta_hat", fit.beta_hat},
                            {"envelope_beta", fit.envelope_beta},
                            {"gamma_cross_check", gamma_cross_check},
                            {"arc_points", fit.points}};
  os << j.dump(2) << '\n';
}

}  // namespace cmv
