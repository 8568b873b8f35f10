#include "cmv/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include <json.hpp>

#include "cmv/errors.hpp"

namespace cmv {

// --------------------------------------------------------------------- Mat2C

double Mat2C::norm() const {
  const double s = std::norm(a_) + std::norm(b_) + std::norm(c_) + std::norm(d_);
  const double dd = std::abs(det_from_entries());
  const double disc = std::max(0.0, s * s - 4.0 * dd * dd);
  return std::sqrt(0.5 * (s + std::sqrt(disc)));
}

double Mat2C::max_abs() const {
  return std::max({std::abs(a_), std::abs(b_), std::abs(c_), std::abs(d_)});
}

bool Mat2C::finite() const {
  const auto ok = [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
  return ok(a_) && ok(b_) && ok(c_) && ok(d_);
}

Mat2C operator*(const Mat2C& l, const Mat2C& r) {
  return {l.a_ * r.a_ + l.b_ * r.c_, l.a_ * r.b_ + l.b_ * r.d_,
          l.c_ * r.a_ + l.d_ * r.c_, l.c_ * r.b_ + l.d_ * r.d_, l.det_ * r.det_};
}

Mat2C operator*(cplx s, const Mat2C& m) {
  return {s * m.a_, s * m.b_, s * m.c_, s * m.d_, s * s * m.det_};
}

double max_entry_diff(const Mat2C& x, const Mat2C& y) {
  return std::max({std::abs(x.a() - y.a()), std::abs(x.b() - y.b()), std::abs(x.c() - y.c()),
                   std::abs(x.d() - y.d())});
}

// ------------------------------------------------------------ CocycleProduct

Mat2C CocycleProduct::value() const {
  const double s = std::exp(log_scale);
  if (!std::isfinite(s)) throw OverflowError("cocycle product exceeds double range");
  Mat2C out = cplx(s, 0.0) * matrix;
  if (!out.finite()) throw OverflowError("cocycle product exceeds double range");
  return out;
}

double CocycleProduct::log_norm() const { return std::log(matrix.norm()) + log_scale; }

cplx CocycleProduct::log_det() const {
  // The cached determinant stays exact where the entries cancel.
  return std::log(matrix.det()) + 2.0 * log_scale;
}

// ------------------------------------------------------------------ one step

Mat2C one_step(cplx alpha, cplx z) {
  const double r2 = 1.0 - std::norm(alpha);
  if (!(r2 > 1e-28)) throw DegenerateRhoError("one_step: rho vanishes");
  const double inv = 1.0 / std::sqrt(r2);
  return {inv * z, -inv * std::conj(alpha), -inv * alpha * z, inv};
}

Mat2C one_step(const VerblunskySequence& seq, cplx z, long n) { return one_step(seq.alpha(n), z); }

CocycleProduct cocycle_product(const VerblunskySequence& seq, cplx z, long L, long start) {
  if (L < 0) throw DomainError("cocycle length must be >= 0");
  CocycleProduct p;
  for (long k = 0; k < L; ++k) {
    p.matrix = one_step(seq, z, start + k) * p.matrix;
    if ((k + 1) % 64 == 0 || k + 1 == L) {
      const double m = p.matrix.max_abs();
      if (!(m > 0.0) || !std::isfinite(m)) {
        throw OverflowError("cocycle product left the representable range");
      }
      p.matrix = cplx(1.0 / m, 0.0) * p.matrix;
      p.log_scale += std::log(m);
    }
  }
  return p;
}

// ---------------------------------------------------------------- SL(2,C)

cplx sqrt_branch(cplx z) { return sqrt_branch_power(z, 1); }

cplx sqrt_branch_power(cplx z, long n) {
  if (z == cplx{}) throw DomainError("z^{1/2} needs z != 0");
  double theta = std::arg(z);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  const double half_n = 0.5 * static_cast<double>(n);
  // Reduce the phase modulo 2 pi before exponentiating to keep accuracy at large n.
  const double phase = std::remainder(half_n * theta, 2.0 * std::numbers::pi);
  return std::polar(std::exp(half_n * std::log(std::abs(z))), phase);
}

Mat2C normalize_sl2(const Mat2C& T, cplx z, long n) {
  return (1.0 / sqrt_branch_power(z, n)) * T;
}

CocycleProduct normalize_sl2(const CocycleProduct& T, cplx z, long n) {
  if (z == cplx{}) throw DomainError("z^{1/2} needs z != 0");
  const double log_abs = 0.5 * static_cast<double>(n) * std::log(std::abs(z));
  const cplx unit = sqrt_branch_power(z / std::abs(z), n);
  return CocycleProduct{(1.0 / unit) * T.matrix, T.log_scale - log_abs};
}

// ------------------------------------------------------------ SolutionTrace

SolutionTrace::SolutionTrace(const VerblunskySequence& seq, cplx z, std::pair<cplx, cplx> initial)
    : seq_(seq), z_(z) {
  const double n2 = std::norm(initial.first) + std::norm(initial.second);
  if (std::abs(n2 - 2.0) > 1e-10) {
    throw NormalizationError("initial pair must satisfy |eta0|^2 + |eta0*|^2 = 2");
  }
  eta_.push_back(initial);
  partial_.push_back(0.5 * n2);
}

void SolutionTrace::extend(long n) {
  eta_.reserve(static_cast<std::size_t>(std::max<long>(n + 1, 0)));
  while (horizon() < n) {
    const long j = horizon();
    const auto [x, y] = eta_.back();
    const auto next = one_step(seq_, z_, j).apply(x, y);
    const double s = partial_.back() + 0.5 * (std::norm(next.first) + std::norm(next.second));
    if (!std::isfinite(s)) throw OverflowError("solution norm exceeds double range");
    eta_.push_back(next);
    partial_.push_back(s);
  }
}

std::pair<cplx, cplx> SolutionTrace::pair(long j) const {
  if (j < 0 || j > horizon()) throw HorizonError("pair index outside the computed horizon");
  return eta_[static_cast<std::size_t>(j)];
}

double SolutionTrace::squared_norm(long n) {
  if (n < 0) throw DomainError("norm index must be >= 0");
  extend(n);
  return partial_[static_cast<std::size_t>(n)];
}

double SolutionTrace::norm(double L) {
  if (!(L >= 0.0)) throw DomainError("norm length must be >= 0");
  extend(static_cast<long>(std::floor(L)) + 1);
  return norm_within(L);
}

double SolutionTrace::norm_within(double L) const {
  if (!(L >= 0.0)) throw DomainError("norm length must be >= 0");
  const auto k = static_cast<long>(std::floor(L));
  const double t = L - static_cast<double>(k);
  if (k > horizon() || (t > 0.0 && k + 1 > horizon())) {
    throw HorizonError("norm requested beyond the computed horizon");
  }
  double s = partial_[static_cast<std::size_t>(k)];
  if (t > 0.0) s += t * (partial_[static_cast<std::size_t>(k + 1)] - s);
  return std::sqrt(s);
}

double solution_norm(const VerblunskySequence& seq, cplx z, std::pair<cplx, cplx> initial,
                     double L) {
  SolutionTrace tr(seq, z, initial);
  return tr.norm(L);
}

// ------------------------------------------------------------------ fitting

bool FitResult::bounds_hold(double L, double norm, double rel_tol) const {
  const double lo = c_low * std::pow(L, gamma_low);
  const double hi = c_high * std::pow(L, gamma_high);
  return norm >= lo * (1.0 - rel_tol) && norm <= hi * (1.0 + rel_tol);
}

FitResult fit_power_law(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 8) {
    throw InsufficientDataError("power-law fit needs at least 8 samples, got " +
                                std::to_string(samples.size()));
  }
  auto pts = samples;
  std::sort(pts.begin(), pts.end());
  for (const auto& [L, v] : pts) {
    if (!(L > 0.0) || !(v > 0.0)) throw DomainError("power-law samples must be positive");
  }
  if (!(pts.back().first > pts.front().first)) {
    throw InsufficientDataError("power-law samples need distinct L values");
  }

  const double lx0 = std::log(pts.front().first);
  const double ly0 = std::log(pts.front().second);
  FitResult fit;
  fit.samples = pts.size();
  fit.gamma_low = std::numeric_limits<double>::infinity();
  fit.gamma_high = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double dx = std::log(pts[i].first) - lx0;
    if (dx <= 0.0) continue;
    const double slope = (std::log(pts[i].second) - ly0) / dx;
    fit.gamma_low = std::min(fit.gamma_low, slope);
    fit.gamma_high = std::max(fit.gamma_high, slope);
  }
  fit.c_low = std::exp(ly0 - fit.gamma_low * lx0);
  fit.c_high = std::exp(ly0 - fit.gamma_high * lx0);
  const double denom = fit.gamma_low + fit.gamma_high;
  fit.beta = (denom != 0.0) ? 2.0 * fit.gamma_low / denom : 0.0;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [L, v] : pts) {
    const double x = std::log(L), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  fit.gamma_ls = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

std::vector<std::pair<double, double>> dyadic_norm_samples(SolutionTrace& trace, double base,
                                                           int count) {
  std::vector<std::pair<double, double>> out;
  double L = base;
  for (int k = 0; k < count; ++k, L *= 2.0) out.emplace_back(L, trace.norm(L));
  return out;
}

SolutionExponents solution_exponents(const VerblunskySequence& seq, cplx z, int lambda_count,
                                     double L_min, double L_max, int samples) {
  if (lambda_count < 1) throw DomainError("need at least one lambda");
  if (!(L_min > 0.0 && L_max > L_min) || samples < 2) throw DomainError("bad sampling range");
  SolutionExponents e;
  e.gamma1 = e.gamma1_ls = std::numeric_limits<double>::infinity();
  const double ratio = std::pow(L_max / L_min, 1.0 / (samples - 1));
  for (int k = 0; k < lambda_count; ++k) {
    const cplx lambda = std::polar(1.0, kTwoPi * (k + 0.125) / lambda_count);
    for (double s : {1.0, -1.0}) {
      SolutionTrace trace(seq, z, {1.0, s * std::conj(lambda)});
      std::vector<std::pair<double, double>> pts;
      for (int i = 0; i < samples; ++i) {
        const double L = L_min * std::pow(ratio, i);
        pts.emplace_back(L, trace.norm(L));
      }
      const FitResult fit = fit_power_law(pts);
      e.gamma1 = std::min(e.gamma1, fit.gamma_low);
      e.gamma2 = std::max(e.gamma2, fit.gamma_high);
      e.gamma1_ls = std::min(e.gamma1_ls, fit.gamma_ls);
      e.gamma2_ls = std::max(e.gamma2_ls, fit.gamma_ls);
    }
  }
  return e;
}

void write_norm_csv(std::ostream& os, const std::vector<std::pair<double, double>>& samples) {
  const auto old = os.precision(17);
  os << "L,norm,log_L,log_norm\n";
  for (const auto& [L, v] : samples) {
    os << L << ',' << v << ',' << std::log(L) << ',' << std::log(v) << '\n';
  }
  os.precision(old);
}

void write_fit_json(std::ostream& os, const FitResult& fit) {
  const nlohmann::json j = {{"gamma_low", fit.gamma_low}, {"gamma_high", fit.gamma_high},
                            {"c_low", fit.c_low},         {"c_high", fit.c_high},
                            {"beta", fit.beta},           {"gamma_ls", fit.gamma_ls},
                            {"samples", fit.samples}};
  os << j.dump(2) << '\n';
}

}  // namespace cmv
