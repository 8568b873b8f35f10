#include "cmv/caratheodory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "cmv/errors.hpp"
#include "cmv/transfer.hpp"

namespace cmv {

// ----------------------------------------------------------- SchurEvaluator

SchurEvaluator::SchurEvaluator(const VerblunskySequence& seq, int max_depth)
    : seq_(seq), max_depth_(max_depth) {
  if (max_depth < 1) throw DepthError("Schur max depth must be >= 1");
}

void SchurEvaluator::ensure(int depth) const {
  if (depth > max_depth_) {
    throw DepthError("Schur depth " + std::to_string(depth) + " exceeds the maximum " +
                     std::to_string(max_depth_));
  }
  const auto have = static_cast<int>(alpha_.size());
  if (have >= depth) return;
  alpha_.reserve(static_cast<std::size_t>(depth));
  for (int n = have; n < depth; ++n) alpha_.push_back(seq_.alpha(n));
}

cplx SchurEvaluator::schur_function(cplx z, int depth) const {
  if (depth < 1) throw DepthError("Schur depth must be >= 1");
  if (!(std::abs(z) < 1.0)) throw DiskError("Schur evaluation needs |z| < 1");
  ensure(depth);
  // f_n = (alpha_n + z f_{n+1}) / (1 + conj(alpha_n) z f_{n+1}), tail f = 0.
  cplx f{};
  for (int n = depth - 1; n >= 0; --n) {
    const cplx a = alpha_[static_cast<std::size_t>(n)];
    const cplx zf = z * f;
    f = (a + zf) / (1.0 + std::conj(a) * zf);
  }
  return f;
}

CaratheodoryValue SchurEvaluator::evaluate(cplx z, int depth) const {
  const cplx zf = z * schur_function(z, depth);
  return {(1.0 + zf) / (1.0 - zf), false, depth};
}

CaratheodoryValue SchurEvaluator::evaluate_adaptive(cplx z, double tol) const {
  if (!(std::abs(z) < 1.0)) throw DiskError("Schur evaluation needs |z| < 1");
  int depth = std::min(64, max_depth_);
  CaratheodoryValue prev = evaluate(z, depth);
  while (depth < max_depth_) {
    const int next_depth = std::min(2 * depth, max_depth_);
    const CaratheodoryValue cur = evaluate(z, next_depth);
    if (std::abs(cur.value - prev.value) < tol * (1.0 + std::abs(cur.value))) return cur;
    prev = cur;
    depth = next_depth;
  }
  throw DepthError("Schur evaluation did not converge within depth " +
                   std::to_string(max_depth_) + " at |z| = " + std::to_string(std::abs(z)));
}

CaratheodoryValue SchurEvaluator::evaluate_anywhere(cplx z, double tol) const {
  const double m = std::abs(z);
  if (m < 1.0) return evaluate_adaptive(z, tol);
  if (m == 1.0) throw DiskError("Caratheodory functions are not evaluated on the circle");
  CaratheodoryValue v = evaluate_adaptive(1.0 / std::conj(z), tol);
  v.value = -std::conj(v.value);
  v.anti = true;
  return v;
}

CaratheodoryValue schur_eval_F(const VerblunskySequence& seq, cplx z, int depth) {
  if (depth < 1) throw DepthError("Schur depth must be >= 1");
  return SchurEvaluator(seq, std::max(depth, 1)).evaluate(z, depth);
}

CaratheodoryValue schur_eval_F_adaptive(const VerblunskySequence& seq, cplx z, double tol) {
  return SchurEvaluator(seq).evaluate_adaptive(z, tol);
}

// -------------------------------------------------------------------- M-

CaratheodoryValue m_minus(const CaratheodoryValue& F_minus, cplx alpha0) {
  if (!(std::abs(alpha0) < 1.0)) throw ModulusError("m_minus needs |alpha0| < 1");
  const cplx a = std::conj(alpha0);
  const cplx I{0.0, 1.0};
  const cplx F = F_minus.value;
  const cplx num = (1.0 - a).real() - I * (1.0 + a).imag() * F;
  const cplx den = I * (1.0 - a).imag() - (1.0 + a).real() * F;
  if (std::abs(den) <= 1e-14 * (1.0 + std::abs(num))) {
    throw PoleError("m_minus denominator vanishes");
  }
  return {num / den, !F_minus.anti, F_minus.depth};
}

// -------------------------------------------------------- Alexandrov / JL

std::pair<double, double> alexandrov_norms(const VerblunskySequence& seq, cplx lambda, cplx z,
                                           double L) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12) throw ModulusError("lambda must be unimodular");
  SolutionTrace phi(seq, z, {1.0, std::conj(lambda)});
  SolutionTrace psi(seq, z, {1.0, -std::conj(lambda)});
  return {phi.norm(L), psi.norm(L)};
}

XOfR solve_x_of_r(const VerblunskySequence& seq, cplx lambda, cplx z, double r,
                  long max_horizon) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("x(r) needs r in (0, 1)");
  if (std::abs(std::abs(z) - 1.0) > 1e-10) throw DomainError("x(r) needs |z| = 1");
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12) throw ModulusError("lambda must be unimodular");

  SolutionTrace phi(seq, z, {1.0, std::conj(lambda)});
  SolutionTrace psi(seq, z, {1.0, -std::conj(lambda)});
  const double target = std::sqrt(2.0);
  const auto product = [&](long k) {
    return (1.0 - r) * std::sqrt(phi.squared_norm(k) * psi.squared_norm(k));
  };

  XOfR out;
  if (product(0) >= target) {
    out.clamped_at_zero = true;
    out.phi_norm = phi.norm(0.0);
    out.psi_norm = psi.norm(0.0);
    out.residual = product(0) - target;
    return out;
  }

  // Bracket: product(lo) < target <= product(hi), integers.
  long lo = 0, hi = 1;
  while (product(hi) < target) {
    lo = hi;
    hi *= 2;
    if (hi > max_horizon) {
      throw HorizonError("x(r) exceeds the solution horizon " + std::to_string(max_horizon));
    }
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (product(mid) < target ? lo : hi) = mid;
  }

  // On [lo, lo+1] the squared norms are linear in t, so the defining equation
  // is a quadratic in t with exactly one root in (0, 1].
  const double a1 = phi.squared_norm(lo), d1 = phi.squared_norm(hi) - a1;
  const double a2 = psi.squared_norm(lo), d2 = psi.squared_norm(hi) - a2;
  const double c = 2.0 / ((1.0 - r) * (1.0 - r));
  const double qa = d1 * d2, qb = a1 * d2 + a2 * d1, qc = a1 * a2 - c;
  double t;
  if (qa <= 1e-300 * std::max(1.0, qb)) {
    t = -qc / qb;
  } else {
    const double disc = std::sqrt(std::max(0.0, qb * qb - 4.0 * qa * qc));
    // qc < 0, so this form avoids cancellation for the positive root.
    t = (2.0 * -qc) / (qb + disc);
  }
  t = std::clamp(t, 0.0, 1.0);
  out.x = static_cast<double>(lo) + t;
  out.phi_norm = phi.norm_within(out.x);
  out.psi_norm = psi.norm_within(out.x);
  out.residual = (1.0 - r) * out.phi_norm * out.psi_norm - target;
  out.horizon = std::min(phi.horizon(), psi.horizon());
  return out;
}

JLRatio jl_ratio_detail(const VerblunskySequence& seq, cplx lambda, cplx z, double r) {
  JLRatio out;
  out.x = solve_x_of_r(seq, lambda, z, r);
  const SchurEvaluator rotated(seq.rotated(lambda));
  out.abs_F = std::abs(rotated.evaluate_adaptive(r * z).value);
  out.ratio = out.abs_F * out.x.phi_norm / out.x.psi_norm;
  return out;
}

double jl_ratio(const VerblunskySequence& seq, cplx lambda, cplx z, double r) {
  return jl_ratio_detail(seq, lambda, z, r).ratio;
}

// ---------------------------------------------------------------- Mobius

double mobius_map_abs(cplx F, cplx lambda) {
  return std::abs(((1.0 - lambda) + (1.0 + lambda) * F) / ((1.0 + lambda) + (1.0 - lambda) * F));
}

double mobius_sup(const CaratheodoryValue& F) {
  if (!(F.value.real() > 0.0)) throw DomainError("mobius_sup needs Re F > 0");
  const double p = std::abs(1.0 + F.value);
  const double m = std::abs(1.0 - F.value);
  return (p + m) / (p - m);
}

double mobius_sup_grid(cplx F, int points) {
  double best = 0.0;
  for (int k = 0; k < points; ++k) {
    const double th = 2.0 * std::numbers::pi * k / points;
    best = std::max(best, mobius_map_abs(F, std::polar(1.0, th)));
  }
  return best;
}

double mobius_sup_refined(cplx F, int points) {
  const double h = 2.0 * std::numbers::pi / points;
  int kbest = 0;
  double best = -1.0;
  for (int k = 0; k < points; ++k) {
    const double v = mobius_map_abs(F, std::polar(1.0, h * k));
    if (v > best) {
      best = v;
      kbest = k;
    }
  }
  // The map is unimodal on the circle, so the maximum lies within one grid
  // step of the best grid point.
  const auto g = [F](double th) { return mobius_map_abs(F, std::polar(1.0, th)); };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = h * (kbest - 1), b = h * (kbest + 1);
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - invphi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + invphi * (b - a);
      gd = g(d);
    }
  }
  return std::max({best, gc, gd, g(0.5 * (a + b))});
}

void write_caratheodory_csv(std::ostream& os, const std::vector<CaratheodoryRow>& rows) {
  const auto old = os.precision(17);
  os << "r,theta,re_F,im_F,x_of_r,jl_ratio,mobius_sup\n";
  for (const auto& row : rows) {
    os << row.r << ',' << row.theta << ',' << row.F.real() << ',' << row.F.imag() << ','
       << row.x_of_r << ',' << row.jl << ',' << row.mobius << '\n';
  }
  os.precision(old);
}

}  // namespace cmv
