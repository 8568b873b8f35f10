#include "cmv/operator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "cmv/banded.hpp"
#include "cmv/errors.hpp"

namespace cmv {

namespace {

// 2x2 block [[conj a, rho], [rho, -a]]. Coefficients on the unit circle
// (closures) get rho = 0 exactly so truncated windows decouple cleanly.
struct Theta {
  cplx a00, a01, a10, a11;
};

Theta theta(cplx a, bool conjugate) {
  const double m = 1.0 - std::norm(a);
  const double rho = (m <= 1e-14) ? 0.0 : std::sqrt(m);
  Theta t{std::conj(a), rho, rho, -a};
  if (conjugate) {
    t.a00 = std::conj(t.a00);
    t.a11 = std::conj(t.a11);
  }
  return t;
}

long floor_mod2(long n) { return ((n % 2) + 2) % 2; }

// Applies the block-diagonal factor whose 2x2 blocks sit on (p, p+1) with
// p = parity (mod 2), block p carrying alpha(p).
template <class AlphaFn>
State apply_factor(const AlphaFn& alpha, const State& v, long parity, bool conjugate) {
  if (v.amp.empty()) return v;
  const long first = (floor_mod2(v.first) == parity) ? v.first : v.first - 1;
  const long l = v.last();
  const long last_block = (floor_mod2(l) == parity) ? l : l - 1;
  State out;
  out.first = first;
  out.amp.assign(static_cast<std::size_t>(last_block + 2 - first), cplx{});
  for (long p = first; p <= last_block; p += 2) {
    const cplx x0 = v.at(p);
    const cplx x1 = v.at(p + 1);
    if (x0 == cplx{} && x1 == cplx{}) continue;
    const Theta t = theta(alpha(p), conjugate);
    const auto i = static_cast<std::size_t>(p - first);
    out.amp[i] = t.a00 * x0 + t.a01 * x1;
    out.amp[i + 1] = t.a10 * x0 + t.a11 * x1;
  }
  return out;
}

// E = L M: M has blocks starting at odd sites, L at even sites.
template <class AlphaFn>
State apply_e(const AlphaFn& alpha, const State& v) {
  return apply_factor(alpha, apply_factor(alpha, v, 1, false), 0, false);
}

template <class AlphaFn>
State apply_e_adjoint(const AlphaFn& alpha, const State& v) {
  return apply_factor(alpha, apply_factor(alpha, v, 0, true), 1, true);
}

template <class AlphaFn>
State apply_e_transpose(const AlphaFn& alpha, const State& v) {
  return apply_factor(alpha, apply_factor(alpha, v, 0, false), 1, false);
}

void check_unimodular(cplx eta, const char* what) {
  if (std::abs(std::abs(eta) - 1.0) > 1e-12) {
    throw ModulusError(std::string(what) + ": boundary coefficient must be unimodular");
  }
}

}  // namespace

// ---------------------------------------------------------------- BandMatrix

cplx BandMatrix::at(long r, long c) const {
  if (r < lo || r > hi || c < lo || c > hi) return {};
  const long k = c - r + 2;
  if (k < 0 || k > 4) return {};
  return rows[static_cast<std::size_t>(r - lo)][static_cast<std::size_t>(k)];
}

std::vector<cplx> BandMatrix::apply(const std::vector<cplx>& x) const {
  const long n = size();
  std::vector<cplx> y(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    cplx s{};
    for (long k = 0; k < 5; ++k) {
      const long j = i + k - 2;
      if (j < 0 || j >= n) continue;
      s += rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
           x[static_cast<std::size_t>(j)];
    }
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

std::vector<cplx> BandMatrix::apply_adjoint(const std::vector<cplx>& x) const {
  const long n = size();
  std::vector<cplx> y(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    for (long k = 0; k < 5; ++k) {
      const long j = i + k - 2;
      if (j < 0 || j >= n) continue;
      y[static_cast<std::size_t>(j)] +=
          std::conj(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) *
          x[static_cast<std::size_t>(i)];
    }
  }
  return y;
}

std::vector<cplx> BandMatrix::dense() const {
  const long n = size();
  std::vector<cplx> a(static_cast<std::size_t>(n * n));
  for (long i = 0; i < n; ++i) {
    for (long k = 0; k < 5; ++k) {
      const long j = i + k - 2;
      if (j < 0 || j >= n) continue;
      a[static_cast<std::size_t>(i * n + j)] =
          rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
  }
  return a;
}

std::pair<double, double> BandMatrix::unitarity_defect() const {
  // Products of two pentadiagonal matrices have bandwidth 4.
  double d1 = 0.0, d2 = 0.0;
  for (long i = lo; i <= hi; ++i) {
    for (long j = std::max(lo, i - 4); j <= std::min(hi, i + 4); ++j) {
      cplx s1{}, s2{};
      for (long k = std::max(lo, i - 2); k <= std::min(hi, i + 2); ++k) {
        s1 += std::conj(at(k, i)) * at(k, j);  // (A*A)_{ij}
        s2 += at(i, k) * std::conj(at(j, k));  // (AA*)_{ij}
      }
      const cplx id = (i == j) ? cplx{1.0, 0.0} : cplx{};
      d1 = std::max(d1, std::abs(s1 - id));
      d2 = std::max(d2, std::abs(s2 - id));
    }
  }
  return {d1, d2};
}

BandMatrix cmv_band(const CoefficientFn& alpha, long lo, long hi) {
  if (hi < lo) throw SizeError("empty band window");
  BandMatrix b;
  b.lo = lo;
  b.hi = hi;
  b.rows.assign(static_cast<std::size_t>(hi - lo + 1), {});
  for (long c = lo; c <= hi; ++c) {
    const State col = apply_e(alpha, State::delta(c));
    for (long r = std::max(lo, col.first); r <= std::min(hi, col.last()); ++r) {
      const long k = c - r + 2;
      if (k < 0 || k > 4) continue;
      b.rows[static_cast<std::size_t>(r - lo)][static_cast<std::size_t>(k)] = col.at(r);
    }
  }
  return b;
}

FiniteCMV build_finite_cmv(const VerblunskySequence& seq, long N, cplx eta_b) {
  if (N < 2) throw SizeError("finite CMV needs N >= 2");
  check_unimodular(eta_b, "build_finite_cmv");
  const CoefficientFn alpha = [&seq, N, eta_b](long n) -> cplx {
    if (n == -1) return {-1.0, 0.0};
    if (n == N - 1) return eta_b;
    return seq.alpha(n);
  };
  return FiniteCMV{cmv_band(alpha, 0, N - 1), eta_b};
}

ExtendedCMVWindow build_extended_window(const VerblunskySequence& seq, long lo, long hi,
                                        cplx eta_b) {
  if (hi - lo < 1) throw SizeError("extended window needs at least two sites");
  check_unimodular(eta_b, "build_extended_window");
  if (seq.support() == Support::one_sided && lo < 0) {
    throw SupportError("window reaches negative indices of a one-sided sequence");
  }
  const CoefficientFn alpha = [&seq, lo, hi, eta_b](long n) -> cplx {
    if (n == lo - 1 || n == hi) return eta_b;
    return seq.alpha(n);
  };
  return ExtendedCMVWindow{cmv_band(alpha, lo, hi), eta_b};
}

// --------------------------------------------------------------------- State

cplx State::at(long n) const noexcept {
  const long i = n - first;
  if (i < 0 || i >= static_cast<long>(amp.size())) return {};
  return amp[static_cast<std::size_t>(i)];
}

double State::norm() const {
  double s = 0.0;
  for (const cplx& a : amp) s += std::norm(a);
  return std::sqrt(s);
}

State State::delta(long n, cplx value) { return State{n, {value}}; }

State combine(const std::vector<std::pair<cplx, State>>& terms) {
  long lo = 0, hi = -1;
  bool any = false;
  for (const auto& [c, s] : terms) {
    if (s.amp.empty()) continue;
    lo = any ? std::min(lo, s.first) : s.first;
    hi = any ? std::max(hi, s.last()) : s.last();
    any = true;
  }
  State out;
  if (!any) return out;
  out.first = lo;
  out.amp.assign(static_cast<std::size_t>(hi - lo + 1), cplx{});
  for (const auto& [c, s] : terms) {
    for (std::size_t i = 0; i < s.amp.size(); ++i) {
      out.amp[static_cast<std::size_t>(s.first - lo) + i] += c * s.amp[i];
    }
  }
  return out;
}

State add(const State& a, const State& b) { return combine({{1.0, a}, {1.0, b}}); }
State scale(cplx c, const State& a) { return combine({{c, a}}); }

double max_abs_diff(const State& a, const State& b) {
  double m = 0.0;
  const State d = combine({{1.0, a}, {-1.0, b}});
  for (const cplx& x : d.amp) m = std::max(m, std::abs(x));
  return m;
}

// ----------------------------------------------------------------- actions

CoefficientFn operator_coefficients(const VerblunskySequence& seq) {
  if (seq.support() == Support::two_sided) {
    return [seq](long n) { return seq.alpha(n); };
  }
  return [seq](long n) -> cplx {
    if (n == -1) return {-1.0, 0.0};
    return seq.alpha(n);
  };
}

State apply_with(const CoefficientFn& alpha, const State& v) { return apply_e(alpha, v); }
State apply_adjoint_with(const CoefficientFn& alpha, const State& v) {
  return apply_e_adjoint(alpha, v);
}
State apply_transpose_with(const CoefficientFn& alpha, const State& v) {
  return apply_e_transpose(alpha, v);
}

State apply_extended(const VerblunskySequence& seq, const State& v) {
  return apply_e(operator_coefficients(seq), v);
}

State apply_extended_adjoint(const VerblunskySequence& seq, const State& v) {
  return apply_e_adjoint(operator_coefficients(seq), v);
}

State apply_extended_transpose(const VerblunskySequence& seq, const State& v) {
  return apply_e_transpose(operator_coefficients(seq), v);
}

std::pair<VerblunskySequence, VerblunskySequence> split_at_origin(const VerblunskySequence& seq) {
  if (seq.support() != Support::two_sided) {
    throw SupportError("split_at_origin needs a two-sided sequence");
  }
  SequenceTransform right;
  right.support = Support::one_sided;
  SequenceTransform left;
  left.sign = -1;
  left.offset = -2;
  left.conjugate = true;
  left.support = Support::one_sided;
  return {VerblunskySequence::transformed(seq, right),
          VerblunskySequence::transformed(seq, left)};
}

BandMatrix decoupled_band(const VerblunskySequence& seq, long lo, long hi) {
  if (seq.support() != Support::two_sided) {
    throw SupportError("decoupled_band needs a two-sided sequence");
  }
  const CoefficientFn alpha = [&seq, lo, hi](long n) -> cplx {
    if (n == -1) return {-1.0, 0.0};
    if (n == lo - 1 || n == hi) return {1.0, 0.0};
    return seq.alpha(n);
  };
  return cmv_band(alpha, lo, hi);
}

// -------------------------------------------------------- resolvent oracle

ResolventOracle::ResolventOracle(const VerblunskySequence& seq, cplx z, long half_width,
                                 cplx eta_b)
    : z_(z), half_width_(half_width) {
  if (z == cplx{}) throw DomainError("resolvent oracle excludes z = 0");
  if (half_width < 4) throw WindowError("resolvent window half-width must be >= 4");
  if (seq.support() != Support::two_sided) {
    throw SupportError("resolvent oracle needs a two-sided sequence");
  }
  shifted_ = build_extended_window(seq, -half_width, half_width, eta_b).band;
  lu_ = std::make_unique<BandedLU>(shifted_, z);
}

ResolventOracle::~ResolventOracle() = default;
ResolventOracle::ResolventOracle(ResolventOracle&&) noexcept = default;
ResolventOracle& ResolventOracle::operator=(ResolventOracle&&) noexcept = default;

void ResolventOracle::check_interior(long x) const {
  if (std::abs(x) > half_width_ / 2) {
    throw WindowError("index " + std::to_string(x) + " outside the trusted interior |x| <= " +
                      std::to_string(half_width_ / 2));
  }
}

const std::vector<cplx>& ResolventOracle::column(long y) const {
  check_interior(y);
  for (const auto& [k, col] : columns_) {
    if (k == y) return col;
  }
  std::vector<cplx> rhs(static_cast<std::size_t>(shifted_.size()));
  rhs[static_cast<std::size_t>(y + half_width_)] = 1.0;
  columns_.emplace_back(y, lu_->solve(std::move(rhs)));
  return columns_.back().second;
}

cplx ResolventOracle::entry(long x, long y) const {
  check_interior(x);
  return column(y)[static_cast<std::size_t>(x + half_width_)];
}

double ResolventOracle::residual() const {
  double worst = 0.0;
  for (const auto& [y, col] : columns_) {
    std::vector<cplx> r = shifted_.apply(col);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= z_ * col[i];
    r[static_cast<std::size_t>(y + half_width_)] -= 1.0;
    for (const cplx& v : r) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

cplx resolvent_oracle(const VerblunskySequence& seq, cplx z, long half_width, long x, long y) {
  return ResolventOracle(seq, z, half_width).entry(x, y);
}

// ------------------------------------------------------------ spectral basis

double SpectralBasisReport::max_residual() const {
  return std::max({residual_2n_plus_2, residual_2n_minus_1, residual_2n_plus_3,
                   residual_2n_minus_2});
}

SpectralBasisReport spectral_basis_reach(const VerblunskySequence& seq, long n) {
  if (seq.support() != Support::two_sided) {
    throw SupportError("spectral_basis_reach needs a two-sided sequence");
  }
  const auto a = [&seq](long k) { return seq.alpha(k); };
  SpectralBasisReport rep;
  rep.n = n;
  for (long k = 2 * n - 2; k <= 2 * n + 2; ++k) {
    const double r = seq.rho(k);
    rep.min_rho = std::min(rep.min_rho, r);
    if (r <= 1e-12) {
      throw DegenerateRhoError("rho(" + std::to_string(k) + ") vanishes numerically");
    }
  }
  const auto rho = [&seq](long k) { return seq.rho(k); };
  const auto E = [&seq](const State& s) { return apply_extended(seq, s); };
  const auto Einv = [&seq](const State& s) { return apply_extended_adjoint(seq, s); };

  const State d0 = State::delta(2 * n);
  const State d1 = State::delta(2 * n + 1);
  const State Ed0 = E(d0);
  const State Ed1 = E(d1);

  // (a(2n+1)/rho(2n+1)) E d_{2n+1} + E d_{2n+2}
  //   = (rho(2n)/rho(2n+1)) d_{2n} - (a(2n)/rho(2n+1)) d_{2n+1}
  const double r1 = rho(2 * n + 1);
  const State E_d2 = combine({{rho(2 * n) / r1, d0}, {-a(2 * n) / r1, d1}, {-a(2 * n + 1) / r1, Ed1}});
  const State d2 = Einv(E_d2);
  rep.residual_2n_plus_2 = max_abs_diff(d2, State::delta(2 * n + 2));

  // E d_{2n+1} - (conj a(2n+1)/rho(2n+1)) E d_{2n+2}
  //   = (conj a(2n+2)/rho(2n+1)) d_{2n+2} + (rho(2n+2)/rho(2n+1)) d_{2n+3}
  const State d3 = combine({{r1 / rho(2 * n + 2), Ed1},
                            {-std::conj(a(2 * n + 1)) / rho(2 * n + 2), E(d2)},
                            {-std::conj(a(2 * n + 2)) / rho(2 * n + 2), d2}});
  rep.residual_2n_plus_3 = max_abs_diff(d3, State::delta(2 * n + 3));

  // Same identities one pair to the left:
  // E d_{2n-1} - (conj a(2n-1)/rho(2n-1)) E d_{2n}
  //   = (conj a(2n)/rho(2n-1)) d_{2n} + (rho(2n)/rho(2n-1)) d_{2n+1}
  const double rm1 = rho(2 * n - 1);
  const State E_dm1 = combine({{std::conj(a(2 * n - 1)) / rm1, Ed0},
                               {std::conj(a(2 * n)) / rm1, d0},
                               {rho(2 * n) / rm1, d1}});
  const State dm1 = Einv(E_dm1);
  rep.residual_2n_minus_1 = max_abs_diff(dm1, State::delta(2 * n - 1));

  // (a(2n-1)/rho(2n-1)) E d_{2n-1} + E d_{2n}
  //   = (rho(2n-2)/rho(2n-1)) d_{2n-2} - (a(2n-2)/rho(2n-1)) d_{2n-1}
  const double rm2 = rho(2 * n - 2);
  const State dm2 = combine({{a(2 * n - 1) / rm2, E(dm1)},
                             {rm1 / rm2, Ed0},
                             {a(2 * n - 2) / rm2, dm1}});
  rep.residual_2n_minus_2 = max_abs_diff(dm2, State::delta(2 * n - 2));
  return rep;
}

// --------------------------------------------------------------------- walk

WalkEvolver::WalkEvolver(const VerblunskySequence& seq, State psi0, long max_steps)
    : psi_(std::move(psi0)), max_steps_(max_steps) {
  if (max_steps < 0) throw DomainError("walk step count must be >= 0");
  const long lo = psi_.first - 2 * max_steps - 4;
  const long hi = psi_.last() + 2 * max_steps + 4;
  const CoefficientFn alpha = operator_coefficients(seq);
  cache_first_ = lo;
  cache_.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long n = lo; n <= hi; ++n) {
    // One-sided sequences never reach below -1; cache zeros there.
    if (seq.support() == Support::one_sided && n < -1) {
      cache_.emplace_back();
    } else {
      cache_.push_back(alpha(n));
    }
  }
}

cplx WalkEvolver::alpha(long n) const { return cache_[static_cast<std::size_t>(n - cache_first_)]; }

void WalkEvolver::step() {
  if (steps_ >= max_steps_) throw DomainError("walk evolver exhausted its coefficient cache");
  psi_ = apply_e([this](long n) { return alpha(n); }, psi_);
  ++steps_;
}

void WalkEvolver::advance(long k) {
  for (long i = 0; i < k; ++i) step();
}

State evolve_walk(const VerblunskySequence& seq, const State& psi0, long k) {
  if (k < 0) throw DomainError("walk step count must be >= 0");
  WalkEvolver w(seq, psi0, k);
  w.advance(k);
  return w.state();
}

// ---------------------------------------------------------------------- CSV

void write_band_csv(std::ostream& os, const BandMatrix& band) {
  const auto old = os.precision(17);
  os << "row,col,re,im\n";
  for (long r = band.lo; r <= band.hi; ++r) {
    for (long c = std::max(band.lo, r - 2); c <= std::min(band.hi, r + 2); ++c) {
      const cplx v = band.at(r, c);
      if (v == cplx{}) continue;
      os << r << ',' << c << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
  os.precision(old);
}

void write_state_csv(std::ostream& os, const State& s) {
  const auto old = os.precision(17);
  os << "n,re,im,abs2\n";
  for (std::size_t i = 0; i < s.amp.size(); ++i) {
    const cplx v = s.amp[i];
    os << s.first + static_cast<long>(i) << ',' << v.real() << ',' << v.imag() << ','
       << std::norm(v) << '\n';
  }
  os.precision(old);
}

}  // namespace cmv
