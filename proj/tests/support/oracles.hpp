#pragma once

// Independent reference computations used by the unit tests. Nothing here
// calls into the library's algorithms; only plain loops and textbook formulas.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Fixed point of the substitution 1 -> 10, 0 -> 1, first `n` letters.
inline std::vector<int> fibonacci_word(std::size_t n) {
  std::vector<int> w{1};
  while (w.size() < n) {
    std::vector<int> next;
    for (int c : w) {
      if (c == 1) {
        next.push_back(1);
        next.push_back(0);
      } else {
        next.push_back(1);
      }
    }
    w = std::move(next);
  }
  w.resize(n);
  return w;
}

/// Dense row-major matrix helpers.
struct Dense {
  std::size_t n = 0;
  std::vector<cplx> a;
  explicit Dense(std::size_t size) : n(size), a(size * size) {}
  cplx& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

inline Dense multiply(const Dense& x, const Dense& y) {
  Dense z(x.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t k = 0; k < x.n; ++k) {
      if (x(i, k) == cplx{}) continue;
      for (std::size_t j = 0; j < x.n; ++j) z(i, j) += x(i, k) * y(k, j);
    }
  }
  return z;
}

/// C = L M on sites lo..hi, with 2x2 blocks [[conj a, rho], [rho, -a]] on
/// (p, p+1): L carries even p, M odd p. Out-of-window partners are dropped and
/// the lone diagonal entry becomes conj(a) (top) or -a (bottom).
inline Dense cmv_dense(const std::function<cplx(long)>& alpha, long lo, long hi) {
  const auto n = static_cast<std::size_t>(hi - lo + 1);
  Dense L(n), M(n);
  const auto place = [&](Dense& D, long p) {
    const cplx a = alpha(p);
    const double rho = std::sqrt(std::max(0.0, 1.0 - std::norm(a)));
    const bool top = p >= lo && p <= hi;
    const bool bottom = p + 1 >= lo && p + 1 <= hi;
    const auto i = static_cast<std::size_t>(p - lo);
    if (top) D(i, i) = std::conj(a);
    if (bottom) D(i + 1, i + 1) = -a;
    if (top && bottom) {
      D(i, i + 1) = rho;
      D(i + 1, i) = rho;
    }
  };
  for (long p = lo - 1; p <= hi; ++p) {
    const long parity = ((p % 2) + 2) % 2;
    place(parity == 0 ? L : M, p);
  }
  return multiply(L, M);
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<cplx> solve(Dense A, std::vector<cplx> b) {
  const std::size_t n = A.n;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(A(r, c)) > std::abs(A(piv, c))) piv = r;
    }
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(c, j), A(piv, j));
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const cplx f = A(r, c) / A(c, c);
      if (f == cplx{}) continue;
      for (std::size_t j = c; j < n; ++j) A(r, j) -= f * A(c, j);
      b[r] -= f * b[c];
    }
  }
  std::vector<cplx> x(n);
  for (std::size_t i = n; i-- > 0;) {
    cplx s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return x;
}

/// Schur function of the constant sequence a: root with |f| < 1 of
/// conj(a) z f^2 + (1 - z) f - a = 0.
inline cplx constant_schur(cplx a, cplx z) {
  const cplx A = std::conj(a) * z, B = 1.0 - z, C = -a;
  if (std::abs(A) < 1e-300) return -C / B;
  const cplx disc = std::sqrt(B * B - 4.0 * A * C);
  const cplx r1 = (-B + disc) / (2.0 * A), r2 = (-B - disc) / (2.0 * A);
  return std::abs(r1) < std::abs(r2) ? r1 : r2;
}

inline cplx constant_caratheodory(cplx a, cplx z) {
  const cplx f = constant_schur(a, z);
  return (1.0 + z * f) / (1.0 - z * f);
}

/// Szego recursion for monic polynomials and their reversals, normalized by rho.
/// Returns (phi_n(z), phi*_n(z)) starting from (eta0, eta0*).
inline std::pair<cplx, cplx> szego(const std::function<cplx(long)>& alpha, cplx z, long n,
                                   cplx eta0, cplx eta0s) {
  cplx p = eta0, ps = eta0s;
  for (long k = 0; k < n; ++k) {
    const cplx a = alpha(k);
    const double rho = std::sqrt(1.0 - std::norm(a));
    const cplx np = (z * p - std::conj(a) * ps) / rho;
    const cplx nps = (ps - a * z * p) / rho;
    p = np;
    ps = nps;
  }
  return {p, ps};
}

/// Brute-force maximum of |((1-l) + (1+l)F) / ((1+l) + (1-l)F)| on a fine grid.
inline double mobius_grid(cplx F, int points) {
  double best = 0.0;
  for (int k = 0; k < points; ++k) {
    const cplx l = std::polar(1.0, 2.0 * std::numbers::pi * k / points);
    best = std::max(best, std::abs(((1.0 - l) + (1.0 + l) * F) / ((1.0 + l) + (1.0 - l) * F)));
  }
  return best;
}

inline cplx random_in_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}

}  // namespace oracle
