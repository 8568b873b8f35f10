#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <sstream>

#include "cmv/coeffs.hpp"
#include "cmv/errors.hpp"
#include "cmv/tracemap.hpp"
#include "support/oracles.hpp"

using namespace cmv;

namespace {

using M2 = std::array<cplx, 4>;  // row-major

M2 mul(const M2& x, const M2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

M2 inv(const M2& x) {
  const cplx d = x[0] * x[3] - x[1] * x[2];
  return {x[3] / d, -x[1] / d, -x[2] / d, x[0] / d};
}

M2 from(const Mat2C& m) { return {m.a(), m.b(), m.c(), m.d()}; }

// Plain product over sites 1..q of the Fibonacci word, each step divided by sqrt(z).
M2 fibonacci_product(cplx a, cplx b, cplx z, long q) {
  const auto word = oracle::fibonacci_word(static_cast<std::size_t>(q));
  const cplx s = std::polar(std::sqrt(std::abs(z)),
                            0.5 * std::fmod(std::arg(z) + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi));
  M2 P{1.0, 0.0, 0.0, 1.0};
  for (long n = 1; n <= q; ++n) {
    const cplx al = word[static_cast<std::size_t>(n - 1)] ? a : b;
    const double rho = std::sqrt(1.0 - std::norm(al));
    const M2 T{z / (rho * s), -std::conj(al) / (rho * s), -al * z / (rho * s), 1.0 / (rho * s)};
    P = mul(T, P);
  }
  return P;
}

const Alphabet kAlphabet{0.5, -0.5};

}  // namespace

TEST(TraceMap, GoldenDenominatorsAreFibonacci) {
  const ContinuedFractionData cf = golden_cf(20);
  long long f0 = 1, f1 = 1;
  for (int n = 1; n <= 20; ++n) {
    EXPECT_EQ(cf.q[static_cast<std::size_t>(n)], f1) << n;
    const long long f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
  }
  EXPECT_TRUE(cf.all_ones());
  EXPECT_NEAR(cf.d, 1.0, 1e-15);
  EXPECT_TRUE(cf.bound_verified);
}

TEST(TraceMap, DenominatorRecursionForGeneralQuotients) {
  const ContinuedFractionData cf = cf_data({2, 3, 1, 4, 2, 2, 5}, 7);
  std::vector<long long> q{1, 1};
  const std::vector<long> a{2, 3, 1, 4, 2, 2, 5};
  // q[n+1] = a_{n+1} q[n] + q[n-1] with q[0] = q[1] = 1 (a_1 enters at n = 1).
  for (std::size_t n = 1; n < 7; ++n) q.push_back(a[n] * q[n] + q[n - 1]);
  for (std::size_t n = 0; n < q.size(); ++n) EXPECT_EQ(cf.q[n], q[n]) << n;
  EXPECT_FALSE(cf.all_ones());
  EXPECT_THROW(cf_data({1, 0, 1}, 3), DomainError);
  EXPECT_THROW(cf_data({1, 1}, 0), DomainError);
}

TEST(TraceMap, PartialQuotients) {
  EXPECT_EQ(partial_quotients(kGoldenFrequency, 30), std::vector<long>(30, 1L));
  const auto s2 = partial_quotients(std::sqrt(2.0) - 1.0, 12);
  EXPECT_EQ(s2, std::vector<long>(12, 2L));
  const auto e = partial_quotients(std::exp(1.0) - 2.0, 8);  // [0; 1, 2, 1, 1, 4, 1, 1, 6]
  EXPECT_EQ(e, (std::vector<long>{1, 2, 1, 1, 4, 1, 1, 6}));
  EXPECT_THROW(partial_quotients(0.5, 5), DomainError);
  EXPECT_THROW(partial_quotients(1.5, 5), FrequencyRangeError);
}

TEST(TraceMap, LetterMatricesAreUnimodular) {
  for (cplx letter : {cplx(0.5, 0.0), cplx(-0.3, 0.4), cplx(0.0, 0.0)}) {
    for (double th : {0.1, 1.7, 3.2, 6.0}) {
      const Mat2C A = letter_matrix(letter, std::polar(1.0, th));
      EXPECT_LT(std::abs(A.det_from_entries() - 1.0), 1e-13);
    }
  }
}

TEST(TraceMap, OrbitMatchesDirectFibonacciProducts) {
  const ContinuedFractionData cf = golden_cf(14);
  for (double th : {0.4, 2.5, 5.1}) {
    const cplx z = std::polar(1.0, th);
    const TraceOrbit orbit = trace_orbit(kAlphabet, cf, z, 14);
    ASSERT_FALSE(orbit.overflow);
    for (const TraceRecord& rec : orbit.records) {
      const M2 P = fibonacci_product(kAlphabet.first, kAlphabet.second, z, rec.q);
      const double scale = 1.0 + std::abs(P[0]) + std::abs(P[3]);
      EXPECT_LT(std::abs(rec.x - (P[0] + P[3])), 1e-10 * scale) << th << ' ' << rec.n;
    }
  }
}

TEST(TraceMap, FrickeInvariantIsCommutatorTrace) {
  const ContinuedFractionData cf = golden_cf(12);
  // A point of the depth-12 approximation keeps the traces bounded, so the
  // commutator oracle does not lose digits to cancellation.
  const cplx z = std::polar(1.0, spectrum_sample_points(kAlphabet, cf, 12, 1024, 1).front());
  const TraceOrbit orbit = trace_orbit(kAlphabet, cf, z, 12);
  for (std::size_t k = 1; k < orbit.matrices.size() && k <= orbit.records.size(); ++k) {
    const M2 A = from(orbit.matrices[k - 1]), B = from(orbit.matrices[k]);
    const M2 C = mul(mul(A, B), mul(inv(A), inv(B)));
    const cplx expected = C[0] + C[3] + 2.0;
    const TraceRecord& rec = orbit.records[k - 1];
    EXPECT_LT(std::abs(rec.I - expected), 1e-8 * (1.0 + std::abs(expected))) << k;
  }
  EXPECT_LT(orbit.invariant_drift(), 1e-10);
  EXPECT_LE(orbit.invariant_drift_scaled(), orbit.invariant_drift() + 1e-300);
}

TEST(TraceMap, FreeAlphabetFillsTheCircle) {
  const Alphabet free{0.0, 0.0};
  const auto grid = uniform_theta_grid(128);
  const auto mask = spectrum_approx(free, golden_cf(12), grid, 12, 2.5);
  for (bool b : mask) EXPECT_TRUE(b);
}

TEST(TraceMap, SpectrumApproximationsAreNested) {
  const auto grid = uniform_theta_grid(512);
  const SpectrumAtlas atlas = spectrum_atlas(kAlphabet, golden_cf(12), grid, 12, 2.0 + std::sqrt(9.0));
  for (int m = 1; m < 12; ++m) {
    const auto a = atlas.mask(m), b = atlas.mask(m + 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (b[i]) {
        EXPECT_TRUE(a[i]) << m << ' ' << i;
      }
    }
    EXPECT_GE(atlas.count(m), atlas.count(m + 1));
  }
  EXPECT_GT(atlas.count(12), 0u);
  EXPECT_LT(atlas.count(12), grid.size());
  EXPECT_THROW(spectrum_atlas(kAlphabet, golden_cf(4), grid, 4, 2.0), DomainError);
}

TEST(TraceMap, GammaConstantsAreConsistent) {
  const GammaSweep sweep = gamma_sweep(kAlphabet, golden_cf(10), uniform_theta_grid(512), 10);
  const GammaConstants& g = sweep.constants;
  EXPECT_GT(g.gamma1, 0.0);
  EXPECT_GT(g.gamma2, g.gamma1);
  EXPECT_NEAR(g.beta, 2.0 * g.gamma1 / (g.gamma1 + g.gamma2), 1e-12);
  EXPECT_GT(g.beta, 0.0);
  EXPECT_LT(g.beta, 1.0);
  EXPECT_NEAR(g.K, 2.0 + std::sqrt(8.0 + g.inputs.I_sup), 1e-12);
  std::ostringstream os;
  write_gamma_json(os, g);
  EXPECT_NE(os.str().find("gamma1"), std::string::npos);
}

TEST(TraceMap, SamplePointsLieInApproximation) {
  const auto cf = golden_cf(10);
  const auto pts = spectrum_sample_points(kAlphabet, cf, 10, 1024, 5);
  ASSERT_EQ(pts.size(), 5u);
  const auto grid = uniform_theta_grid(1024);
  const auto mask = spectrum_approx(kAlphabet, cf, grid, 10, 2.0 + std::sqrt(9.0));
  for (double th : pts) {
    const auto i = static_cast<std::size_t>(std::lround(th / (2.0 * std::numbers::pi) * 1024.0)) % 1024;
    EXPECT_NEAR(grid[i], th, 1e-12);
  }
  EXPECT_EQ(mask.size(), grid.size());
}

TEST(TraceMap, AtlasCsvHeader) {
  const SpectrumAtlas atlas = spectrum_atlas(kAlphabet, golden_cf(3), uniform_theta_grid(4), 3, 3.0);
  std::ostringstream os;
  write_atlas_csv(os, atlas);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "theta,n,q_n,abs_x,abs_z,re_I,im_I,in_spectrum");
}
