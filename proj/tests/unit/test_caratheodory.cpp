#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cmv/caratheodory.hpp"
#include "cmv/coeffs.hpp"
#include "cmv/errors.hpp"
#include "support/oracles.hpp"

using namespace cmv;

namespace {

// <delta_0, (C + z)(C - z)^{-1} delta_0> for the N x N truncation with
// alpha(-1) = -1 and alpha(N-1) = eta_b, by dense elimination.
cplx dense_F(const VerblunskySequence& seq, long N, cplx eta_b, cplx z) {
  const auto alpha = [&](long n) -> cplx {
    if (n == -1) return -1.0;
    if (n == N - 1) return eta_b;
    return seq.alpha(n);
  };
  oracle::Dense A = oracle::cmv_dense(alpha, 0, N - 1);
  for (long i = 0; i < N; ++i) A(i, i) -= z;
  std::vector<cplx> e(static_cast<std::size_t>(N));
  e[0] = 1.0;
  return 1.0 + 2.0 * z * oracle::solve(A, e)[0];
}

}  // namespace

TEST(Caratheodory, FreeFunctionIsOne) {
  const auto seq = make_constant(0.0);
  for (cplx z : {cplx(0.0, 0.0), cplx(0.5, 0.3), cplx(-0.9, 0.1)}) {
    EXPECT_LT(std::abs(schur_eval_F_adaptive(seq, z).value - 1.0), 1e-14);
  }
}

TEST(Caratheodory, ConstantSequenceMatchesQuadraticRoot) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const cplx a = oracle::random_in_disk(rng, 0.9);
    const cplx z = oracle::random_in_disk(rng, 0.95);
    const cplx expected = oracle::constant_caratheodory(a, z);
    const CaratheodoryValue F = schur_eval_F_adaptive(make_constant(a), z);
    EXPECT_LT(std::abs(F.value - expected), 1e-9 * std::abs(expected)) << a << ' ' << z;
    EXPECT_TRUE(F.sign_ok());
    EXPECT_FALSE(F.anti);
  }
}

TEST(Caratheodory, SchurFunctionIsContractive) {
  std::mt19937_64 rng(12);
  std::vector<cplx> v(300);
  for (auto& a : v) a = oracle::random_in_disk(rng, 0.99);
  const SchurEvaluator ev(make_explicit(v));
  for (int t = 0; t < 200; ++t) {
    const cplx z = oracle::random_in_disk(rng, 0.999);
    EXPECT_LE(std::abs(ev.schur_function(z, 300)), 1.0 + 1e-12);
    EXPECT_GT(ev.evaluate(z, 300).value.real(), 0.0);
  }
}

TEST(Caratheodory, OutsideDiskIsAntiReflected) {
  const auto seq = make_sturmian(0.5, -0.5, kGoldenFrequency);
  const SchurEvaluator ev(seq);
  for (cplx z : {cplx(1.5, 0.2), cplx(-0.3, 2.0)}) {
    const CaratheodoryValue out = ev.evaluate_anywhere(z);
    const CaratheodoryValue in = ev.evaluate_adaptive(1.0 / std::conj(z));
    EXPECT_TRUE(out.anti);
    EXPECT_TRUE(out.sign_ok());
    EXPECT_LT(std::abs(out.value + std::conj(in.value)), 1e-13 * std::abs(in.value));
  }
}

TEST(Caratheodory, EigenMeasureMatchesDenseResolvent) {
  std::mt19937_64 rng(13);
  std::vector<cplx> v(40);
  for (auto& a : v) a = oracle::random_in_disk(rng, 0.9);
  const auto seq = make_explicit(v);
  const cplx eta_b = std::polar(1.0, 0.7);
  const EigenMeasure em(seq, 30, eta_b);
  EXPECT_NEAR(em.weight_sum(), 1.0, 1e-12);
  EXPECT_LT(em.max_modulus_defect(), 1e-12);
  for (cplx z : {cplx(0.2, 0.1), cplx(-0.5, 0.6), cplx(0.0, -0.95)}) {
    const cplx expected = dense_F(seq, 30, eta_b, z);
    EXPECT_LT(std::abs(em.F(z).value - expected), 1e-10 * std::abs(expected)) << z;
  }
}

TEST(Caratheodory, EigenMeasureApproachesSchurInsideDisk) {
  const auto seq = make_sturmian(0.5, -0.5, kGoldenFrequency);
  for (cplx z : {cplx(0.3, 0.2), cplx(-0.5, -0.4)}) {
    const cplx schur = schur_eval_F_adaptive(seq, z).value;
    // The truncation only changes Taylor coefficients beyond order ~N.
    EXPECT_LT(std::abs(measure_oracle_F(seq, z, 200).value - schur), 1e-12);
  }
}

TEST(Caratheodory, MinusFunctionConventions) {
  // Free half-line: F_- = 1, alpha0 = 0 gives M_- = -1.
  const CaratheodoryValue F{1.0, false, 0};
  const CaratheodoryValue M = m_minus(F, 0.0);
  EXPECT_LT(std::abs(M.value + 1.0), 1e-15);
  EXPECT_TRUE(M.anti);
  EXPECT_TRUE(M.sign_ok());
  EXPECT_THROW(m_minus(F, 1.0), ModulusError);
  // alpha0 = 0: the denominator is -F.
  EXPECT_THROW(m_minus(CaratheodoryValue{0.0, false, 0}, 0.0), PoleError);
}

TEST(Caratheodory, MobiusClosedFormMatchesGrid) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> re(0.01, 5.0), im(-5.0, 5.0);
  for (int t = 0; t < 200; ++t) {
    const cplx F(re(rng), im(rng));
    const double closed = mobius_sup(CaratheodoryValue{F, false, 0});
    const double brute = oracle::mobius_grid(F, 20000);
    EXPECT_LE(brute, closed * (1.0 + 1e-12));
    EXPECT_LT(std::abs(mobius_sup_refined(F) - closed), 1e-8 * closed);
    EXPECT_LE(mobius_sup_grid(F), closed * (1.0 + 1e-12));
  }
  EXPECT_THROW(mobius_sup(CaratheodoryValue{cplx(-1.0, 0.0), true, 0}), DomainError);
}

TEST(Caratheodory, FreeXOfR) {
  const auto seq = make_constant(0.0);
  for (double r : {0.9, 0.99, 0.999}) {
    const XOfR x = solve_x_of_r(seq, 1.0, std::polar(1.0, 0.3), r);
    // Both norms are sqrt(x + 1) in the free case.
    EXPECT_NEAR(x.x, std::sqrt(2.0) / (1.0 - r) - 1.0, 1e-9 / (1.0 - r)) << r;
    EXPECT_LT(std::abs(x.residual), 1e-10);
    EXPECT_FALSE(x.clamped_at_zero);
  }
  // Both squared norms start at 1, so x = 0 only solves the equation for r <= 1 - sqrt2.
  EXPECT_GT(solve_x_of_r(seq, 1.0, 1.0, 0.01).x, 0.0);
  EXPECT_THROW(solve_x_of_r(seq, 1.0, 0.5, 0.9), DomainError);
  EXPECT_THROW(solve_x_of_r(seq, 2.0, 1.0, 0.9), ModulusError);
}

TEST(Caratheodory, SubordinacyRatioIsBounded) {
  const auto seq = make_sturmian(0.5, -0.5, kGoldenFrequency);
  for (double r : {0.9, 0.99}) {
    for (double th : {0.5, 2.0, 4.0}) {
      const double q = jl_ratio(seq, std::polar(1.0, 0.2), std::polar(1.0, th), r);
      EXPECT_GT(q, 0.05);
      EXPECT_LT(q, 20.0);
    }
  }
  EXPECT_NEAR(jl_ratio(make_constant(0.0), 1.0, std::polar(1.0, 1.0), 0.99), 1.0, 1e-12);
}

TEST(Caratheodory, CsvHeader) {
  std::ostringstream os;
  write_caratheodory_csv(os, {CaratheodoryRow{0.9, 0.1, cplx(1.0, 0.0), 3.0, 1.0, 1.0}});
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "r,theta,re_F,im_F,x_of_r,jl_ratio,mobius_sup");
}
